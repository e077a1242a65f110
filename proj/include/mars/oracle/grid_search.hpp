#pragma once

#include "mars/efficiency/efficiency.hpp"
#include "mars/efficiency/grid.hpp"

#include <vector>

namespace mars {

struct Landscape {
    std::vector<std::vector<double>> axes;
    std::vector<BudgetVector> points;
    std::vector<Evaluation> values;
};

struct GridSearchResult {
    BudgetVector argmin;
    double min = 0;
    Landscape landscape;
};

/// Exhaustive evaluation of inverse efficiency on the grid (n_t ≤ 3).
GridSearchResult grid_search(const MisProblem &problem, WeightMode mode, VarianceModel model, const GridSpec &grid,
                             unsigned workers = 0);

/// Same, drawing moments from a shared cache.
GridSearchResult grid_search(MomentCache &moments, VarianceModel model, const GridSpec &grid, unsigned workers = 0);

struct RestrictedOptimum {
    BudgetVector beta;
    double inv_efficiency = 0;
};

/// Optima of the two-technique problem restricted to the classical strategies:
/// mixture sampling (β₁ + β₂ = 1), a shared RR/splitting factor (β₁ = β₂), and the
/// optimal mixture ratio scaled by a shared factor. Each restricted problem is
/// scanned densely and then refined with Brent's method.
struct Baselines {
    RestrictedOptimum os;
    RestrictedOptimum rrs;
    RestrictedOptimum o_plus_r;
};

Baselines constrained_baselines(MomentCache &moments, VarianceModel model, const GridSpec &grid);

} // namespace mars
