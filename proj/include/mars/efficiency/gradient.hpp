#pragma once

#include "mars/efficiency/efficiency.hpp"
#include "mars/efficiency/grid.hpp"

#include <vector>

namespace mars {

/// Tighter moment tolerance so that quadrature noise stays far below finite-difference steps.
inline constexpr QuadratureOptions kGradientQuadrature{.rel_tol = 1e-13, .abs_tol = 1e-300, .max_panels = 100000};

/// Central differences of inverse_efficiency with moments recomputed at every
/// perturbed budget; step for component t is h_rel·β_t. Throws ContractViolation
/// if a step would straddle the β = 1 kink.
std::vector<double> true_gradient_fd(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                     VarianceModel model, double h_rel = 1e-5);

/// One-sided differences from below and above; at β_t = 1 these are the two
/// branch derivatives of the piecewise model.
struct OneSidedGradient {
    std::vector<double> left;
    std::vector<double> right;
};

OneSidedGradient one_sided_gradient(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                    VarianceModel model, double h_rel = 1e-6);

/// a·b / (|a||b|). Two zero vectors agree (1); a zero against a nonzero vector gives 0.
double normalized_dot(const std::vector<double> &a, const std::vector<double> &b);

struct GradientMap {
    std::vector<std::vector<double>> axes;
    std::vector<BudgetVector> points;
    std::vector<double> dot;

    /// Fraction of entries strictly above zero.
    double positive_fraction() const;
};

/// Normalized dot product of proxy and finite-difference gradient at every grid
/// point (n_t ≤ 3). The Simplified variance model is used for both, so the map is
/// identically 1 in BudgetUnaware mode.
GradientMap gradient_agreement_map(const MisProblem &problem, WeightMode mode, const GridSpec &grid,
                                   unsigned workers = 0);

/// Proxy gradient at β using freshly computed moments.
std::vector<double> proxy_gradient_at(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                      const QuadratureOptions &quadrature = kMomentQuadrature);

} // namespace mars
