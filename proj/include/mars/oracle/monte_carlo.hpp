#pragma once

#include "mars/core/estimator.hpp"
#include "mars/efficiency/efficiency.hpp"

#include <cstdint>
#include <vector>

namespace mars {

/// Running mean/variance with an exact pairwise merge (Chan et al.).
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x);
    void merge(const RunningStats &other);

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double standard_error() const;
};

/// Realizations of run_estimator split into fixed-size chunks, each with its own
/// RNG stream derived from (seed, chunk index); chunks are merged in index order,
/// so the result does not depend on the number of workers.
RunningStats estimate_many(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options,
                           std::uint64_t runs, std::uint64_t seed, unsigned workers = 0);

struct MonteCarloMoments {
    std::vector<TechniqueStats> stats;
    std::vector<double> first_moment_error;  ///< standard error of E[⟨I_t⟩]
    std::vector<double> second_moment_error; ///< standard error of E[⟨I_t⟩²]
};

/// Brute-force primary-estimator moments: `samples` draws from every technique.
MonteCarloMoments monte_carlo_moments(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                      std::uint64_t samples, std::uint64_t seed, unsigned workers = 0);

} // namespace mars
