#pragma once

#include "mars/core/estimator.hpp"
#include "mars/core/problem.hpp"
#include "mars/core/quadrature.hpp"

#include <map>
#include <mutex>
#include <span>
#include <vector>

namespace mars {

struct TechniqueStats {
    double first_moment = 0;  ///< E[⟨I_t⟩]
    double second_moment = 0; ///< E[⟨I_t⟩²]
    double variance = 0;      ///< V[⟨I_t⟩]
    double cost = 1;

    /// variance = second − first², clamped at zero against rounding.
    static TechniqueStats from_moments(double first, double second, double cost);
};

enum class VarianceModel { ExactStochastic, Simplified, NearestRounding };

/// Quadrature tolerance used for moments unless the caller asks for more.
inline constexpr QuadratureOptions kMomentQuadrature{.rel_tol = 1e-10, .abs_tol = 1e-300, .max_panels = 50000};

/// Moments of each primary estimator, E = ∫ Σ_i f_i w_it and E² = ∫ (Σ_i f_i w_it)²/p_t,
/// by adaptive quadrature. Independent of β in BudgetUnaware mode. Throws
/// NumericalError carrying the technique index if quadrature fails.
std::vector<TechniqueStats> technique_moments(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                              const QuadratureOptions &quadrature = kMomentQuadrature);

/// Variance of the β-sample secondary estimator of one technique.
double secondary_variance(const TechniqueStats &stats, double beta, VarianceModel model);

double total_variance(std::span<const TechniqueStats> stats, const BudgetVector &beta, double overhead_variance,
                      VarianceModel model);

/// Σ β_t C_t + C_Δ.
double total_cost(std::span<const TechniqueStats> stats, const BudgetVector &beta, double overhead_cost);

struct Evaluation {
    double variance = 0;
    double cost = 0;
    double inv_efficiency = 0;
};

Evaluation evaluate(std::span<const TechniqueStats> stats, const BudgetVector &beta, const MisProblem &problem,
                    VarianceModel model);

/// Total variance times total cost at β, with moments computed for β.
double inverse_efficiency(const MisProblem &problem, const BudgetVector &beta, WeightMode mode, VarianceModel model);

/// The derivative of V·C with the weight-dependence of the moments ignored:
/// −M_t C_tot/β_t² + V_tot C_t, M_t = E[⟨I_t⟩²] for β_t ≤ 1 and V[⟨I_t⟩] above.
std::vector<double> proxy_gradient(std::span<const TechniqueStats> stats, const BudgetVector &beta,
                                   double total_variance, double total_cost);

/// Memoizes technique_moments. Budget-aware weights only depend on the ratios
/// between budgets, so lookups are keyed by β/β_0 (to ~1e-9 relative); in
/// budget-unaware mode there is a single entry. Thread safe.
class MomentCache {
public:
    MomentCache(const MisProblem &problem, WeightMode mode, const QuadratureOptions &quadrature = kMomentQuadrature)
        : m_problem(problem), m_mode(mode), m_quadrature(quadrature) {}

    std::vector<TechniqueStats> get(const BudgetVector &beta);

    const MisProblem &problem() const { return m_problem; }
    WeightMode mode() const { return m_mode; }
    std::size_t size() const;

private:
    const MisProblem &m_problem;
    WeightMode m_mode;
    QuadratureOptions m_quadrature;
    mutable std::mutex m_mutex;
    std::map<std::vector<long long>, std::vector<TechniqueStats>> m_entries;
};

} // namespace mars
