#pragma once

#include "mars/core/problem.hpp"
#include "mars/core/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mars {

enum class WeightMode { BudgetUnaware, BudgetAware };

enum class Rounding { Naive, LowDiscrepancy };

/// How the sum over realized samples is normalized. RealValued divides by β_t and
/// is unbiased for any rounding. RoundedCount divides by the realized count when
/// β_t > 1 (splitting) and by β_t otherwise; it exists for the rounding study.
enum class Normalization { RealValued, RoundedCount };

/// Positive real sample counts, one per technique.
class BudgetVector {
public:
    BudgetVector() = default;
    BudgetVector(std::vector<double> beta);
    BudgetVector(std::initializer_list<double> beta) : BudgetVector(std::vector<double>(beta)) {}

    static BudgetVector filled(std::size_t n, double value) { return BudgetVector(std::vector<double>(n, value)); }

    std::size_t size() const { return m_beta.size(); }
    double operator[](std::size_t t) const { return m_beta[t]; }
    void set(std::size_t t, double value);

    std::span<const double> values() const { return m_beta; }
    const std::vector<double> &vector() const { return m_beta; }

    /// Throws ContractViolation unless every entry lies in [lo, hi].
    void check_bounds(double lo, double hi) const;

    bool operator==(const BudgetVector &) const = default;

private:
    std::vector<double> m_beta;
};

/// Row-major ν × n_t matrix of MIS weights w_it.
struct WeightMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t t) const { return data[i * cols + t]; }
    double &operator()(std::size_t i, std::size_t t) { return data[i * cols + t]; }
};

/// Balance heuristic: w_it = 1_it c_t p_t(x) / Σ_k 1_ik c_k p_k(x) with c = 1
/// (BudgetUnaware) or c = β (BudgetAware). Throws DomainError if some
/// subintegrand has no admissible density at x.
WeightMatrix balance_weights(const MisProblem &problem, double x, WeightMode mode, const BudgetVector &beta);

/// ⟨I_t(x)⟩ = Σ_i f_i(x) w_it(x) / p_t(x). Throws SamplingError if p_t(x) = 0.
double primary_estimate(const MisProblem &problem, std::size_t t, double x, const WeightMatrix &w);

struct EstimatorOptions {
    WeightMode mode = WeightMode::BudgetAware;
    Rounding rounding = Rounding::LowDiscrepancy;
    Normalization normalization = Normalization::RealValued;
};

/// One realization of ⟨I⟩ = Σ_t (1/β_t) Σ_{s ≤ r(β_t)} ⟨I_t(x_{t,s})⟩.
double run_estimator(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options, Rng &rng);

/// Repeated realizations with reused scratch space.
class EstimatorRunner {
public:
    EstimatorRunner(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options);

    double operator()(Rng &rng);

private:
    double primary(std::size_t t, double x);

    const MisProblem &m_problem;
    BudgetVector m_beta;
    EstimatorOptions m_options;
    std::vector<double> m_scale; ///< c_t: 1 or β_t
    std::vector<double> m_pdf;
    std::vector<std::uint32_t> m_counts;
};

} // namespace mars
