#include "mars/core/estimator.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/rounding.hpp"

#include <cmath>

namespace mars {

BudgetVector::BudgetVector(std::vector<double> beta) : m_beta(std::move(beta)) {
    for (double b : m_beta)
        if (!(b > 0) || !std::isfinite(b))
            throw ContractViolation("budgets must be positive and finite");
}

void BudgetVector::set(std::size_t t, double value) {
    if (!(value > 0) || !std::isfinite(value))
        throw ContractViolation("budgets must be positive and finite");
    m_beta.at(t) = value;
}

void BudgetVector::check_bounds(double lo, double hi) const {
    for (double b : m_beta)
        if (b < lo || b > hi)
            throw ContractViolation("budget " + std::to_string(b) + " outside [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
}

WeightMatrix balance_weights(const MisProblem &problem, double x, WeightMode mode, const BudgetVector &beta) {
    const std::size_t nt = problem.num_techniques();
    const std::size_t ni = problem.num_subintegrands();
    if (beta.size() != nt)
        throw ContractViolation("budget vector size does not match technique count");
    if (!problem.domain().contains(x))
        throw ContractViolation("weight evaluation point outside the domain");

    std::vector<double> scaled(nt);
    for (std::size_t t = 0; t < nt; ++t)
        scaled[t] = problem.pdf(t, x) * (mode == WeightMode::BudgetAware ? beta[t] : 1.0);

    WeightMatrix w{ni, nt, std::vector<double>(ni * nt, 0.0)};
    for (std::size_t i = 0; i < ni; ++i) {
        double denominator = 0;
        for (std::size_t t = 0; t < nt; ++t)
            if (problem.estimates(i, t))
                denominator += scaled[t];
        if (!(denominator > 0))
            throw DomainError("no technique covering subintegrand " + std::to_string(i) +
                              " has density at x=" + std::to_string(x));
        for (std::size_t t = 0; t < nt; ++t)
            if (problem.estimates(i, t))
                w(i, t) = scaled[t] / denominator;
    }
    return w;
}

double primary_estimate(const MisProblem &problem, std::size_t t, double x, const WeightMatrix &w) {
    const double p = problem.pdf(t, x);
    if (!(p > 0))
        throw SamplingError("technique " + std::to_string(t) + " has zero density at its own sample x=" +
                            std::to_string(x));
    double sum = 0;
    for (std::size_t i = 0; i < problem.num_subintegrands(); ++i)
        if (w(i, t) != 0)
            sum += problem.f(i, x) * w(i, t);
    return sum / p;
}

EstimatorRunner::EstimatorRunner(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options)
    : m_problem(problem), m_beta(beta), m_options(options), m_scale(problem.num_techniques(), 1.0),
      m_pdf(problem.num_techniques()), m_counts(problem.num_techniques()) {
    if (beta.size() != problem.num_techniques())
        throw ContractViolation("budget vector size does not match technique count");
    if (options.mode == WeightMode::BudgetAware)
        for (std::size_t t = 0; t < beta.size(); ++t)
            m_scale[t] = beta[t];
}

double EstimatorRunner::primary(std::size_t t, double x) {
    const std::size_t nt = m_problem.num_techniques();
    for (std::size_t k = 0; k < nt; ++k)
        m_pdf[k] = m_problem.pdf(k, x) * m_scale[k];
    if (!(m_pdf[t] > 0))
        throw SamplingError("technique " + std::to_string(t) + " has zero density at its own sample x=" +
                            std::to_string(x));

    // f_i w_it / p_t = f_i c_t / Σ_k 1_ik c_k p_k
    double sum = 0;
    for (std::size_t i = 0; i < m_problem.num_subintegrands(); ++i) {
        if (!m_problem.estimates(i, t))
            continue;
        const double fi = m_problem.f(i, x);
        if (fi == 0)
            continue;
        double denominator = 0;
        for (std::size_t k = 0; k < nt; ++k)
            if (m_problem.estimates(i, k))
                denominator += m_pdf[k];
        sum += fi * m_scale[t] / denominator;
    }
    return sum;
}

double EstimatorRunner::operator()(Rng &rng) {
    const std::size_t nt = m_problem.num_techniques();
    if (m_options.rounding == Rounding::LowDiscrepancy) {
        low_discrepancy_round(m_beta.values(), rng.uniform(), m_counts);
    } else {
        for (std::size_t t = 0; t < nt; ++t)
            m_counts[t] = stochastic_round(m_beta[t], rng.uniform());
    }

    double total = 0;
    for (std::size_t t = 0; t < nt; ++t) {
        const auto &density = m_problem.technique(t).density;
        double sum = 0;
        for (std::uint32_t s = 0; s < m_counts[t]; ++s)
            sum += primary(t, density.sample(rng.uniform()));
        const bool byCount = m_options.normalization == Normalization::RoundedCount && m_beta[t] > 1;
        total += sum / (byCount ? static_cast<double>(m_counts[t]) : m_beta[t]);
    }
    return total;
}

double run_estimator(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options, Rng &rng) {
    EstimatorRunner runner(problem, beta, options);
    return runner(rng);
}

} // namespace mars
