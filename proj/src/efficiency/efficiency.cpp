#include "mars/efficiency/efficiency.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/rounding.hpp"

#include <cmath>

namespace mars {

TechniqueStats TechniqueStats::from_moments(double first, double second, double cost) {
    TechniqueStats s;
    s.first_moment = first;
    s.second_moment = second;
    s.variance = std::max(0.0, second - first * first);
    s.cost = cost;
    return s;
}

std::vector<TechniqueStats> technique_moments(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                              const QuadratureOptions &quadrature) {
    const std::size_t nt = problem.num_techniques();
    const std::size_t ni = problem.num_subintegrands();
    if (beta.size() != nt)
        throw ContractViolation("budget vector size does not match technique count");

    std::vector<double> scale(nt, 1.0);
    if (mode == WeightMode::BudgetAware)
        for (std::size_t t = 0; t < nt; ++t)
            scale[t] = beta[t];

    // Component 2t is p_t·I_t, component 2t+1 is p_t·I_t², where
    // I_t = Σ_i f_i w_it / p_t = Σ_i f_i c_t / D_i and D_i = Σ_k 1_ik c_k p_k.
    const VectorIntegrand integrand = [&](double x, std::span<double> out) {
        thread_local std::vector<double> pdf, fi, denominator;
        pdf.resize(nt);
        fi.resize(ni);
        denominator.resize(ni);
        for (std::size_t t = 0; t < nt; ++t)
            pdf[t] = problem.pdf(t, x);
        for (std::size_t i = 0; i < ni; ++i) {
            fi[i] = problem.f(i, x);
            double d = 0;
            for (std::size_t t = 0; t < nt; ++t)
                if (problem.estimates(i, t))
                    d += scale[t] * pdf[t];
            denominator[i] = d;
        }
        for (std::size_t t = 0; t < nt; ++t) {
            double value = 0;
            for (std::size_t i = 0; i < ni; ++i)
                if (problem.estimates(i, t) && fi[i] != 0 && denominator[i] > 0)
                    value += fi[i] * scale[t] / denominator[i];
            out[2 * t] = pdf[t] * value;
            out[2 * t + 1] = pdf[t] * value * value;
        }
    };

    const auto result = integrate(integrand, 2 * nt, problem.domain(), problem.breakpoints(), quadrature);
    if (!result.converged) {
        const std::size_t t = result.worst_component / 2;
        throw NumericalError("moment quadrature for technique " + std::to_string(t) + " did not converge", t);
    }

    std::vector<TechniqueStats> stats(nt);
    for (std::size_t t = 0; t < nt; ++t)
        stats[t] = TechniqueStats::from_moments(result.value[2 * t], result.value[2 * t + 1], problem.cost(t));
    return stats;
}

double secondary_variance(const TechniqueStats &stats, double beta, VarianceModel model) {
    if (!(beta > 0))
        throw ContractViolation("secondary_variance needs a positive budget");
    const double mean2 = stats.first_moment * stats.first_moment;
    switch (model) {
    case VarianceModel::ExactStochastic:
        return stats.variance / beta + rho(beta) * mean2;
    case VarianceModel::Simplified:
        if (beta <= 1)
            return stats.second_moment / beta - mean2;
        return stats.variance / beta;
    case VarianceModel::NearestRounding: {
        if (beta <= 1)
            return stats.second_moment / beta - mean2;
        const double lo = std::floor(beta);
        const double frac = beta - lo;
        if (frac == 0)
            return stats.variance / beta;
        // unbiased for either realized count, so only the within-count variance remains
        return stats.variance * ((1 - frac) / lo + frac / (lo + 1));
    }
    }
    return 0;
}

double total_variance(std::span<const TechniqueStats> stats, const BudgetVector &beta, double overhead_variance,
                      VarianceModel model) {
    if (stats.size() != beta.size())
        throw ContractViolation("stats and budgets differ in length");
    double sum = overhead_variance;
    for (std::size_t t = 0; t < stats.size(); ++t)
        sum += secondary_variance(stats[t], beta[t], model);
    return sum;
}

double total_cost(std::span<const TechniqueStats> stats, const BudgetVector &beta, double overhead_cost) {
    if (stats.size() != beta.size())
        throw ContractViolation("stats and budgets differ in length");
    double sum = overhead_cost;
    for (std::size_t t = 0; t < stats.size(); ++t)
        sum += beta[t] * stats[t].cost;
    return sum;
}

Evaluation evaluate(std::span<const TechniqueStats> stats, const BudgetVector &beta, const MisProblem &problem,
                    VarianceModel model) {
    Evaluation e;
    e.variance = total_variance(stats, beta, problem.overhead_variance(), model);
    e.cost = total_cost(stats, beta, problem.overhead_cost());
    e.inv_efficiency = e.variance * e.cost;
    return e;
}

double inverse_efficiency(const MisProblem &problem, const BudgetVector &beta, WeightMode mode, VarianceModel model) {
    const auto stats = technique_moments(problem, beta, mode);
    return evaluate(stats, beta, problem, model).inv_efficiency;
}

std::vector<double> proxy_gradient(std::span<const TechniqueStats> stats, const BudgetVector &beta,
                                   double total_variance, double total_cost) {
    if (stats.size() != beta.size())
        throw ContractViolation("stats and budgets differ in length");
    std::vector<double> g(stats.size());
    for (std::size_t t = 0; t < stats.size(); ++t) {
        const double m = beta[t] <= 1 ? stats[t].second_moment : stats[t].variance;
        g[t] = -m * total_cost / (beta[t] * beta[t]) + total_variance * stats[t].cost;
    }
    return g;
}

std::vector<TechniqueStats> MomentCache::get(const BudgetVector &beta) {
    std::vector<long long> key;
    if (m_mode == WeightMode::BudgetAware) {
        for (std::size_t t = 1; t < beta.size(); ++t)
            key.push_back(std::llround(std::log(beta[t] / beta[0]) * 1e9));
    }
    {
        std::lock_guard lock(m_mutex);
        auto it = m_entries.find(key);
        if (it != m_entries.end())
            return it->second;
    }
    auto stats = technique_moments(m_problem, beta, m_mode, m_quadrature);
    std::lock_guard lock(m_mutex);
    m_entries.emplace(key, stats);
    return stats;
}

std::size_t MomentCache::size() const {
    std::lock_guard lock(m_mutex);
    return m_entries.size();
}

} // namespace mars
