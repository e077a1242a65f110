#include "mars/efficiency/gradient.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/parallel.hpp"

#include <cmath>
#include <numeric>

namespace mars {

namespace {

/// V·C at β, reusing β-independent moments in BudgetUnaware mode.
class Objective {
public:
    Objective(const MisProblem &problem, WeightMode mode, VarianceModel model)
        : m_problem(problem), m_mode(mode), m_model(model) {}

    double operator()(const BudgetVector &beta) {
        if (m_mode == WeightMode::BudgetUnaware) {
            if (m_fixed.empty())
                m_fixed = technique_moments(m_problem, beta, m_mode, kGradientQuadrature);
            return evaluate(m_fixed, beta, m_problem, m_model).inv_efficiency;
        }
        const auto stats = technique_moments(m_problem, beta, m_mode, kGradientQuadrature);
        return evaluate(stats, beta, m_problem, m_model).inv_efficiency;
    }

private:
    const MisProblem &m_problem;
    WeightMode m_mode;
    VarianceModel m_model;
    std::vector<TechniqueStats> m_fixed;
};

BudgetVector shifted(const BudgetVector &beta, std::size_t t, double delta) {
    BudgetVector out = beta;
    out.set(t, beta[t] + delta);
    return out;
}

} // namespace

std::vector<double> true_gradient_fd(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                     VarianceModel model, double h_rel) {
    if (!(h_rel > 0 && h_rel < 0.5))
        throw ContractViolation("finite-difference step must lie in (0, 0.5)");
    for (std::size_t t = 0; t < beta.size(); ++t) {
        const double h = h_rel * beta[t];
        if (beta[t] - h < 1 && beta[t] + h > 1)
            throw ContractViolation("finite-difference step around budget " + std::to_string(beta[t]) +
                                    " straddles the kink at 1; use one_sided_gradient or a smaller step");
    }
    Objective objective(problem, mode, model);
    std::vector<double> g(beta.size());
    for (std::size_t t = 0; t < beta.size(); ++t) {
        const double h = h_rel * beta[t];
        g[t] = (objective(shifted(beta, t, h)) - objective(shifted(beta, t, -h))) / (2 * h);
    }
    return g;
}

OneSidedGradient one_sided_gradient(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                    VarianceModel model, double h_rel) {
    Objective objective(problem, mode, model);
    OneSidedGradient out;
    out.left.resize(beta.size());
    out.right.resize(beta.size());
    for (std::size_t t = 0; t < beta.size(); ++t) {
        const double h = h_rel * beta[t];
        // second-order one-sided stencils: (∓3f(β) ± 4f(β±h) ∓ f(β±2h)) / 2h
        const double f0 = objective(beta);
        out.right[t] = (-3 * f0 + 4 * objective(shifted(beta, t, h)) - objective(shifted(beta, t, 2 * h))) / (2 * h);
        out.left[t] = (3 * f0 - 4 * objective(shifted(beta, t, -h)) + objective(shifted(beta, t, -2 * h))) / (2 * h);
    }
    return out;
}

double normalized_dot(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size())
        throw ContractViolation("vectors differ in length");
    const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    if (na == 0 && nb == 0)
        return 1.0;
    if (na == 0 || nb == 0)
        return 0.0;
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb);
}

double GradientMap::positive_fraction() const {
    if (dot.empty())
        return 0;
    const auto positive = std::count_if(dot.begin(), dot.end(), [](double d) { return d > 0; });
    return static_cast<double>(positive) / static_cast<double>(dot.size());
}

std::vector<double> proxy_gradient_at(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                      const QuadratureOptions &quadrature) {
    const auto stats = technique_moments(problem, beta, mode, quadrature);
    const auto e = evaluate(stats, beta, problem, VarianceModel::Simplified);
    return proxy_gradient(stats, beta, e.variance, e.cost);
}

GradientMap gradient_agreement_map(const MisProblem &problem, WeightMode mode, const GridSpec &grid,
                                   unsigned workers) {
    const std::size_t nt = problem.num_techniques();
    if (nt > 3)
        throw ContractViolation("gradient maps are limited to three techniques");
    GradientMap map;
    const auto axis = grid.axis();
    map.axes.assign(nt, axis);
    map.points = grid_points(axis, nt);
    map.dot.resize(map.points.size());

    std::vector<TechniqueStats> fixed;
    if (mode == WeightMode::BudgetUnaware)
        fixed = technique_moments(problem, map.points.front(), mode, kGradientQuadrature);

    parallel_for(map.points.size(), workers, [&](std::size_t k) {
        const BudgetVector &beta = map.points[k];
        const auto stats = mode == WeightMode::BudgetUnaware ? fixed
                                                             : technique_moments(problem, beta, mode, kGradientQuadrature);
        const auto e = evaluate(stats, beta, problem, VarianceModel::Simplified);
        const auto proxy = proxy_gradient(stats, beta, e.variance, e.cost);

        double h_rel = 1e-5;
        for (std::size_t t = 0; t < nt; ++t)
            if (std::abs(beta[t] - 1) > 0)
                h_rel = std::min(h_rel, 0.5 * std::abs(beta[t] - 1) / beta[t]);
        std::vector<double> truth;
        bool onKink = false;
        for (std::size_t t = 0; t < nt; ++t)
            onKink = onKink || beta[t] == 1;
        if (onKink) {
            // the proxy takes the β ≤ 1 branch at exactly 1, so compare with the left limit
            truth = one_sided_gradient(problem, beta, mode, VarianceModel::Simplified, h_rel).left;
        } else {
            truth = true_gradient_fd(problem, beta, mode, VarianceModel::Simplified, h_rel);
        }
        map.dot[k] = normalized_dot(proxy, truth);
    });
    return map;
}

} // namespace mars
