#include "mars/fixedpoint/solver.hpp"

#include "mars/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mars {

void SolverConfig::validate() const {
    if (max_iterations == 0)
        throw ContractViolation("max_iterations must be positive");
    if (!(tolerance > 0))
        throw ContractViolation("tolerance must be positive");
    if (clamp && !(clamp->lo > 0 && clamp->lo < 1 && clamp->hi > 1))
        throw ContractViolation("clamp must satisfy 0 < lo < 1 < hi");
}

double update_budget(const TechniqueStats &stats, double total_variance, double total_cost) {
    if (!(total_variance > 0) || !(total_cost > 0))
        throw ContractViolation("budget update needs positive total variance and cost");
    const double ratio = total_cost / (stats.cost * total_variance);
    const double rr = std::sqrt(ratio * stats.second_moment);
    if (rr < 1)
        return rr;
    const double split = std::sqrt(ratio * stats.variance);
    if (split > 1)
        return split;
    return 1.0;
}

double update_shared_budget(std::span<const TechniqueStats> stats, double total_variance, double total_cost) {
    if (!(total_variance > 0) || !(total_cost > 0))
        throw ContractViolation("budget update needs positive total variance and cost");
    // the per-technique three-way rule applied to pooled moments and costs
    TechniqueStats pooled;
    pooled.cost = 0;
    for (const auto &s : stats) {
        pooled.second_moment += s.second_moment;
        pooled.variance += s.variance;
        pooled.cost += s.cost;
    }
    return update_budget(pooled, total_variance, total_cost);
}

std::string to_string(SolverStatus status) {
    switch (status) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIterations: return "max_iterations";
    case SolverStatus::Oscillating: return "oscillating";
    }
    return "unknown";
}

Trajectory solve(const MisProblem &problem, const BudgetVector &init, WeightMode mode, VarianceModel model,
                 const SolverConfig &config) {
    MomentCache moments(problem, mode);
    return solve(moments, init, model, config);
}

Trajectory solve(MomentCache &moments, const BudgetVector &init, VarianceModel model, const SolverConfig &config) {
    config.validate();
    const MisProblem &problem = moments.problem();
    const std::size_t nt = problem.num_techniques();
    if (init.size() != nt)
        throw ContractViolation("initial budget size does not match technique count");
    if (config.clamp)
        init.check_bounds(config.clamp->lo, config.clamp->hi);

    auto clamp = [&](double b) { return config.clamp ? std::clamp(b, config.clamp->lo, config.clamp->hi) : b; };

    Trajectory trajectory;
    BudgetVector beta = init;
    auto stats = moments.get(beta);
    auto e = evaluate(stats, beta, problem, model);
    trajectory.entries.push_back({0, beta, e.variance, e.cost, e.inv_efficiency});

    double previousChange = 0;
    int growing = 0;
    std::vector<double> previousStep(nt, 0.0);
    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        std::vector<double> next(nt);
        if (config.shared_budget) {
            const double factor = clamp(update_shared_budget(stats, e.variance, e.cost));
            std::fill(next.begin(), next.end(), factor);
        } else {
            for (std::size_t t = 0; t < nt; ++t)
                next[t] = clamp(update_budget(stats[t], e.variance, e.cost));
        }
        if (!config.clamp)
            for (double &b : next)
                b = std::max(b, 1e-300);

        double change = 0;
        bool reversed = false;
        for (std::size_t t = 0; t < nt; ++t) {
            change = std::max(change, std::abs(next[t] - beta[t]) / beta[t]);
            const double step = next[t] - beta[t];
            reversed = reversed || step * previousStep[t] < 0;
            previousStep[t] = step;
        }

        beta = BudgetVector(next);
        stats = moments.get(beta);
        e = evaluate(stats, beta, problem, model);
        trajectory.entries.push_back({iteration, beta, e.variance, e.cost, e.inv_efficiency});

        if (change < config.tolerance) {
            trajectory.status = SolverStatus::Converged;
            return trajectory;
        }
        // A growing step only counts as oscillation when some budget turned around;
        // a monotone approach that accelerates is not oscillating.
        growing = (iteration > 1 && change > previousChange && reversed) ? growing + 1 : 0;
        previousChange = change;
        if (growing >= 5) {
            trajectory.status = SolverStatus::Oscillating;
            return trajectory;
        }
    }
    trajectory.status = SolverStatus::MaxIterations;
    return trajectory;
}

} // namespace mars
