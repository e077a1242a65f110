#include "mars/oracle/grid_search.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/parallel.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mars {

GridSearchResult grid_search(const MisProblem &problem, WeightMode mode, VarianceModel model, const GridSpec &grid,
                             unsigned workers) {
    MomentCache moments(problem, mode);
    return grid_search(moments, model, grid, workers);
}

GridSearchResult grid_search(MomentCache &moments, VarianceModel model, const GridSpec &grid, unsigned workers) {
    const MisProblem &problem = moments.problem();
    const std::size_t nt = problem.num_techniques();
    if (nt > 3)
        throw ContractViolation("grid search is limited to three techniques (" + std::to_string(nt) +
                                " given); use the fixed-point solver instead");
    GridSearchResult result;
    const auto axis = grid.axis();
    result.landscape.axes.assign(nt, axis);
    result.landscape.points = grid_points(axis, nt);
    result.landscape.values.resize(result.landscape.points.size());

    parallel_for(result.landscape.points.size(), workers, [&](std::size_t k) {
        const BudgetVector &beta = result.landscape.points[k];
        result.landscape.values[k] = evaluate(moments.get(beta), beta, problem, model);
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < result.landscape.values.size(); ++k)
        if (result.landscape.values[k].inv_efficiency < result.landscape.values[best].inv_efficiency)
            best = k;
    result.argmin = result.landscape.points[best];
    result.min = result.landscape.values[best].inv_efficiency;
    return result;
}

namespace {

/// Dense log/linear scan of a 1D restriction followed by Brent refinement in the
/// bracket around the best sample.
RestrictedOptimum minimize_line(const std::function<BudgetVector(double)> &point,
                                const std::function<double(const BudgetVector &)> &objective, double lo, double hi,
                                std::size_t samples, bool logScale) {
    auto param = [&](std::size_t k) {
        const double s = static_cast<double>(k) / static_cast<double>(samples - 1);
        return logScale ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo);
    };
    std::size_t best = 0;
    double bestValue = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
        const double v = objective(point(param(k)));
        if (v < bestValue) {
            bestValue = v;
            best = k;
        }
    }
    const double a = param(best == 0 ? 0 : best - 1);
    const double b = param(std::min(best + 1, samples - 1));

    RestrictedOptimum out{point(param(best)), bestValue};
    if (b > a) {
        auto g = [&](double u) { return objective(point(logScale ? std::exp(u) : u)); };
        const double ua = logScale ? std::log(a) : a;
        const double ub = logScale ? std::log(b) : b;
        const auto [u, value] = boost::math::tools::brent_find_minima(g, ua, ub, 40);
        if (value < out.inv_efficiency) {
            const double p = logScale ? std::exp(u) : u;
            out = {point(p), value};
        }
    }
    return out;
}

} // namespace

Baselines constrained_baselines(MomentCache &moments, VarianceModel model, const GridSpec &grid) {
    const MisProblem &problem = moments.problem();
    if (problem.num_techniques() != 2)
        throw ContractViolation("constrained baselines are defined for two techniques");
    grid.validate();
    const double lo = grid.lo, hi = grid.hi;
    if (!(lo < 0.5))
        throw ContractViolation("grid lower bound must be below 0.5 for the mixture slice");
    const std::size_t samples = 4 * grid.resolution;

    auto objective = [&](const BudgetVector &beta) {
        return evaluate(moments.get(beta), beta, problem, model).inv_efficiency;
    };

    Baselines out;
    out.os = minimize_line([](double r) { return BudgetVector{r, 1 - r}; }, objective, lo, 1 - lo, samples, false);
    out.rrs = minimize_line([](double s) { return BudgetVector{s, s}; }, objective, lo, hi, samples, true);

    const double r = out.os.beta[0];
    const double sLo = lo / std::min(r, 1 - r);
    const double sHi = hi / std::max(r, 1 - r);
    out.o_plus_r = minimize_line([r](double s) { return BudgetVector{s * r, s * (1 - r)}; }, objective, sLo, sHi,
                                 samples, true);
    return out;
}

} // namespace mars
