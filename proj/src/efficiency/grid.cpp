#include "mars/efficiency/grid.hpp"

#include "mars/core/errors.hpp"

#include <cmath>

namespace mars {

void GridSpec::validate() const {
    if (!(lo > 0) || !(hi > lo) || !std::isfinite(hi))
        throw ContractViolation("grid range must satisfy 0 < lo < hi");
    if (resolution < 2)
        throw ContractViolation("grid resolution must be at least 2");
}

std::vector<double> GridSpec::axis() const {
    validate();
    std::vector<double> values(resolution);
    for (std::size_t k = 0; k < resolution; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(resolution - 1);
        values[k] = spacing == Spacing::Log ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo);
    }
    values.front() = lo;
    values.back() = hi;
    return values;
}

} // namespace mars

#include "mars/core/estimator.hpp"

namespace mars {

std::vector<BudgetVector> grid_points(const std::vector<double> &axis, std::size_t dims) {
    if (dims == 0 || axis.empty())
        return {};
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d)
        total *= axis.size();
    std::vector<BudgetVector> points;
    points.reserve(total);
    std::vector<double> beta(dims);
    for (std::size_t index = 0; index < total; ++index) {
        std::size_t rest = index;
        for (std::size_t d = dims; d-- > 0;) {
            beta[d] = axis[rest % axis.size()];
            rest /= axis.size();
        }
        points.emplace_back(beta);
    }
    return points;
}

} // namespace mars
