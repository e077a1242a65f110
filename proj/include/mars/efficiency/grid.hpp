#pragma once

#include <cstddef>
#include <vector>

namespace mars {

enum class Spacing { Log, Linear };

/// Per-axis budget grid, identical on every axis.
struct GridSpec {
    double lo = 0.05;
    double hi = 20;
    std::size_t resolution = 128;
    Spacing spacing = Spacing::Log;

    /// Throws ContractViolation unless 0 < lo < hi and resolution ≥ 2.
    void validate() const;

    std::vector<double> axis() const;
};

} // namespace mars

namespace mars {

class BudgetVector;

/// Cartesian product of `axis` with itself `dims` times, first component varying slowest.
std::vector<BudgetVector> grid_points(const std::vector<double> &axis, std::size_t dims);

} // namespace mars
