#pragma once

#include "mars/core/density.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mars {

struct QuadratureOptions {
    /// Per-component target: error ≤ rel_tol · ∫|g_k| (or abs_tol, whichever is larger).
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_panels = 50000;
};

struct QuadratureResult {
    std::vector<double> value;
    std::vector<double> error;
    std::vector<double> l1; ///< ∫|g_k|
    std::size_t panels = 0;
    bool converged = false;
    /// First component that missed its tolerance, if any.
    std::size_t worst_component = 0;
};

/// Fills `out` (length dim) with the integrand components at x.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of a vector-valued function.
/// All components share panels; the panel with the largest normalized error is
/// bisected until every component meets its tolerance. The interval is split at
/// `breakpoints` beforehand so known discontinuities never sit inside a panel.
QuadratureResult integrate(const VectorIntegrand &g, std::size_t dim, Interval domain,
                           std::vector<double> breakpoints = {}, const QuadratureOptions &options = {});

/// Scalar convenience wrapper; throws NumericalError when tolerance is not met.
double integrate(const std::function<double(double)> &g, Interval domain,
                 std::vector<double> breakpoints = {}, const QuadratureOptions &options = {});

} // namespace mars
