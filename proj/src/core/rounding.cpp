#include "mars/core/rounding.hpp"

#include "mars/core/errors.hpp"

#include <cmath>

namespace mars {

double rho(double beta) {
    if (!(beta > 0) || !std::isfinite(beta))
        throw ContractViolation("rho needs a positive finite budget");
    const double lo = std::floor(beta);
    if (lo == beta)
        return 0.0;
    return (beta - lo) * (lo + 1 - beta) / (beta * beta);
}

std::uint32_t stochastic_round(double beta, double u) {
    if (!(beta > 0) || !std::isfinite(beta))
        throw ContractViolation("stochastic_round needs a positive finite budget");
    const double lo = std::floor(beta);
    return static_cast<std::uint32_t>(lo) + (u < beta - lo ? 1u : 0u);
}

void low_discrepancy_round(std::span<const double> beta, double u, std::span<std::uint32_t> out) {
    if (out.size() != beta.size())
        throw ContractViolation("low_discrepancy_round output size mismatch");
    double r = u;
    for (std::size_t t = 0; t < beta.size(); ++t) {
        if (!(beta[t] >= 0) || !std::isfinite(beta[t]))
            throw ContractViolation("low_discrepancy_round needs nonnegative finite budgets");
        const double gamma = std::floor(beta[t] + r);
        out[t] = static_cast<std::uint32_t>(gamma);
        r += beta[t] - gamma;
    }
}

std::vector<std::uint32_t> low_discrepancy_round(std::span<const double> beta, double u) {
    std::vector<std::uint32_t> out(beta.size());
    low_discrepancy_round(beta, u, out);
    return out;
}

} // namespace mars
