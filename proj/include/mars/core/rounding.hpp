#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mars {

/// Relative variance added by stochastic rounding of a real sample count:
/// (β − ⌊β⌋)(⌈β⌉ − β)/β². Zero at integers. Throws ContractViolation for β ≤ 0.
double rho(double beta);

/// ⌊β⌋ + 1 with probability β − ⌊β⌋, else ⌊β⌋. Expectation over u equals β.
std::uint32_t stochastic_round(double beta, double u);

/// Rounds all budgets with a single random number: r starts at u and carries the
/// rounding residual from one technique to the next. Every component still has
/// expectation β_t, and the total stays within 1 of Σβ_t.
std::vector<std::uint32_t> low_discrepancy_round(std::span<const double> beta, double u);

/// In-place variant for hot loops; `out` must have the same length as `beta`.
void low_discrepancy_round(std::span<const double> beta, double u, std::span<std::uint32_t> out);

} // namespace mars
