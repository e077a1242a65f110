#pragma once

#include "mars/efficiency/efficiency.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mars {

struct BudgetClamp {
    double lo = 0.05;
    double hi = 20;
};

struct SolverConfig {
    std::size_t max_iterations = 50;
    /// Stop once max_t |Δβ_t|/β_t falls below this.
    double tolerance = 1e-6;
    std::optional<BudgetClamp> clamp = BudgetClamp{};
    /// One common budget for all techniques instead of one per technique.
    bool shared_budget = false;

    void validate() const;
};

/// β_RR = sqrt(C_tot/C_t · E[⟨I_t⟩²]/V_tot) if that is below 1, else
/// β_S = sqrt(C_tot/C_t · V[⟨I_t⟩]/V_tot) if that is above 1, else exactly 1.
double update_budget(const TechniqueStats &stats, double total_variance, double total_cost);

/// Common factor sqrt(C_tot/ΣC_t · ΣM_t/V_tot): the three-way rule of update_budget
/// applied to moments and costs summed over techniques.
double update_shared_budget(std::span<const TechniqueStats> stats, double total_variance, double total_cost);

struct TrajectoryEntry {
    std::size_t iteration = 0;
    BudgetVector beta;
    double variance = 0;
    double cost = 0;
    double inv_efficiency = 0;
};

enum class SolverStatus { Converged, MaxIterations, Oscillating };

std::string to_string(SolverStatus status);

struct Trajectory {
    /// Entry 0 is the initial budget; entry k holds the budgets after k updates
    /// together with their variance, cost and inverse efficiency.
    std::vector<TrajectoryEntry> entries;
    SolverStatus status = SolverStatus::MaxIterations;

    const TrajectoryEntry &final() const { return entries.back(); }
    bool converged() const { return status == SolverStatus::Converged; }
};

/// Iterates the budget update with Jacobi-style simultaneous updates, clamping
/// after every step. Budget-aware moments are refreshed each iteration. Does not
/// throw on non-convergence; inspect Trajectory::status.
Trajectory solve(const MisProblem &problem, const BudgetVector &init, WeightMode mode, VarianceModel model,
                 const SolverConfig &config = {});

/// Variant reusing a moment cache (e.g. one shared with a grid search).
Trajectory solve(MomentCache &moments, const BudgetVector &init, VarianceModel model, const SolverConfig &config = {});

} // namespace mars
