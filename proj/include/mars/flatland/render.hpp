#pragma once

#include "mars/flatland/cache.hpp"
#include "mars/flatland/image.hpp"
#include "mars/flatland/integrator.hpp"
#include "mars/flatland/scene.hpp"

#include <cstdint>
#include <vector>

namespace mars::flatland {

struct RenderConfig {
    Strategy strategy = Strategy::Mars;
    double fixed_budget = 1;
    std::size_t iterations = 9;
    std::size_t warmup_iterations = 3;
    /// Exactly one of the two must be nonzero. A ray budget is split over the
    /// iterations in proportion 1:2:4:...; a sample count is used for every iteration.
    std::uint64_t ray_budget = 0;
    std::uint64_t samples_per_pixel = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    WeightMode weights = WeightMode::BudgetAware;
    bool clamp_statistics = true;
    double clamp_factor = 50;
    std::size_t max_depth = 40;
    double breadth_cap = 32;
    std::size_t rr_depth = 5;
    CacheConfig cache;

    void validate() const;
    IntegratorSettings integrator(bool learned) const;
};

struct IterationReport {
    std::size_t iteration = 0;
    std::uint64_t spp = 0;
    double variance = 0; ///< V_I
    double cost = 0;     ///< C_I
    double inv_efficiency = 0;
    std::uint64_t rays = 0;
    std::size_t leaves = 0;
};

struct LeafBudgets {
    Bounds box;
    std::array<double, kTechniques> beta;
};

struct RenderResult {
    /// Inverse-variance weighted combination of the iteration images.
    std::vector<double> image;
    /// Plain mean of all samples and the variance of that mean.
    std::vector<double> mean;
    std::vector<double> variance_of_mean;
    std::vector<std::vector<double>> iteration_images;
    std::vector<IterationReport> reports;
    /// Nominal per-leaf budgets after each iteration's update.
    std::vector<std::vector<LeafBudgets>> budget_maps;
    std::uint64_t rays = 0;
};

/// Stream id of the random numbers for one camera sample.
std::uint64_t sample_stream(std::size_t iteration, std::uint64_t pass, std::size_t pixel);

/// Combines iteration images with weights spp_k / V_I,k. Iterations with V_I = 0
/// win outright; if every V_I is zero the weights fall back to spp_k.
std::vector<double> combine_iterations(const std::vector<std::vector<double>> &images,
                                       const std::vector<IterationReport> &reports);

RenderResult render(const Scene &scene, const RenderConfig &config);

} // namespace mars::flatland
