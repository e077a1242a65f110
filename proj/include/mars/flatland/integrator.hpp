#pragma once

#include "mars/core/estimator.hpp"
#include "mars/core/rng.hpp"
#include "mars/flatland/cache.hpp"
#include "mars/flatland/scene.hpp"

#include <array>
#include <optional>

namespace mars::flatland {

enum class Strategy {
    Mars,      ///< per-technique spatial budgets
    Shared,    ///< one spatial budget for all techniques of a vertex
    Fixed,     ///< constant budgets everywhere
    ClassicRR, ///< one NEE sample, one BSDF-or-guided continuation, throughput RR
};

struct IntegratorSettings {
    Strategy strategy = Strategy::Mars;
    /// Mars/Shared only: false during warm-up, where the classic policy is used.
    bool learned = true;
    double fixed_budget = 1;
    WeightMode weights = WeightMode::BudgetAware;
    std::size_t max_depth = 40;
    /// Caps the number of continuation paths below one camera sample.
    double breadth_cap = 32;
    /// First vertex (camera hit = 1) at which classic throughput RR kicks in.
    std::size_t rr_depth = 5;
    BudgetBounds bounds;
    bool clamp_statistics = true;
    double clamp_factor = 50;
};

struct PixelSample {
    double value = 0;
    std::uint64_t rays = 0;
};

/// Recursive multi-sample MIS estimator of pixel radiance. Direct light is
/// estimated by BSDF, NEE and guided sampling, indirect light by BSDF and guided
/// sampling; each technique's sample count at a vertex comes from the strategy
/// and is rounded jointly with a single random number.
class Integrator {
public:
    Integrator(const Scene &scene, const SpatialCache &cache, IntegratorSettings settings);

    /// One camera sample of pixel px. `pixel_estimate` is Î_px (absent before the
    /// first iteration completes). When `stats` is given, every primary estimate is
    /// recorded into the leaf of its vertex.
    PixelSample estimate_pixel(std::size_t px, std::optional<double> pixel_estimate, Rng &rng,
                               CacheStatistics *stats, RayCounter &counter) const;

    /// Per-technique budgets at a vertex before the breadth cap.
    std::array<double, kTechniques> budgets(std::size_t leaf, double throughput, std::size_t depth,
                                            std::optional<double> pixel_estimate) const;

    const IntegratorSettings &settings() const { return m_settings; }

private:
    struct PathState;

    double shade(const Hit &hit, Vec2 wo, double throughput, double breadth, std::size_t depth,
                 PathState &path) const;

    const Scene &m_scene;
    const SpatialCache &m_cache;
    IntegratorSettings m_settings;
};

} // namespace mars::flatland
