#include "mars/flatland/render.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mars::flatland {

void RenderConfig::validate() const {
    if (iterations == 0)
        throw ValidationError("render needs at least one iteration");
    if ((ray_budget == 0) == (samples_per_pixel == 0))
        throw ValidationError("set exactly one of ray budget and samples per pixel");
    if (!(fixed_budget > 0))
        throw ValidationError("fixed budget must be positive");
    if (!(breadth_cap >= 1))
        throw ValidationError("breadth cap must be at least 1");
    if (!(clamp_factor > 0))
        throw ValidationError("clamp factor must be positive");
    if (!(cache.bounds.lo > 0 && cache.bounds.lo <= 1 && cache.bounds.hi >= 1))
        throw ValidationError("budget bounds must satisfy 0 < lo <= 1 <= hi");
}

IntegratorSettings RenderConfig::integrator(bool learned) const {
    IntegratorSettings s;
    s.strategy = strategy;
    s.learned = learned;
    s.fixed_budget = fixed_budget;
    s.weights = weights;
    s.max_depth = max_depth;
    s.breadth_cap = breadth_cap;
    s.rr_depth = rr_depth;
    s.bounds = cache.bounds;
    s.clamp_statistics = clamp_statistics;
    s.clamp_factor = clamp_factor;
    return s;
}

std::uint64_t sample_stream(std::size_t iteration, std::uint64_t pass, std::size_t pixel) {
    return (static_cast<std::uint64_t>(iteration) << 52) ^ (pass << 20) ^ static_cast<std::uint64_t>(pixel);
}

std::vector<double> combine_iterations(const std::vector<std::vector<double>> &images,
                                       const std::vector<IterationReport> &reports) {
    if (images.empty() || images.size() != reports.size())
        throw ContractViolation("one report per iteration image is required");
    std::vector<double> weights(images.size(), 0.0);
    const bool exact = std::any_of(reports.begin(), reports.end(), [](const auto &r) { return r.variance == 0; });
    for (std::size_t k = 0; k < images.size(); ++k) {
        const double spp = static_cast<double>(reports[k].spp);
        if (exact)
            weights[k] = reports[k].variance == 0 ? spp : 0.0;
        else
            weights[k] = spp / reports[k].variance;
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> out(images.front().size(), 0.0);
    for (std::size_t k = 0; k < images.size(); ++k)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += weights[k] / total * images[k][i];
    return out;
}

namespace {

struct Worker {
    IterationImage image;
    CacheStatistics stats;
    RayCounter counter;
};

} // namespace

RenderResult render(const Scene &scene, const RenderConfig &config) {
    config.validate();
    scene.validate();
    const std::size_t pixels = scene.camera().pixels;
    const unsigned workers = std::max(1u, static_cast<unsigned>(std::min<std::size_t>(
                                              config.workers ? config.workers : default_workers(), pixels)));

    SpatialCache cache(scene.bounds(), config.cache);
    ImageState state(pixels);
    RenderResult result;
    const bool learning = config.strategy == Strategy::Mars || config.strategy == Strategy::Shared;

    std::uint64_t remaining_weight = (std::uint64_t{1} << config.iterations) - 1;
    for (std::size_t k = 0; k < config.iterations; ++k) {
        const Integrator integrator(scene, cache, config.integrator(learning && k >= config.warmup_iterations));
        std::vector<double> estimates;
        if (!state.empty())
            estimates = state.estimates();

        std::uint64_t target_rays = 0;
        if (config.ray_budget) {
            const std::uint64_t weight = std::uint64_t{1} << k;
            const std::uint64_t left = config.ray_budget > state.rays() ? config.ray_budget - state.rays() : 0;
            target_rays = static_cast<std::uint64_t>(static_cast<double>(left) * static_cast<double>(weight) /
                                                     static_cast<double>(remaining_weight));
            remaining_weight -= weight;
        }

        std::vector<Worker> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.push_back(Worker{IterationImage(pixels), cache.make_statistics(), {}});

        std::uint64_t pass = 0, rays = 0;
        for (;;) {
            parallel_for(workers, workers, [&](std::size_t w) {
                Worker &worker = pool[w];
                const std::size_t begin = pixels * w / workers, end = pixels * (w + 1) / workers;
                for (std::size_t px = begin; px < end; ++px) {
                    Rng rng(config.seed, sample_stream(k, pass, px));
                    const std::optional<double> estimate =
                        estimates.empty() ? std::nullopt : std::optional<double>(estimates[px]);
                    const auto sample = integrator.estimate_pixel(px, estimate, rng, &worker.stats, worker.counter);
                    worker.image.pixels[px].add(sample.value);
                }
            });
            ++pass;
            rays = 0;
            for (const auto &w : pool)
                rays += w.counter.rays;
            if (config.samples_per_pixel ? pass >= config.samples_per_pixel : rays >= target_rays)
                break;
        }

        IterationImage image(pixels);
        CacheStatistics stats = cache.make_statistics();
        for (auto &w : pool) {
            image.merge(w.image);
            image.rays += w.counter.rays;
            stats.merge(w.stats);
        }
        image.samples_per_pixel = pass;
        state.add(image);
        const auto statistics = image_statistics(image, state.estimates());

        IterationReport report;
        report.iteration = k;
        report.spp = pass;
        report.variance = statistics.variance;
        report.cost = statistics.cost;
        report.inv_efficiency = statistics.variance * statistics.cost;
        report.rays = image.rays;
        report.leaves = cache.num_leaves();
        result.reports.push_back(report);
        result.iteration_images.push_back(image.mean());

        cache.update(stats, statistics.variance, statistics.cost, config.strategy == Strategy::Shared);

        std::vector<LeafBudgets> map;
        map.reserve(cache.num_leaves());
        for (std::size_t l = 0; l < cache.num_leaves(); ++l)
            map.push_back({cache.leaf(l).box, cache.nominal_budgets(l)});
        result.budget_maps.push_back(std::move(map));
    }

    result.image = combine_iterations(result.iteration_images, result.reports);
    result.mean = state.mean();
    result.variance_of_mean = state.variance_of_mean();
    result.rays = state.rays();
    return result;
}

} // namespace mars::flatland
