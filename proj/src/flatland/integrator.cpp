#include "mars/flatland/integrator.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mars::flatland {

struct Integrator::PathState {
    std::optional<double> estimate;
    Rng &rng;
    CacheStatistics *stats;
    RayCounter &counter;
};

namespace {

/// Signed angle from n to v.
double local_angle(Vec2 n, Vec2 v) { return std::atan2(cross(n, v), dot(n, v)); }

double wrap_angle(double a) { return std::remainder(a, 2 * std::numbers::pi); }

/// Angle density with which NEE would produce direction d towards point y on s.
double nee_pdf(const Scene &scene, const Segment &s, Vec2 d, double distance) {
    const double cos_y = std::abs(dot(s.normal(), d));
    if (cos_y <= 0)
        return 0;
    return distance / (scene.emitter_length() * cos_y);
}

} // namespace

Integrator::Integrator(const Scene &scene, const SpatialCache &cache, IntegratorSettings settings)
    : m_scene(scene), m_cache(cache), m_settings(settings) {
    if (!(settings.fixed_budget > 0))
        throw ContractViolation("fixed budget must be positive");
    if (!(settings.breadth_cap >= 1))
        throw ContractViolation("breadth cap must be at least 1");
}

std::array<double, kTechniques> Integrator::budgets(std::size_t leaf, double throughput, std::size_t depth,
                                                    std::optional<double> pixel_estimate) const {
    const auto &s = m_settings;
    auto classic = [&] {
        const double q = depth < s.rr_depth ? 1.0 : std::min(0.95, throughput);
        return std::array<double, kTechniques>{0.5 * q, 1.0, 0.5 * q};
    };
    switch (s.strategy) {
    case Strategy::Fixed: return {s.fixed_budget, s.fixed_budget, s.fixed_budget};
    case Strategy::ClassicRR: return classic();
    case Strategy::Mars:
    case Strategy::Shared: break;
    }
    if (!s.learned || !pixel_estimate || !(*pixel_estimate > 0))
        return classic();
    const auto fallback = classic();
    const double prefactor = throughput / *pixel_estimate;
    const auto &factors = m_cache.leaf(leaf).factors;
    std::array<double, kTechniques> beta{};
    for (std::size_t t = 0; t < kTechniques; ++t)
        beta[t] = factors[t] ? spatial_budget(*factors[t], prefactor, s.bounds) : fallback[t];
    return beta;
}

PixelSample Integrator::estimate_pixel(std::size_t px, std::optional<double> pixel_estimate, Rng &rng,
                                       CacheStatistics *stats, RayCounter &counter) const {
    const std::uint64_t before = counter.rays;
    PathState path{pixel_estimate, rng, stats, counter};
    const Camera &camera = m_scene.camera();
    const Vec2 dir = direction(camera.pixel_angle(px, rng.uniform()));
    PixelSample out;
    if (const auto hit = m_scene.intersect(camera.position, dir, counter)) {
        const Segment &s = m_scene.segment(hit->segment);
        out.value = s.radiance;
        if (!s.material.black_body())
            out.value += shade(*hit, -dir, 1.0, 1.0, 1, path);
    }
    out.rays = counter.rays - before;
    return out;
}

double Integrator::shade(const Hit &hit, Vec2 wo, double throughput, double breadth, std::size_t depth,
                         PathState &path) const {
    if (depth > m_settings.max_depth)
        return 0;
    const Segment &surface = m_scene.segment(hit.segment);
    const Material &material = surface.material;
    Vec2 n = surface.normal();
    if (dot(n, wo) < 0)
        n = -n;
    const double theta_o = local_angle(n, wo);
    const double normal_angle = angle_of(n);

    const std::size_t leafIndex = m_cache.lookup(hit.point);
    const Leaf &leaf = m_cache.leaf(leafIndex);
    auto beta = budgets(leafIndex, throughput, depth, path.estimate);

    const double continuation = beta[kBsdf] + beta[kGuided];
    if (continuation > 0) {
        const double correction = std::min(1.0, m_settings.breadth_cap / (breadth * continuation));
        beta[kBsdf] *= correction;
        beta[kGuided] *= correction;
    }

    std::array<std::uint32_t, kTechniques> counts{};
    low_discrepancy_round(beta, path.rng.uniform(), counts);

    std::array<double, kTechniques> c = {1.0, 1.0, 1.0};
    if (m_settings.weights == WeightMode::BudgetAware)
        c = beta;

    const double child_breadth = breadth * static_cast<double>(std::max<std::uint32_t>(1, counts[kBsdf] + counts[kGuided]));
    const bool clamp = m_settings.clamp_statistics && path.estimate && *path.estimate > 0 && throughput > 0;
    const double clamp_limit = clamp ? m_settings.clamp_factor * *path.estimate / throughput : 0.0;

    auto record = [&](std::size_t t, double value, std::uint64_t rays) {
        if (!path.stats)
            return;
        const double v = clamp ? std::min(value, clamp_limit) : value;
        path.stats->techniques[leafIndex][t].add(v, static_cast<double>(std::max<std::uint64_t>(rays, 1)));
    };

    double total = 0;

    // next event estimation: direct light only
    double nee_sum = 0;
    for (std::uint32_t s = 0; s < counts[kNee]; ++s) {
        const std::uint64_t before = path.counter.rays;
        double value = 0;
        const auto light = m_scene.sample_emitter(path.rng.uniform());
        const Vec2 to = light.point - hit.point;
        const double distance = length(to);
        if (distance > 0) {
            const Vec2 d = to * (1.0 / distance);
            const double theta_i = local_angle(n, d);
            const double fcos = material.eval(theta_i, theta_o);
            const Segment &emitter = m_scene.segment(light.segment);
            const double p_n = nee_pdf(m_scene, emitter, d, distance);
            if (fcos > 0 && p_n > 0 &&
                m_scene.visible(hit.point, hit.segment, light.point, light.segment, path.counter)) {
                const double p_b = material.pdf(theta_i, theta_o);
                const double p_g = leaf.guide.pdf(normal_angle + theta_i);
                const double w = c[kNee] * p_n / (c[kBsdf] * p_b + c[kNee] * p_n + c[kGuided] * p_g);
                value = w * fcos * emitter.radiance / p_n;
            }
        }
        record(kNee, value, path.counter.rays - before);
        nee_sum += value;
    }
    if (counts[kNee])
        total += nee_sum / beta[kNee];

    // BSDF and guided sampling: direct and indirect light
    for (std::size_t t : {kBsdf, kGuided}) {
        double sum = 0;
        for (std::uint32_t s = 0; s < counts[t]; ++s) {
            const std::uint64_t before = path.counter.rays;
            double value = 0;
            const double u = path.rng.uniform();
            const double theta_i = t == kBsdf ? material.sample(theta_o, u) : wrap_angle(leaf.guide.sample(u) - normal_angle);
            const double fcos = material.eval(theta_i, theta_o);
            if (fcos > 0) {
                const double angle = normal_angle + theta_i;
                const double p_b = material.pdf(theta_i, theta_o);
                const double p_g = leaf.guide.pdf(angle);
                const double p = t == kBsdf ? p_b : p_g;
                const Vec2 d = direction(angle);
                if (const auto next = m_scene.intersect(hit.point, d, path.counter, hit.segment)) {
                    const Segment &target = m_scene.segment(next->segment);
                    const double indirect_norm = c[kBsdf] * p_b + c[kGuided] * p_g;
                    double incident = 0;
                    if (target.emitter()) {
                        const double p_n = nee_pdf(m_scene, target, d, next->distance);
                        const double w = c[t] * p / (indirect_norm + c[kNee] * p_n);
                        value += w * fcos * target.radiance / p;
                        incident += target.radiance;
                    }
                    if (!target.material.black_body()) {
                        const double w = c[t] * p / indirect_norm;
                        const double child = throughput * fcos * w / (p * beta[t]);
                        const double reflected = shade(*next, -d, child, child_breadth, depth + 1, path);
                        value += w * fcos * reflected / p;
                        incident += reflected;
                    }
                    if (path.stats && incident > 0)
                        path.stats->guide[leafIndex][GuideHistogram::bin_of(angle)] += fcos * incident / indirect_norm;
                }
            }
            record(t, value, path.counter.rays - before);
            sum += value;
        }
        if (counts[t])
            total += sum / beta[t];
    }
    return total;
}

} // namespace mars::flatland
