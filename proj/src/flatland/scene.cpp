#include "mars/flatland/scene.hpp"

#include "mars/core/errors.hpp"

#include <algorithm>
#include <limits>

namespace mars::flatland {

namespace {

constexpr double kEpsilon = 1e-9;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Parameter t along origin + t·dir where the ray crosses segment s, if it does.
std::optional<double> crossing(Vec2 origin, Vec2 dir, const Segment &s) {
    const Vec2 e = s.edge();
    const double denom = cross(dir, e);
    if (denom == 0)
        return std::nullopt;
    const Vec2 w = s.a - origin;
    const double t = cross(w, e) / denom;
    const double v = cross(w, dir) / denom;
    if (v < 0 || v > 1)
        return std::nullopt;
    return t;
}

} // namespace

Scene::Scene(std::vector<Segment> segments, Camera camera, std::string name)
    : m_name(std::move(name)), m_segments(std::move(segments)), m_camera(camera) {
    m_bounds = {camera.position, camera.position};
    for (std::size_t i = 0; i < m_segments.size(); ++i) {
        const auto &s = m_segments[i];
        for (Vec2 p : {s.a, s.b}) {
            m_bounds.lo = {std::min(m_bounds.lo.x, p.x), std::min(m_bounds.lo.y, p.y)};
            m_bounds.hi = {std::max(m_bounds.hi.x, p.x), std::max(m_bounds.hi.y, p.y)};
        }
        if (s.emitter()) {
            m_emitters.push_back(i);
            m_emitterLength += s.length();
            m_emitterCdf.push_back(m_emitterLength);
        }
    }
    // square the box so quadtree cells stay isotropic, and pad it slightly
    const double extent = std::max({m_bounds.hi.x - m_bounds.lo.x, m_bounds.hi.y - m_bounds.lo.y, 1e-6});
    const Vec2 center = (m_bounds.lo + m_bounds.hi) * 0.5;
    const double half = 0.5 * extent * 1.01;
    m_bounds = {center - Vec2{half, half}, center + Vec2{half, half}};
    for (auto &c : m_emitterCdf)
        c /= m_emitterLength;
}

void Scene::validate() const {
    if (!finite(m_camera.position) || !std::isfinite(m_camera.direction))
        throw ValidationError("camera must be finite");
    if (!(m_camera.fov > 0 && m_camera.fov < 6.2831853) || m_camera.pixels == 0)
        throw ValidationError("camera needs 0 < fov < 2π and at least one pixel");
    for (const auto &s : m_segments) {
        if (!finite(s.a) || !finite(s.b) || !(s.length() > 0))
            throw ValidationError("segments must be finite with nonzero length");
        if (!(s.material.albedo() >= 0 && s.material.albedo() < 1))
            throw ValidationError("albedo must lie in [0, 1)");
        if (!(s.radiance >= 0) || !std::isfinite(s.radiance))
            throw ValidationError("radiance must be finite and nonnegative");
    }
    if (m_emitters.empty())
        throw ValidationError("scene needs at least one emitter");
}

std::optional<Hit> Scene::intersect(Vec2 origin, Vec2 dir, RayCounter &counter,
                                    std::optional<std::size_t> skip) const {
    ++counter.rays;
    std::optional<Hit> best;
    double bestT = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_segments.size(); ++i) {
        if (skip && *skip == i)
            continue;
        const auto t = crossing(origin, dir, m_segments[i]);
        if (t && *t > kEpsilon && *t < bestT) {
            bestT = *t;
            best = Hit{*t, origin + dir * *t, i};
        }
    }
    return best;
}

bool Scene::visible(Vec2 from, std::size_t fromSegment, Vec2 to, std::size_t toSegment,
                    RayCounter &counter) const {
    ++counter.rays;
    const Vec2 d = to - from;
    for (std::size_t i = 0; i < m_segments.size(); ++i) {
        if (i == fromSegment || i == toSegment)
            continue;
        const auto t = crossing(from, d, m_segments[i]);
        if (t && *t > kEpsilon && *t < 1 - kEpsilon)
            return false;
    }
    return true;
}

Scene::EmitterSample Scene::sample_emitter(double u) const {
    auto it = std::upper_bound(m_emitterCdf.begin(), m_emitterCdf.end(), u);
    std::size_t k = static_cast<std::size_t>(std::distance(m_emitterCdf.begin(), it));
    k = std::min(k, m_emitters.size() - 1);
    const double lo = k == 0 ? 0.0 : m_emitterCdf[k - 1];
    const double hi = m_emitterCdf[k];
    const double t = hi > lo ? std::clamp((u - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    const auto &s = m_segments[m_emitters[k]];
    return {s.a + s.edge() * t, m_emitters[k]};
}

} // namespace mars::flatland
