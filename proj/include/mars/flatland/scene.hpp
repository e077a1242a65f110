#pragma once

#include "mars/flatland/materials.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mars::flatland {

struct Vec2 {
    double x = 0, y = 0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2 &) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }
inline Vec2 normalize(Vec2 a) { return a * (1.0 / length(a)); }
inline Vec2 direction(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

struct Segment {
    Vec2 a, b;
    Material material;
    /// Emitted radiance, identical on both sides; zero for non-emitters.
    double radiance = 0;

    Vec2 edge() const { return b - a; }
    double length() const { return mars::flatland::length(b - a); }
    /// Unit normal to the left of a→b. Surfaces are two-sided.
    Vec2 normal() const { return normalize(Vec2{a.y - b.y, b.x - a.x}); }
    bool emitter() const { return radiance > 0; }
};

/// Pinhole camera with a 1D film: pixel k covers the angular interval
/// [center − fov/2 + k·fov/N, center − fov/2 + (k+1)·fov/N).
struct Camera {
    Vec2 position;
    double direction = 0; ///< radians
    double fov = 1;       ///< radians
    std::size_t pixels = 64;

    double pixel_angle(std::size_t px, double u) const {
        const double width = fov / static_cast<double>(pixels);
        return direction - 0.5 * fov + (static_cast<double>(px) + u) * width;
    }
};

struct Bounds {
    Vec2 lo, hi;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

struct Hit {
    double distance = 0;
    Vec2 point;
    std::size_t segment = 0;
};

/// Counts rays per worker; every intersect/visibility query is one ray.
struct RayCounter {
    std::uint64_t rays = 0;
};

class Scene {
public:
    Scene() = default;
    Scene(std::vector<Segment> segments, Camera camera, std::string name = {});

    /// Throws ValidationError unless albedos lie in [0,1), there is at least one
    /// emitter and the geometry is finite.
    void validate() const;

    const std::string &name() const { return m_name; }
    const std::vector<Segment> &segments() const { return m_segments; }
    const Segment &segment(std::size_t i) const { return m_segments[i]; }
    const Camera &camera() const { return m_camera; }
    Camera &camera() { return m_camera; }
    const Bounds &bounds() const { return m_bounds; }

    /// Closest hit along origin + t·dir (dir unit length), ignoring segment `skip`.
    std::optional<Hit> intersect(Vec2 origin, Vec2 dir, RayCounter &counter,
                                 std::optional<std::size_t> skip = std::nullopt) const;

    /// True if nothing blocks the open segment between two surface points.
    bool visible(Vec2 from, std::size_t fromSegment, Vec2 to, std::size_t toSegment, RayCounter &counter) const;

    bool has_emitters() const { return m_emitterLength > 0; }
    double emitter_length() const { return m_emitterLength; }

    struct EmitterSample {
        Vec2 point;
        std::size_t segment;
    };
    /// Uniform by length over all emitter segments.
    EmitterSample sample_emitter(double u) const;

private:
    std::string m_name;
    std::vector<Segment> m_segments;
    Camera m_camera;
    Bounds m_bounds;
    std::vector<std::size_t> m_emitters;
    std::vector<double> m_emitterCdf;
    double m_emitterLength = 0;
};

} // namespace mars::flatland
