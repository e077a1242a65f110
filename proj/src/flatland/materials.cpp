#include "mars/flatland/materials.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mars::flatland {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

bool upper(double theta) { return std::abs(theta) < kHalfPi; }

} // namespace

Material Material::diffuse(double albedo) {
    if (!(albedo >= 0 && albedo < 1))
        throw ValidationError("albedo must lie in [0, 1)");
    Material m;
    m.m_type = Type::Diffuse;
    m.m_albedo = albedo;
    return m;
}

Material Material::glossy(double albedo, double exponent) {
    if (!(albedo >= 0 && albedo < 1))
        throw ValidationError("albedo must lie in [0, 1)");
    if (!(exponent >= 1 && exponent <= 10000))
        throw ValidationError("glossy exponent must lie in [1, 10000]");
    Material m;
    m.m_type = Type::Glossy;
    m.m_albedo = albedo;
    m.m_exponent = exponent;
    const Interval lobe{-kHalfPi, kHalfPi};
    auto shape = [exponent](double phi) { return std::pow(std::max(0.0, std::cos(phi)), exponent); };
    m.m_norm = integrate(shape, lobe, {0.0}, {.rel_tol = 1e-12});
    m.m_lobe = std::make_shared<const Density>(Density::tabulated(shape, lobe, 4096));
    return m;
}

double Material::eval(double theta_i, double theta_o) const {
    if (m_albedo == 0 || !upper(theta_i) || !upper(theta_o))
        return 0;
    if (m_type == Type::Diffuse)
        return 0.5 * m_albedo * std::cos(theta_i);
    const double phi = theta_i + theta_o;
    if (!upper(phi))
        return 0;
    return m_albedo * std::pow(std::cos(phi), m_exponent) / m_norm;
}

double Material::pdf(double theta_i, double theta_o) const {
    if (m_type == Type::Diffuse)
        return upper(theta_i) ? 0.5 * std::cos(theta_i) : 0.0;
    const double phi = theta_i + theta_o;
    return upper(phi) ? m_lobe->pdf(phi) : 0.0;
}

double Material::sample(double theta_o, double u) const {
    if (m_type == Type::Diffuse)
        return std::asin(std::clamp(2 * u - 1, -1.0, 1.0));
    return m_lobe->sample(u) - theta_o;
}

} // namespace mars::flatland
