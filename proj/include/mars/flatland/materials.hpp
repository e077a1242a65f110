#pragma once

#include "mars/core/density.hpp"

#include <memory>

namespace mars::flatland {

/// Reflectance model in a local frame where angles are measured from the surface
/// normal on the side of the outgoing direction; |θ| < π/2 is the upper half.
/// Every query works with f·|cos θ_i| because that is what the estimators need.
class Material {
public:
    enum class Type { Diffuse, Glossy };

    /// f = albedo/2, so the cosine-weighted integral over the half circle is albedo.
    static Material diffuse(double albedo);

    /// f·cos θ_i = albedo·cosⁿ(θ_i − θ_r)/N around the mirror direction θ_r = −θ_o,
    /// with N the full-lobe normalization; energy below the horizon is lost.
    static Material glossy(double albedo, double exponent);

    static Material black() { return diffuse(0); }

    Type type() const { return m_type; }
    double albedo() const { return m_albedo; }
    double exponent() const { return m_exponent; }
    bool black_body() const { return m_albedo == 0; }

    double eval(double theta_i, double theta_o) const;

    /// Angle density of sample().
    double pdf(double theta_i, double theta_o) const;

    /// May return a direction below the horizon (glossy), where eval is zero.
    double sample(double theta_o, double u) const;

private:
    Type m_type = Type::Diffuse;
    double m_albedo = 0;
    double m_exponent = 0;
    double m_norm = 1;
    std::shared_ptr<const Density> m_lobe;
};

} // namespace mars::flatland
