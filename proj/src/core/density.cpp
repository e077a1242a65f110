#include "mars/core/density.hpp"

#include "mars/core/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mars {

namespace {

class UniformDensity final : public Density::Impl {
public:
    explicit UniformDensity(Interval support) : m_support(support) {}

    double pdf(double x) const override {
        return m_support.contains(x) ? 1.0 / m_support.length() : 0.0;
    }
    double sample(double u) const override { return m_support.lo + u * m_support.length(); }
    Interval support() const override { return m_support; }
    std::vector<double> breakpoints() const override { return {m_support.lo, m_support.hi}; }
    std::string describe() const override {
        std::ostringstream out;
        out << "uniform[" << m_support.lo << ", " << m_support.hi << "]";
        return out.str();
    }

private:
    Interval m_support;
};

double standardNormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

class TruncatedGaussian final : public Density::Impl {
public:
    TruncatedGaussian(double mean, double sigma, Interval domain)
        : m_mean(mean), m_sigma(sigma), m_domain(domain) {
        m_cdfLo = standardNormalCdf((domain.lo - mean) / sigma);
        m_cdfHi = standardNormalCdf((domain.hi - mean) / sigma);
        m_mass = m_cdfHi - m_cdfLo;
        if (!(m_mass > 1e-12))
            throw ValidationError("truncated gaussian has no mass inside its domain");
    }

    double pdf(double x) const override {
        if (!m_domain.contains(x))
            return 0.0;
        const double z = (x - m_mean) / m_sigma;
        return std::exp(-0.5 * z * z) / (m_sigma * std::sqrt(2 * M_PI) * m_mass);
    }

    double sample(double u) const override {
        const double p = m_cdfLo + u * m_mass;
        // erf_inv rejects the open endpoints
        const double arg = std::clamp(2 * p - 1, -1 + 1e-16, 1 - 1e-16);
        const double x = m_mean + m_sigma * std::sqrt(2.0) * boost::math::erf_inv(arg);
        return std::clamp(x, m_domain.lo, m_domain.hi);
    }

    Interval support() const override { return m_domain; }
    std::vector<double> breakpoints() const override { return {m_domain.lo, m_domain.hi}; }
    std::string describe() const override {
        std::ostringstream out;
        out << "gaussian(" << m_mean << ", " << m_sigma << ")";
        return out.str();
    }

private:
    double m_mean, m_sigma;
    Interval m_domain;
    double m_cdfLo, m_cdfHi, m_mass;
};

class TabulatedDensity final : public Density::Impl {
public:
    TabulatedDensity(const std::function<double(double)> &shape, Interval domain, std::size_t cells)
        : m_domain(domain), m_cellWidth(domain.length() / static_cast<double>(cells)),
          m_values(cells), m_cdf(cells + 1, 0.0) {
        for (std::size_t i = 0; i < cells; ++i) {
            const double mid = domain.lo + (static_cast<double>(i) + 0.5) * m_cellWidth;
            const double v = shape(mid);
            if (!(v >= 0) || !std::isfinite(v))
                throw ValidationError("tabulated density shape must be finite and nonnegative");
            m_values[i] = v;
        }
        std::partial_sum(m_values.begin(), m_values.end(), m_cdf.begin() + 1);
        const double total = m_cdf.back();
        if (!(total > 0))
            throw ValidationError("tabulated density shape integrates to zero");
        for (auto &c : m_cdf)
            c /= total;
        m_cdf.back() = 1.0;
        for (auto &v : m_values)
            v /= total * m_cellWidth;
    }

    double pdf(double x) const override {
        if (!m_domain.contains(x))
            return 0.0;
        return m_values[cellIndex(x)];
    }

    double sample(double u) const override {
        auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
        std::size_t cell = static_cast<std::size_t>(std::distance(m_cdf.begin(), it));
        cell = std::clamp<std::size_t>(cell, 1, m_values.size()) - 1;
        // zero-mass cells cannot be selected by upper_bound on a strictly increasing run
        const double lo = m_cdf[cell], hi = m_cdf[cell + 1];
        const double t = hi > lo ? (u - lo) / (hi - lo) : 0.5;
        const double x = m_domain.lo + (static_cast<double>(cell) + t) * m_cellWidth;
        return std::clamp(x, m_domain.lo, m_domain.hi);
    }

    Interval support() const override { return m_domain; }

    std::vector<double> breakpoints() const override {
        std::vector<double> edges(m_values.size() + 1);
        for (std::size_t i = 0; i < edges.size(); ++i)
            edges[i] = m_domain.lo + static_cast<double>(i) * m_cellWidth;
        edges.back() = m_domain.hi;
        return edges;
    }

    std::string describe() const override {
        return "tabulated(" + std::to_string(m_values.size()) + " cells)";
    }

private:
    std::size_t cellIndex(double x) const {
        const auto i = static_cast<std::size_t>((x - m_domain.lo) / m_cellWidth);
        return std::min(i, m_values.size() - 1);
    }

    Interval m_domain;
    double m_cellWidth;
    std::vector<double> m_values;
    std::vector<double> m_cdf;
};

class MixtureDensity final : public Density::Impl {
public:
    MixtureDensity(std::vector<double> weights, std::vector<Density> components)
        : m_weights(std::move(weights)), m_components(std::move(components)) {
        if (m_weights.empty() || m_weights.size() != m_components.size())
            throw ValidationError("mixture needs one weight per component");
        const double total = std::accumulate(m_weights.begin(), m_weights.end(), 0.0);
        for (double w : m_weights)
            if (!(w >= 0))
                throw ValidationError("mixture weights must be nonnegative");
        if (!(total > 0))
            throw ValidationError("mixture weights sum to zero");
        for (auto &w : m_weights)
            w /= total;
        m_cdf.resize(m_weights.size() + 1, 0.0);
        std::partial_sum(m_weights.begin(), m_weights.end(), m_cdf.begin() + 1);
        m_cdf.back() = 1.0;

        m_support = m_components.front().support();
        for (const auto &c : m_components) {
            m_support.lo = std::min(m_support.lo, c.support().lo);
            m_support.hi = std::max(m_support.hi, c.support().hi);
        }
    }

    double pdf(double x) const override {
        double result = 0;
        for (std::size_t i = 0; i < m_components.size(); ++i)
            result += m_weights[i] * m_components[i].pdf(x);
        return result;
    }

    double sample(double u) const override {
        std::size_t i = 0;
        while (i + 1 < m_components.size() && u >= m_cdf[i + 1])
            ++i;
        const double width = m_cdf[i + 1] - m_cdf[i];
        const double v = std::clamp((u - m_cdf[i]) / width, 0.0, std::nextafter(1.0, 0.0));
        return m_components[i].sample(v);
    }

    Interval support() const override { return m_support; }

    std::vector<double> breakpoints() const override {
        std::vector<double> out;
        for (const auto &c : m_components) {
            auto b = c.breakpoints();
            out.insert(out.end(), b.begin(), b.end());
        }
        return out;
    }

    std::string describe() const override {
        std::string out = "mixture(";
        for (std::size_t i = 0; i < m_components.size(); ++i) {
            if (i)
                out += ", ";
            out += std::to_string(m_weights[i]) + "*" + m_components[i].describe();
        }
        return out + ")";
    }

private:
    std::vector<double> m_weights;
    std::vector<Density> m_components;
    std::vector<double> m_cdf;
    Interval m_support;
};

} // namespace

Density Density::uniform(Interval support) {
    if (!(support.hi > support.lo))
        throw ValidationError("uniform density needs a nonempty support");
    return Density(std::make_shared<UniformDensity>(support));
}

Density Density::gaussian(double mean, double sigma, Interval domain) {
    if (!(sigma > 0))
        throw ValidationError("gaussian density needs sigma > 0");
    return Density(std::make_shared<TruncatedGaussian>(mean, sigma, domain));
}

Density Density::tabulated(const std::function<double(double)> &shape, Interval domain, std::size_t cells) {
    if (cells < 2048)
        throw ValidationError("tabulated density needs at least 2048 cells");
    if (!(domain.hi > domain.lo))
        throw ValidationError("tabulated density needs a nonempty domain");
    return Density(std::make_shared<TabulatedDensity>(shape, domain, cells));
}

Density Density::mixture(std::vector<double> weights, std::vector<Density> components) {
    return Density(std::make_shared<MixtureDensity>(std::move(weights), std::move(components)));
}

} // namespace mars
