#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mars {

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0;
    double hi = 1;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A probability density on a bounded interval together with its inverse-CDF sampler.
/// Cheap to copy; the representation is shared and immutable.
class Density {
public:
    class Impl {
    public:
        virtual ~Impl() = default;
        virtual double pdf(double x) const = 0;
        virtual double sample(double u) const = 0;
        virtual Interval support() const = 0;
        virtual std::vector<double> breakpoints() const = 0;
        virtual std::string describe() const = 0;
    };

    /// Uniform on `support`.
    static Density uniform(Interval support);

    /// Normal(mean, sigma) truncated to `domain` and renormalized. Analytic inverse CDF.
    static Density gaussian(double mean, double sigma, Interval domain);

    /// Piecewise-constant density on `cells` equal cells of `domain`, with the cell
    /// masses taken from a nonnegative `shape` at the cell midpoints. The table is the
    /// density: pdf and sampler agree exactly.
    static Density tabulated(const std::function<double(double)> &shape, Interval domain,
                             std::size_t cells = 2048);

    /// Convex combination of densities; weights are normalized internally.
    static Density mixture(std::vector<double> weights, std::vector<Density> components);

    double pdf(double x) const { return m_impl->pdf(x); }

    /// Maps u in [0,1) to a point distributed according to pdf.
    double sample(double u) const { return m_impl->sample(u); }

    Interval support() const { return m_impl->support(); }
    std::vector<double> breakpoints() const { return m_impl->breakpoints(); }
    std::string describe() const { return m_impl->describe(); }

private:
    explicit Density(std::shared_ptr<const Impl> impl) : m_impl(std::move(impl)) {}

    std::shared_ptr<const Impl> m_impl;
};

} // namespace mars
