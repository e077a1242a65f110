#pragma once

#include <array>
#include <cstddef>

namespace mars::flatland {

/// Piecewise-constant density over world-space direction angles, learned from
/// incident radiance estimates and mixed with a uniform component so that it
/// never vanishes.
class GuideHistogram {
public:
    static constexpr std::size_t kBins = 16;
    static constexpr double kUniformFraction = 0.01;

    GuideHistogram();

    double pdf(double angle) const;
    double sample(double u) const;

    /// Refits from accumulated weights; keeps the current fit if they are all zero.
    void fit(const std::array<double, kBins> &weights);

    const std::array<double, kBins> &bin_probabilities() const { return m_probabilities; }

    static std::size_t bin_of(double angle);

private:
    std::array<double, kBins> m_probabilities;
    std::array<double, kBins + 1> m_cdf;
};

} // namespace mars::flatland
