#include "mars/flatland/guide.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mars::flatland {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kBinWidth = kTwoPi / GuideHistogram::kBins;

} // namespace

GuideHistogram::GuideHistogram() {
    m_probabilities.fill(1.0 / kBins);
    for (std::size_t i = 0; i <= kBins; ++i)
        m_cdf[i] = static_cast<double>(i) / kBins;
}

std::size_t GuideHistogram::bin_of(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0)
        a += kTwoPi;
    return std::min(static_cast<std::size_t>(a / kBinWidth), kBins - 1);
}

double GuideHistogram::pdf(double angle) const { return m_probabilities[bin_of(angle)] / kBinWidth; }

double GuideHistogram::sample(double u) const {
    auto it = std::upper_bound(m_cdf.begin() + 1, m_cdf.end(), u);
    const auto bin = std::min(static_cast<std::size_t>(std::distance(m_cdf.begin() + 1, it)), kBins - 1);
    const double lo = m_cdf[bin], hi = m_cdf[bin + 1];
    const double t = std::clamp((u - lo) / (hi - lo), 0.0, 1.0);
    return (static_cast<double>(bin) + t) * kBinWidth;
}

void GuideHistogram::fit(const std::array<double, kBins> &weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0) || !std::isfinite(total))
        return;
    for (std::size_t i = 0; i < kBins; ++i)
        m_probabilities[i] = (1 - kUniformFraction) * weights[i] / total + kUniformFraction / kBins;
    m_cdf[0] = 0;
    for (std::size_t i = 0; i < kBins; ++i)
        m_cdf[i + 1] = m_cdf[i] + m_probabilities[i];
    m_cdf.back() = 1.0;
}

} // namespace mars::flatland
