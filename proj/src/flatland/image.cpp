#include "mars/flatland/image.hpp"

#include "mars/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mars::flatland {

void IterationImage::merge(const IterationImage &other) {
    if (other.pixels.size() != pixels.size())
        throw ContractViolation("cannot merge images of different sizes");
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i].merge(other.pixels[i]);
    rays += other.rays;
}

std::vector<double> IterationImage::mean() const {
    std::vector<double> out(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        out[i] = pixels[i].mean();
    return out;
}

ImageState::ImageState(std::size_t pixels) : m_total(pixels) {}

void ImageState::add(const IterationImage &iteration) {
    if (iteration.pixels.size() != m_total.size())
        throw ContractViolation("iteration image size does not match");
    for (std::size_t i = 0; i < m_total.size(); ++i)
        m_total[i].merge(iteration.pixels[i]);
    m_rays += iteration.rays;
}

std::vector<double> ImageState::estimates() const {
    std::vector<double> out = mean();
    const double brightness = out.empty() ? 0.0 : std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    if (!(brightness > 0)) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    for (auto &v : out)
        v = std::max(v, kFloor * brightness);
    return out;
}

std::vector<double> ImageState::mean() const {
    std::vector<double> out(m_total.size());
    for (std::size_t i = 0; i < m_total.size(); ++i)
        out[i] = m_total[i].mean();
    return out;
}

std::vector<double> ImageState::variance_of_mean() const {
    std::vector<double> out(m_total.size());
    for (std::size_t i = 0; i < m_total.size(); ++i) {
        const auto &p = m_total[i];
        if (p.count < 2)
            continue;
        const double n = static_cast<double>(p.count);
        const double mean = p.sum / n;
        const double var = std::max(p.sum_sq / n - mean * mean, 0.0) * n / (n - 1);
        out[i] = var / n;
    }
    return out;
}

ImageStatistics image_statistics(const IterationImage &iteration, std::span<const double> estimates) {
    const std::size_t n = iteration.pixels.size();
    if (n == 0 || estimates.size() != n)
        throw ContractViolation("image statistics need one estimate per pixel");
    if (iteration.samples_per_pixel == 0)
        throw ContractViolation("image statistics need at least one sample per pixel");
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto &p = iteration.pixels[i];
        if (p.count == 0)
            throw ContractViolation("image statistics need at least one sample per pixel");
        const double c = static_cast<double>(p.count);
        const double ref = estimates[i];
        const double squared = std::max(p.sum_sq - 2 * ref * p.sum + c * ref * ref, 0.0) / c;
        total += squared / (ref * ref);
    }
    ImageStatistics out;
    out.variance = total / static_cast<double>(n);
    out.cost = static_cast<double>(iteration.rays) /
               (static_cast<double>(n) * static_cast<double>(iteration.samples_per_pixel));
    return out;
}

double relative_mse(std::span<const double> image, std::span<const double> reference, double discard,
                    double epsilon) {
    if (image.size() != reference.size() || image.empty())
        throw ContractViolation("relative MSE needs equally sized, nonempty images");
    std::vector<double> errors(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double d = image[i] - reference[i];
        errors[i] = d * d / (reference[i] * reference[i] + epsilon);
    }
    std::sort(errors.begin(), errors.end());
    const auto drop = static_cast<std::size_t>(std::floor(discard * static_cast<double>(errors.size())));
    const std::size_t keep = errors.size() - std::min(drop, errors.size() - 1);
    return std::accumulate(errors.begin(), errors.begin() + static_cast<std::ptrdiff_t>(keep), 0.0) /
           static_cast<double>(keep);
}

} // namespace mars::flatland
