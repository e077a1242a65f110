#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mars::flatland {

struct PixelAccumulator {
    std::uint64_t count = 0;
    double sum = 0;
    double sum_sq = 0;

    void add(double v) {
        ++count;
        sum += v;
        sum_sq += v * v;
    }
    void merge(const PixelAccumulator &o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

/// Samples of one iteration.
struct IterationImage {
    std::vector<PixelAccumulator> pixels;
    std::uint64_t rays = 0;
    std::uint64_t samples_per_pixel = 0;

    explicit IterationImage(std::size_t n = 0) : pixels(n) {}
    void merge(const IterationImage &other);
    std::vector<double> mean() const;
};

struct ImageStatistics {
    double variance = 0; ///< V_I
    double cost = 0;     ///< C_I
};

/// Running per-pixel means across completed iterations, used as the pixel
/// estimate Î in budget prefactors, statistics clamping and V_I.
class ImageState {
public:
    static constexpr double kFloor = 1e-4;

    explicit ImageState(std::size_t pixels);

    std::size_t pixels() const { return m_total.size(); }
    bool empty() const { return m_total.empty() || m_total.front().count == 0; }

    void add(const IterationImage &iteration);

    /// Î_px floored at kFloor times the mean image brightness. All ones for an
    /// all-black image.
    std::vector<double> estimates() const;

    /// Mean of all samples so far, and its per-pixel variance.
    std::vector<double> mean() const;
    std::vector<double> variance_of_mean() const;
    std::uint64_t rays() const { return m_rays; }

private:
    std::vector<PixelAccumulator> m_total;
    std::uint64_t m_rays = 0;
};

/// V_I = mean over pixels of the mean squared deviation from Î_px divided by Î_px²;
/// C_I = rays / (N_px · spp). Requires at least one sample per pixel.
ImageStatistics image_statistics(const IterationImage &iteration, std::span<const double> estimates);

/// Relative MSE against a reference, mean over pixels of (x − r)²/(r² + ε), after
/// discarding the `discard` fraction of pixels with the largest error.
double relative_mse(std::span<const double> image, std::span<const double> reference, double discard = 1e-4,
                    double epsilon = 1e-4);

} // namespace mars::flatland
