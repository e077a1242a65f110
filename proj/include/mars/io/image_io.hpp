#pragma once

#include "mars/flatland/render.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace mars {

/// Grayscale PFM, rows stored bottom to top as the format requires. `values` is
/// row-major, top row first.
void write_pfm(const std::filesystem::path &path, std::span<const double> values, std::size_t width,
               std::size_t height);

struct GrayImage {
    std::size_t width = 0, height = 0;
    std::vector<double> values; ///< row-major, top row first
};
GrayImage read_pfm(const std::filesystem::path &path);

/// 8-bit sRGB preview of a 1D film, stretched to `height` rows; exposure maps the
/// 99th-percentile pixel to white.
void write_png_preview(const std::filesystem::path &path, std::span<const double> film, std::size_t height = 16);

/// RGB rendering of the cache leaves: red, green and blue encode the BSDF, NEE and
/// guided budgets on a log scale between the budget bounds; white lines mark segments.
void write_budget_png(const std::filesystem::path &path, const flatland::Scene &scene,
                      const std::vector<flatland::LeafBudgets> &leaves, flatland::BudgetBounds bounds,
                      std::size_t resolution = 256);

void write_png_rgb(const std::filesystem::path &path, std::span<const std::uint8_t> rgb, std::size_t width,
                   std::size_t height);

} // namespace mars
