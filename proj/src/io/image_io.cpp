#include "mars/io/image_io.hpp"

#include "mars/core/errors.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace mars {

using namespace flatland;

void write_pfm(const std::filesystem::path &path, std::span<const double> values, std::size_t width,
               std::size_t height) {
    if (values.size() != width * height)
        throw ContractViolation("PFM size does not match the pixel count");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + path.string());
    // negative scale marks little-endian data
    out << "Pf\n" << width << " " << height << "\n-1.0\n";
    for (std::size_t row = height; row-- > 0;)
        for (std::size_t col = 0; col < width; ++col) {
            const float v = static_cast<float>(values[row * width + col]);
            std::uint32_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                                   static_cast<char>((bits >> 16) & 0xff), static_cast<char>(bits >> 24)};
            out.write(bytes, 4);
        }
}

GrayImage read_pfm(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("cannot open " + path.string());
    std::string magic;
    GrayImage img;
    double scale = 0;
    in >> magic >> img.width >> img.height >> scale;
    in.get();
    if (magic != "Pf" || !in || !(scale < 0))
        throw SchemaError(path.string() + ": not a little-endian grayscale PFM");
    img.values.resize(img.width * img.height);
    for (std::size_t row = img.height; row-- > 0;)
        for (std::size_t col = 0; col < img.width; ++col) {
            unsigned char bytes[4];
            in.read(reinterpret_cast<char *>(bytes), 4);
            const std::uint32_t bits = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                                       (static_cast<std::uint32_t>(bytes[3]) << 24);
            float v;
            std::memcpy(&v, &bits, sizeof v);
            img.values[row * img.width + col] = v;
        }
    if (!in)
        throw SchemaError(path.string() + ": truncated PFM");
    return img;
}

void write_png_rgb(const std::filesystem::path &path, std::span<const std::uint8_t> rgb, std::size_t width,
                   std::size_t height) {
    if (rgb.size() != 3 * width * height)
        throw ContractViolation("PNG buffer size does not match the image size");
    std::unique_ptr<FILE, int (*)(FILE *)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!file)
        throw ValidationError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw ValidationError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ValidationError("libpng failed writing " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t row = 0; row < height; ++row)
        png_write_row(png, const_cast<png_bytep>(rgb.data() + row * width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

namespace {

std::uint8_t srgb(double linear) {
    const double c = std::clamp(linear, 0.0, 1.0);
    const double v = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1 / 2.4) - 0.055;
    return static_cast<std::uint8_t>(std::lround(v * 255));
}

} // namespace

void write_png_preview(const std::filesystem::path &path, std::span<const double> film, std::size_t height) {
    std::vector<double> sorted(film.begin(), film.end());
    std::sort(sorted.begin(), sorted.end());
    double white = sorted.empty() ? 1.0 : sorted[static_cast<std::size_t>(0.99 * static_cast<double>(sorted.size() - 1))];
    if (!(white > 0))
        white = 1;
    std::vector<std::uint8_t> rgb(film.size() * height * 3);
    for (std::size_t row = 0; row < height; ++row)
        for (std::size_t col = 0; col < film.size(); ++col) {
            const std::uint8_t v = srgb(film[col] / white);
            for (int ch = 0; ch < 3; ++ch)
                rgb[(row * film.size() + col) * 3 + ch] = v;
        }
    write_png_rgb(path, rgb, film.size(), height);
}

void write_budget_png(const std::filesystem::path &path, const Scene &scene, const std::vector<LeafBudgets> &leaves,
                      BudgetBounds bounds, std::size_t resolution) {
    const Bounds box = scene.bounds();
    const double size = box.hi.x - box.lo.x;
    std::vector<std::uint8_t> rgb(resolution * resolution * 3, 0);
    auto channel = [&](double beta) {
        const double t = std::log(beta / bounds.lo) / std::log(bounds.hi / bounds.lo);
        return static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255));
    };
    auto pixelOf = [&](Vec2 p) {
        const double fx = (p.x - box.lo.x) / size, fy = (box.hi.y - p.y) / size;
        return std::pair{static_cast<long>(fx * static_cast<double>(resolution)),
                         static_cast<long>(fy * static_cast<double>(resolution))};
    };
    const long res = static_cast<long>(resolution);
    for (const auto &leaf : leaves) {
        const auto [x0, y1] = pixelOf(leaf.box.lo);
        const auto [x1, y0] = pixelOf(leaf.box.hi);
        const std::array<std::uint8_t, 3> color = {channel(leaf.beta[kBsdf]), channel(leaf.beta[kNee]),
                                                   channel(leaf.beta[kGuided])};
        for (long y = std::max(0l, y0); y < std::min(res, y1 + 1); ++y)
            for (long x = std::max(0l, x0); x < std::min(res, x1 + 1); ++x)
                std::copy(color.begin(), color.end(), rgb.begin() + (y * res + x) * 3);
    }
    for (const auto &s : scene.segments()) {
        const double steps = 2.0 * static_cast<double>(resolution);
        for (double i = 0; i <= steps; ++i) {
            const auto [x, y] = pixelOf(s.a + s.edge() * (i / steps));
            if (x >= 0 && x < res && y >= 0 && y < res)
                std::fill_n(rgb.begin() + (y * res + x) * 3, 3, std::uint8_t{255});
        }
    }
    write_png_rgb(path, rgb, resolution, resolution);
}

} // namespace mars
