#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "svgkit/core/color.hpp"

namespace svgkit::raster {

/// Row-major 8-bit RGB buffer, already composited over its background.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RasterImage() = default;
    RasterImage(int w, int h, core::Rgb fill = {255, 255, 255});

    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x)) * 3;
    }
    std::uint8_t* pixel(int x, int y) { return data.data() + index(x, y); }
    const std::uint8_t* pixel(int x, int y) const { return data.data() + index(x, y); }
    core::Rgb rgb(int x, int y) const {
        const auto* p = pixel(x, y);
        return {p[0], p[1], p[2]};
    }

    bool operator==(const RasterImage&) const = default;
};

/// The all-black image used for unrenderable outputs.
RasterImage black_image(int width, int height);

void write_png(const RasterImage& image, const std::filesystem::path& path);
/// Reads 8-bit or 16-bit PNGs; alpha is composited over white.
RasterImage read_png(const std::filesystem::path& path);

} // namespace svgkit::raster
