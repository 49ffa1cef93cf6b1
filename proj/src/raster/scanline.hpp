#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"

namespace svgkit::raster::detail {

enum class FillRule { NonZero, EvenOdd };

/// Per-pixel sample counts over the bounding rectangle of a shape.
struct CoverageMask {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    int full = 1;  // count meaning 100% coverage
    std::vector<std::uint16_t> counts;

    bool empty() const { return w <= 0 || h <= 0; }
    float at(int x, int y) const {
        if (x < x0 || y < y0 || x >= x0 + w || y >= y0 + h) return 0.f;
        return static_cast<float>(counts[static_cast<std::size_t>(y - y0) * w + (x - x0)]) /
               static_cast<float>(full);
    }
};

/// Point-samples the polygons on a regular `samples` x `samples` grid per
/// pixel. Sample offsets are symmetric, so mirrored or quarter-turned input
/// produces the mirrored or quarter-turned mask.
CoverageMask rasterize_polygons(const std::vector<Polygon>& polygons, FillRule rule, int width,
                                int height, int samples);

} // namespace svgkit::raster::detail
