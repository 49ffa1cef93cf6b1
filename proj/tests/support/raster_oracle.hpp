#pragma once

#include "svgkit/raster/image.hpp"

namespace svgkit::testing {

/// Moves the picture by whole pixels; uncovered pixels take `fill`.
raster::RasterImage shift_image(const raster::RasterImage& img, int dx, int dy, core::Rgb fill = {255, 255, 255});
raster::RasterImage mirror_horizontal(const raster::RasterImage& img);
raster::RasterImage mirror_vertical(const raster::RasterImage& img);
/// Clockwise on screen, in quarter turns. Square images only.
raster::RasterImage rotate_quarter(const raster::RasterImage& img, int quarter_turns);

struct PixelAgreement {
    double exact = 0;      // fraction of pixels equal in every channel
    double within_one = 0; // fraction with every channel differing by <= 1
    int max_diff = 0;
};
PixelAgreement compare_pixels(const raster::RasterImage& a, const raster::RasterImage& b);

/// Centroid of darkness (255 - luma) in pixel coordinates, measured from
/// the top-left corner of the image. Pixel (x, y) sits at (x + 0.5, y + 0.5).
struct Centroid {
    double x = 0, y = 0, mass = 0;
};
Centroid ink_centroid(const raster::RasterImage& img);

} // namespace svgkit::testing
