#include "raster_oracle.hpp"

#include <cstdlib>
#include <stdexcept>

#include "svgkit/raster/metrics.hpp"

namespace svgkit::testing {

using raster::RasterImage;

RasterImage shift_image(const RasterImage& img, int dx, int dy, core::Rgb fill) {
    RasterImage out(img.width, img.height, fill);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int sx = x - dx, sy = y - dy;
            if (sx < 0 || sy < 0 || sx >= img.width || sy >= img.height) continue;
            const auto* p = img.pixel(sx, sy);
            std::copy(p, p + 3, out.pixel(x, y));
        }
    }
    return out;
}

RasterImage mirror_horizontal(const RasterImage& img) {
    RasterImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto* p = img.pixel(img.width - 1 - x, y);
            std::copy(p, p + 3, out.pixel(x, y));
        }
    }
    return out;
}

RasterImage mirror_vertical(const RasterImage& img) {
    RasterImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto* p = img.pixel(x, img.height - 1 - y);
            std::copy(p, p + 3, out.pixel(x, y));
        }
    }
    return out;
}

RasterImage rotate_quarter(const RasterImage& img, int quarter_turns) {
    if (img.width != img.height) throw std::invalid_argument("rotate_quarter needs a square image");
    const int n = img.width;
    RasterImage out = img;
    for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
        RasterImage next(n, n);
        // a clockwise turn sends source (x, y) to (n-1-y, x)
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const auto* p = out.pixel(y, n - 1 - x);
                std::copy(p, p + 3, next.pixel(x, y));
            }
        }
        out = std::move(next);
    }
    return out;
}

PixelAgreement compare_pixels(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height) throw std::invalid_argument("size mismatch");
    const std::size_t n = static_cast<std::size_t>(a.width) * a.height;
    std::size_t exact = 0, near = 0;
    int max_diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int worst = 0;
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(int(a.data[i * 3 + c]) - int(b.data[i * 3 + c])));
        exact += worst == 0;
        near += worst <= 1;
        max_diff = std::max(max_diff, worst);
    }
    return {double(exact) / double(n), double(near) / double(n), max_diff};
}

Centroid ink_centroid(const RasterImage& img) {
    Centroid c;
    const auto y = raster::luma(img);
    for (int py = 0; py < img.height; ++py) {
        for (int px = 0; px < img.width; ++px) {
            const double w = 255.0 - y[static_cast<std::size_t>(py) * img.width + px];
            c.x += w * (px + 0.5);
            c.y += w * (py + 0.5);
            c.mass += w;
        }
    }
    if (c.mass > 0) {
        c.x /= c.mass;
        c.y /= c.mass;
    }
    return c;
}

} // namespace svgkit::testing
