#include "svgkit/raster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "svgkit/error.hpp"

namespace svgkit::raster {

namespace {

void check_same_size(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatch("image sizes differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                                " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
}

// Separable valid-region filter: output is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    const int ow = w - n + 1, oh = h - n + 1;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

} // namespace

double mse(const RasterImage& a, const RasterImage& b) {
    check_same_size(a, b);
    if (a.data.empty()) return 0.0;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const int d = static_cast<int>(a.data[i]) - static_cast<int>(b.data[i]);
        sum += static_cast<std::uint64_t>(d * d);
    }
    return static_cast<double>(sum) / static_cast<double>(a.data.size());
}

double psnr_from_mse(double mse_value) {
    if (mse_value <= 0) return kPsnrCap;
    return std::clamp(10.0 * std::log10(255.0 * 255.0 / mse_value), 0.0, kPsnrCap);
}

double psnr(const RasterImage& a, const RasterImage& b) { return psnr_from_mse(mse(a, b)); }

std::vector<double> luma(const RasterImage& img) {
    std::vector<double> y(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const std::uint8_t* p = &img.data[i * 3];
        y[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return y;
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimOptions& opt) {
    check_same_size(a, b);
    if (std::min(a.width, a.height) < opt.window) {
        throw TooSmall("SSIM needs both sides >= " + std::to_string(opt.window));
    }
    std::vector<double> kernel(static_cast<std::size_t>(opt.window));
    const double mid = (opt.window - 1) / 2.0;
    double total = 0;
    for (int i = 0; i < opt.window; ++i) {
        const double d = i - mid;
        kernel[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * opt.sigma * opt.sigma));
        total += kernel[static_cast<std::size_t>(i)];
    }
    for (auto& v : kernel) v /= total;

    const int w = a.width, h = a.height;
    const auto x = luma(a);
    const auto y = luma(b);
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, kernel);
    const auto my = filter_valid(y, w, h, kernel);
    const auto sxx = filter_valid(xx, w, h, kernel);
    const auto syy = filter_valid(yy, w, h, kernel);
    const auto sxy = filter_valid(xy, w, h, kernel);

    const double c1 = (opt.k1 * 255) * (opt.k1 * 255);
    const double c2 = (opt.k2 * 255) * (opt.k2 * 255);
    double sum = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double ux = mx[i], uy = my[i];
        const double vx = sxx[i] - ux * ux;
        const double vy = syy[i] - uy * uy;
        const double cov = sxy[i] - ux * uy;
        sum += ((2 * ux * uy + c1) * (2 * cov + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
    return sum / static_cast<double>(mx.size());
}

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::Ssim: return "ssim";
    case Metric::Psnr: return "psnr";
    case Metric::Mse: return "mse";
    }
    return "";
}

double compute_metric(Metric m, const RasterImage& a, const RasterImage& b) {
    switch (m) {
    case Metric::Ssim: return ssim(a, b);
    case Metric::Psnr: return psnr(a, b);
    case Metric::Mse: return mse(a, b);
    }
    return 0;
}

double video_metric(const std::vector<RenderOutcome>& a, const std::vector<RenderOutcome>& b, Metric metric) {
    if (a.size() != b.size()) {
        throw LengthMismatch("frame counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    if (a.empty()) throw LengthMismatch("no frames to compare");
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += compute_metric(metric, a[i].image, b[i].image);
    return sum / static_cast<double>(a.size());
}

} // namespace svgkit::raster
