#pragma once

#include <string_view>
#include <vector>

#include "svgkit/raster/image.hpp"
#include "svgkit/raster/render.hpp"

namespace svgkit::raster {

inline constexpr double kPsnrCap = 100.0;

/// Mean squared error over all RGB samples on the 0..255 scale.
double mse(const RasterImage& a, const RasterImage& b);

/// 10 log10(255^2 / mse), clamped to [0, 100]; identical images give 100.
double psnr(const RasterImage& a, const RasterImage& b);
double psnr_from_mse(double mse_value);

struct SsimOptions {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
};

/// Mean SSIM of the BT.601 luma planes over every full window position.
double ssim(const RasterImage& a, const RasterImage& b, const SsimOptions& options = {});

/// BT.601 luma, row-major.
std::vector<double> luma(const RasterImage& img);

enum class Metric { Ssim, Psnr, Mse };
std::string_view metric_name(Metric m);
double compute_metric(Metric m, const RasterImage& a, const RasterImage& b);

/// Frame-wise metric averaged over the sequence. Penalized frames carry the
/// black image and are scored like any other frame.
double video_metric(const std::vector<RenderOutcome>& a, const std::vector<RenderOutcome>& b, Metric metric);

} // namespace svgkit::raster
