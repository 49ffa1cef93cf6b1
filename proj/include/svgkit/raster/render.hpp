#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "svgkit/core/document.hpp"
#include "svgkit/raster/image.hpp"

namespace svgkit::raster {

struct RenderOptions {
    /// Output is size x size pixels.
    int size = 512;
    /// Anti-aliasing grid per pixel side (samples_per_axis^2 samples).
    int samples_per_axis = 8;
    core::Rgb background{255, 255, 255};
    /// Maximum curve flattening error in output pixels.
    double tolerance = 0.05;
    /// Restrict drawing to the root viewBox rectangle.
    bool clip_to_viewbox = true;
};

inline constexpr int kDefaultEvalSize = 512;
inline constexpr int kMinRenderSize = 16;

/// Draws the document or throws RenderError.
RasterImage render(const core::SvgDocument& doc, const RenderOptions& options = {});

/// Result of rendering under the benchmark penalty rule: any failure is
/// replaced by an all-black image.
struct RenderOutcome {
    enum class Status { Ok, Penalized };

    Status status = Status::Ok;
    RasterImage image;
    /// Failure reason when penalized.
    std::string error;

    bool ok() const { return status == Status::Ok; }
    static RenderOutcome penalized(int size, std::string reason);
};

/// Throws TooSmall when size < kMinRenderSize.
RenderOutcome rasterize(const core::SvgDocument& doc, int size);
RenderOutcome rasterize(const core::SvgDocument& doc, const RenderOptions& options);
/// Parse failures are penalized like drawing failures.
RenderOutcome rasterize_text(std::string_view svg_text, const RenderOptions& options);

struct Bounds {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

/// Bounding box of everything drawn (strokes included) in root user units.
/// Empty documents yield nullopt. Throws RenderError like render().
std::optional<Bounds> content_bounds(const core::SvgDocument& doc);

} // namespace svgkit::raster
