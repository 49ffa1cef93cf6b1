#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "svgkit/core/document.hpp"
#include "svgkit/raster/render.hpp"

namespace svgkit::raster {

/// Parses a SMIL clock value ("2s", "150ms", "1.5", "00:01:02.5").
std::optional<double> parse_clock_value(std::string_view text);

/// Largest begin + dur over the document's animation elements; 0 when the
/// document is static.
double resolve_duration(const core::SvgDocument& doc);

/// Timestamps k * duration / (n - 1); a single frame sits at t = 0.
std::vector<double> frame_times(int n_frames, double duration);

/// Static snapshot of the document at time `t` (seconds): every animated
/// attribute takes its value at `t` and the animation elements are dropped.
/// The active interval end is inclusive, so t = begin + dur shows the final
/// value even without fill="freeze".
core::SvgDocument sample_document(const core::SvgDocument& doc, double t);

/// Renders `n_frames` frames. A non-positive `duration` means "resolve from
/// the document". Failures penalize the affected frames only.
std::vector<RenderOutcome> rasterize_animation(const core::SvgDocument& doc, const RenderOptions& options,
                                               int n_frames, double duration = 0);
std::vector<RenderOutcome> rasterize_animation(const core::SvgDocument& doc, int size, int n_frames,
                                               double duration = 0);

/// Parse failures penalize every frame.
std::vector<RenderOutcome> rasterize_animation_text(std::string_view svg_text, const RenderOptions& options,
                                                    int n_frames, double duration = 0);

} // namespace svgkit::raster
