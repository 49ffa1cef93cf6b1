#pragma once

#include "svgkit/core/document.hpp"

namespace svgkit::normalize {

struct NormalizeConfig {
    double canvas_width = 128;
    double canvas_height = 128;
    int precision = 2;

    /// Throws std::invalid_argument on a non-positive canvas or negative precision.
    void validate() const;
};

/// Source coordinate window: the root viewBox, or 0 0 width height.
struct Extent {
    double x = 0, y = 0, width = 0, height = 0;
};

/// Throws NoExtent or DegenerateExtent.
Extent source_extent(const core::SvgDocument& doc);

/// Maps the source extent onto the canvas with a uniform scale and centers
/// the shorter side. Coordinates are rewritten in place where possible;
/// otherwise the content is wrapped in a single scaling group.
core::SvgDocument normalize_viewbox(const core::SvgDocument& doc, const NormalizeConfig& config = {});

/// Rounds every numeric literal half away from zero to `precision` decimals.
core::SvgDocument quantize_numbers(const core::SvgDocument& doc, int precision = 2);

struct SimplifyOptions {
    /// Values are compared with their defaults after rounding to this many
    /// decimals, so simplification commutes with quantization.
    int precision = core::kFullPrecision;
};

/// Drops metadata, comments, editor cruft, unused definitions, unreferenced
/// ids and default-valued attributes. Group elements are always kept.
core::SvgDocument simplify(const core::SvgDocument& doc, const SimplifyOptions& options = {});

/// Moves the root's drawable children (everything but defs, metadata,
/// style/script and root animations) into `group`, placed where the first
/// of them was.
void wrap_root_content(core::SvgElement& root, core::SvgElement group);

/// normalize_viewbox -> simplify -> quantize_numbers.
core::SvgDocument pipeline(const core::SvgDocument& doc, const NormalizeConfig& config = {}, bool simplify = true);

} // namespace svgkit::normalize
