#pragma once

#include <limits>
#include <vector>

#include "svgkit/core/path_data.hpp"
#include "svgkit/core/transform.hpp"

namespace svgkit::raster::detail {

using core::Point;

struct Subpath {
    std::vector<Point> points;
    bool closed = false;
};
using Polylines = std::vector<Subpath>;
using Polygon = std::vector<Point>;

struct Box {
    double x0 = std::numeric_limits<double>::infinity();
    double y0 = std::numeric_limits<double>::infinity();
    double x1 = -std::numeric_limits<double>::infinity();
    double y1 = -std::numeric_limits<double>::infinity();

    bool empty() const { return !(x0 <= x1 && y0 <= y1); }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    void extend(Point p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    void extend(const Box& b) {
        if (b.empty()) return;
        extend(Point{b.x0, b.y0});
        extend(Point{b.x1, b.y1});
    }
};

/// Flattens path data into polylines; `tolerance` is the maximum chord error
/// in the path's own coordinate units.
Polylines flatten_path(const core::PathData& path, double tolerance);

core::PathData rect_path(double x, double y, double w, double h, double rx, double ry);
core::PathData ellipse_path(double cx, double cy, double rx, double ry);

enum class LineCap { Butt, Round, Square };
enum class LineJoin { Miter, Round, Bevel };

struct StrokeStyle {
    double width = 1;
    LineCap cap = LineCap::Butt;
    LineJoin join = LineJoin::Miter;
    double miter_limit = 4;
    std::vector<double> dashes;
    double dash_offset = 0;
};

Polylines apply_dashes(const Polylines& lines, const std::vector<double>& dashes, double offset);

/// Outline of the stroke as a set of polygons that all share one
/// orientation, so a nonzero fill of the set is their union.
std::vector<Polygon> stroke_outline(const Polylines& lines, const StrokeStyle& style,
                                    double tolerance);

/// Regular polygon approximating a circle, vertex count a multiple of 4.
Polygon circle_polygon(Point center, double radius, double tolerance);

double signed_area(const Polygon& poly);

Box bounds(const Polylines& lines);

} // namespace svgkit::raster::detail
