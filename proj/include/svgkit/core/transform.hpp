#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace svgkit::core {

struct Point {
    double x = 0;
    double y = 0;

    bool operator==(const Point&) const = default;
};

/// 2x3 affine matrix in SVG order: [a c e; b d f; 0 0 1].
struct TransformMatrix {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    static TransformMatrix identity() { return {}; }
    static TransformMatrix translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
    static TransformMatrix scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
    /// Rotation in degrees; multiples of 90 produce exact 0/+-1 entries.
    static TransformMatrix rotate(double degrees);
    static TransformMatrix rotate(double degrees, double cx, double cy);
    static TransformMatrix skew_x(double degrees);
    static TransformMatrix skew_y(double degrees);

    Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
    /// Applies only the linear part (for direction vectors).
    Point apply_linear(Point p) const { return {a * p.x + c * p.y, b * p.x + d * p.y}; }
    double determinant() const { return a * d - b * c; }
    /// Geometric-mean scale factor, sqrt(|det|).
    double mean_scale() const;
    bool is_identity() const;
    bool invertible() const;
    TransformMatrix inverse() const;

    bool operator==(const TransformMatrix&) const = default;
};

/// lhs * rhs: the transform that applies rhs first, then lhs.
TransformMatrix operator*(const TransformMatrix& lhs, const TransformMatrix& rhs);

struct TransformItem {
    enum class Kind { Matrix, Translate, Scale, Rotate, SkewX, SkewY };
    Kind kind = Kind::Matrix;
    std::vector<double> args;

    TransformMatrix to_matrix() const;
    bool operator==(const TransformItem&) const = default;
};

struct TransformList {
    std::vector<TransformItem> items;

    TransformMatrix to_matrix() const;
    bool empty() const { return items.empty(); }
    bool operator==(const TransformList&) const = default;
};

/// Parses the SVG transform-list grammar. Throws TransformSyntaxError.
TransformList parse_transform_list(std::string_view text);
std::string format_transform_list(const TransformList& list, int precision = 2);

} // namespace svgkit::core
