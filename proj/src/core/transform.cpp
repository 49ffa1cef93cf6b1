#include "svgkit/core/transform.hpp"

#include <cmath>
#include <numbers>

#include "svgkit/core/number.hpp"
#include "svgkit/error.hpp"

namespace svgkit::core {

namespace {

// sin/cos in degrees, exact at multiples of 90.
void sincos_degrees(double degrees, double& s, double& c) {
    const double turns = degrees / 90.0;
    if (turns == std::floor(turns)) {
        const long q = static_cast<long>(std::fmod(turns, 4.0) + 4.0) % 4;
        constexpr double kSin[4] = {0, 1, 0, -1};
        constexpr double kCos[4] = {1, 0, -1, 0};
        s = kSin[q];
        c = kCos[q];
        return;
    }
    const double r = degrees * std::numbers::pi / 180.0;
    s = std::sin(r);
    c = std::cos(r);
}

} // namespace

TransformMatrix TransformMatrix::rotate(double degrees) {
    double s = 0, c = 1;
    sincos_degrees(degrees, s, c);
    return {c, s, -s, c, 0, 0};
}

TransformMatrix TransformMatrix::rotate(double degrees, double cx, double cy) {
    return translate(cx, cy) * rotate(degrees) * translate(-cx, -cy);
}

TransformMatrix TransformMatrix::skew_x(double degrees) {
    return {1, 0, std::tan(degrees * std::numbers::pi / 180.0), 1, 0, 0};
}

TransformMatrix TransformMatrix::skew_y(double degrees) {
    return {1, std::tan(degrees * std::numbers::pi / 180.0), 0, 1, 0, 0};
}

double TransformMatrix::mean_scale() const { return std::sqrt(std::fabs(determinant())); }

bool TransformMatrix::is_identity() const { return *this == TransformMatrix{}; }

bool TransformMatrix::invertible() const {
    const double det = determinant();
    return std::isfinite(det) && det != 0.0;
}

TransformMatrix TransformMatrix::inverse() const {
    const double det = determinant();
    const double id = 1.0 / det;
    return {d * id, -b * id, -c * id, a * id, (c * f - d * e) * id, (b * e - a * f) * id};
}

TransformMatrix operator*(const TransformMatrix& l, const TransformMatrix& r) {
    return {l.a * r.a + l.c * r.b,
            l.b * r.a + l.d * r.b,
            l.a * r.c + l.c * r.d,
            l.b * r.c + l.d * r.d,
            l.a * r.e + l.c * r.f + l.e,
            l.b * r.e + l.d * r.f + l.f};
}

TransformMatrix TransformItem::to_matrix() const {
    const auto arg = [&](std::size_t i, double fallback) {
        return i < args.size() ? args[i] : fallback;
    };
    switch (kind) {
    case Kind::Matrix:
        return {args[0], args[1], args[2], args[3], args[4], args[5]};
    case Kind::Translate:
        return TransformMatrix::translate(arg(0, 0), arg(1, 0));
    case Kind::Scale:
        return TransformMatrix::scale(arg(0, 1), arg(1, arg(0, 1)));
    case Kind::Rotate:
        if (args.size() == 3) {
            return TransformMatrix::rotate(args[0], args[1], args[2]);
        }
        return TransformMatrix::rotate(arg(0, 0));
    case Kind::SkewX:
        return TransformMatrix::skew_x(arg(0, 0));
    case Kind::SkewY:
        return TransformMatrix::skew_y(arg(0, 0));
    }
    return {};
}

TransformMatrix TransformList::to_matrix() const {
    TransformMatrix m;
    for (const auto& item : items) {
        m = m * item.to_matrix();
    }
    return m;
}

TransformList parse_transform_list(std::string_view text) {
    struct Spec {
        std::string_view name;
        TransformItem::Kind kind;
        std::size_t min_args, max_args;
        bool allow_two_for_rotate = false;
    };
    static constexpr Spec kSpecs[] = {
        {"matrix", TransformItem::Kind::Matrix, 6, 6},
        {"translate", TransformItem::Kind::Translate, 1, 2},
        {"scale", TransformItem::Kind::Scale, 1, 2},
        {"rotate", TransformItem::Kind::Rotate, 1, 3},
        {"skewX", TransformItem::Kind::SkewX, 1, 1},
        {"skewY", TransformItem::Kind::SkewY, 1, 1},
    };
    TransformList list;
    NumberScanner scan(text);
    scan.skip_ws();
    while (!scan.at_end()) {
        const Spec* spec = nullptr;
        for (const auto& s : kSpecs) {
            if (scan.rest().substr(0, s.name.size()) == s.name) {
                spec = &s;
                break;
            }
        }
        if (!spec) {
            throw TransformSyntaxError("unknown transform in '" + std::string(text) + "'");
        }
        scan.advance(spec->name.size());
        scan.skip_ws();
        if (scan.peek() != '(') {
            throw TransformSyntaxError("expected '(' after " + std::string(spec->name));
        }
        scan.advance();
        scan.skip_ws();
        TransformItem item{spec->kind, {}};
        while (scan.peek() != ')') {
            auto v = scan.number();
            if (!v) {
                throw TransformSyntaxError("bad argument in transform '" + std::string(text) + "'");
            }
            item.args.push_back(*v);
            scan.skip_separator();
        }
        scan.advance();
        const std::size_t n = item.args.size();
        const bool rotate_bad = spec->kind == TransformItem::Kind::Rotate && n == 2;
        if (n < spec->min_args || n > spec->max_args || rotate_bad) {
            throw TransformSyntaxError("wrong argument count for " + std::string(spec->name));
        }
        list.items.push_back(std::move(item));
        scan.skip_separator();
    }
    return list;
}

std::string format_transform_list(const TransformList& list, int precision) {
    static constexpr std::string_view kNames[] = {"matrix", "translate", "scale",
                                                  "rotate", "skewX", "skewY"};
    std::string out;
    for (std::size_t i = 0; i < list.items.size(); ++i) {
        if (i) {
            out += ' ';
        }
        const auto& item = list.items[i];
        out += kNames[static_cast<int>(item.kind)];
        out += '(';
        out += format_number_list(item.args, precision);
        out += ')';
    }
    return out;
}

} // namespace svgkit::core
