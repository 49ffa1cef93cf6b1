#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svgkit::raster::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSegments = 1000;

Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double length(Point a) { return std::hypot(a.x, a.y); }

int segments_for(double deviation, double tolerance) {
    if (!(deviation > 0) || !(tolerance > 0)) return 1;
    const double n = std::ceil(std::sqrt(deviation / tolerance));
    return static_cast<int>(std::clamp(n, 1.0, static_cast<double>(kMaxSegments)));
}

// Angular step keeping chord error below tolerance on a circle of radius r.
double arc_step(double r, double tolerance) {
    if (r <= tolerance) return kPi / 2;
    return 2.0 * std::acos(1.0 - tolerance / r);
}

class Flattener {
public:
    explicit Flattener(double tolerance) : tol_(tolerance) {}

    void move_to(Point p) {
        flush();
        implicit_start_ = false;
        current_.points.push_back(p);
        start_ = p;
        pen_ = p;
    }

    void line_to(Point p) {
        begin_segment();
        current_.points.push_back(p);
        pen_ = p;
    }

    void cubic_to(Point c1, Point c2, Point p) {
        begin_segment();
        const Point p0 = pen_;
        const double dd = std::max(length(p0 - c1 * 2 + c2), length(c1 - c2 * 2 + p));
        const int n = segments_for(0.75 * dd, tol_);
        for (int i = 1; i < n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double u = 1 - t;
            const double w0 = u * u * u, w1 = 3 * u * u * t, w2 = 3 * u * t * t, w3 = t * t * t;
            current_.points.push_back({w0 * p0.x + w1 * c1.x + w2 * c2.x + w3 * p.x,
                                       w0 * p0.y + w1 * c1.y + w2 * c2.y + w3 * p.y});
        }
        line_to(p);
    }

    void quad_to(Point c, Point p) {
        begin_segment();
        const Point p0 = pen_;
        const double dd = length(p0 - c * 2 + p);
        const int n = segments_for(0.25 * dd, tol_);
        for (int i = 1; i < n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double u = 1 - t;
            current_.points.push_back({u * u * p0.x + 2 * u * t * c.x + t * t * p.x,
                                       u * u * p0.y + 2 * u * t * c.y + t * t * p.y});
        }
        line_to(p);
    }

    void arc_to(double rx, double ry, double phi_deg, bool large, bool sweep, Point p) {
        begin_segment();
        const Point p0 = pen_;
        if (p0 == p) return;
        rx = std::fabs(rx);
        ry = std::fabs(ry);
        if (rx == 0 || ry == 0) {
            line_to(p);
            return;
        }
        const double phi = phi_deg * kPi / 180.0;
        const double cphi = std::cos(phi), sphi = std::sin(phi);
        const double dx2 = (p0.x - p.x) / 2, dy2 = (p0.y - p.y) / 2;
        const double x1p = cphi * dx2 + sphi * dy2;
        const double y1p = -sphi * dx2 + cphi * dy2;
        const double lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
        if (lambda > 1) {
            const double s = std::sqrt(lambda);
            rx *= s;
            ry *= s;
        }
        const double num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p;
        const double den = rx * rx * y1p * y1p + ry * ry * x1p * x1p;
        double coef = den > 0 ? std::sqrt(std::max(0.0, num / den)) : 0.0;
        if (large == sweep) coef = -coef;
        const double cxp = coef * rx * y1p / ry;
        const double cyp = -coef * ry * x1p / rx;
        const double cx = cphi * cxp - sphi * cyp + (p0.x + p.x) / 2;
        const double cy = sphi * cxp + cphi * cyp + (p0.y + p.y) / 2;
        const auto angle = [](double ux, double uy, double vx, double vy) {
            return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
        };
        const double ux = (x1p - cxp) / rx, uy = (y1p - cyp) / ry;
        const double vx = (-x1p - cxp) / rx, vy = (-y1p - cyp) / ry;
        const double theta1 = angle(1, 0, ux, uy);
        double dtheta = angle(ux, uy, vx, vy);
        if (!sweep && dtheta > 0) dtheta -= 2 * kPi;
        if (sweep && dtheta < 0) dtheta += 2 * kPi;
        const double step = arc_step(std::max(rx, ry), tol_);
        const int n = std::clamp(static_cast<int>(std::ceil(std::fabs(dtheta) / step)), 1, kMaxSegments);
        for (int i = 1; i < n; ++i) {
            const double t = theta1 + dtheta * i / n;
            const double ex = rx * std::cos(t), ey = ry * std::sin(t);
            current_.points.push_back({cphi * ex - sphi * ey + cx, sphi * ex + cphi * ey + cy});
        }
        line_to(p);
    }

    void close() {
        if (current_.points.empty()) return;
        current_.closed = true;
        flush();
        pen_ = start_;
        implicit_start_ = true;
    }

    Point pen() const { return pen_; }

    Polylines finish() {
        flush();
        return std::move(out_);
    }

private:
    // A drawing command right after Z starts a new subpath at the old start.
    void begin_segment() {
        if (implicit_start_) {
            implicit_start_ = false;
            current_.points.push_back(start_);
        }
    }

    void flush() {
        if (!current_.points.empty()) out_.push_back(std::move(current_));
        current_ = Subpath{};
    }

    double tol_;
    Subpath current_;
    Polylines out_;
    Point start_{};
    Point pen_{};
    bool implicit_start_ = false;
};

} // namespace

Polylines flatten_path(const core::PathData& path, double tolerance) {
    Flattener f(tolerance);
    Point last_ctrl{};
    char prev = 0;
    for (const auto& cmd : path.commands) {
        const char op = cmd.op;
        const bool rel = op >= 'a' && op <= 'z';
        const char up = static_cast<char>(rel ? op - 32 : op);
        const int arity = core::path_arity(op);
        const std::size_t reps = arity == 0 ? 1 : cmd.args.size() / static_cast<std::size_t>(arity);
        for (std::size_t r = 0; r < reps; ++r) {
            const double* a = arity ? cmd.args.data() + r * static_cast<std::size_t>(arity) : nullptr;
            const Point base = rel ? f.pen() : Point{0, 0};
            auto pt = [&](int i) { return Point{a[i] + base.x, a[i + 1] + base.y}; };
            switch (up) {
            case 'M':
                if (r == 0) f.move_to(pt(0));
                else f.line_to(pt(0));
                last_ctrl = f.pen();
                prev = r == 0 ? 'M' : 'L';
                break;
            case 'L':
                f.line_to(pt(0));
                prev = 'L';
                break;
            case 'H':
                f.line_to({a[0] + (rel ? f.pen().x : 0), f.pen().y});
                prev = 'L';
                break;
            case 'V':
                f.line_to({f.pen().x, a[0] + (rel ? f.pen().y : 0)});
                prev = 'L';
                break;
            case 'C': {
                const Point c2 = pt(2);
                f.cubic_to(pt(0), c2, pt(4));
                last_ctrl = c2;
                prev = 'C';
                break;
            }
            case 'S': {
                const Point p0 = f.pen();
                const Point c1 = (prev == 'C') ? Point{2 * p0.x - last_ctrl.x, 2 * p0.y - last_ctrl.y} : p0;
                const Point c2 = pt(0);
                f.cubic_to(c1, c2, pt(2));
                last_ctrl = c2;
                prev = 'C';
                break;
            }
            case 'Q': {
                const Point c = pt(0);
                f.quad_to(c, pt(2));
                last_ctrl = c;
                prev = 'Q';
                break;
            }
            case 'T': {
                const Point p0 = f.pen();
                const Point c = (prev == 'Q') ? Point{2 * p0.x - last_ctrl.x, 2 * p0.y - last_ctrl.y} : p0;
                f.quad_to(c, pt(0));
                last_ctrl = c;
                prev = 'Q';
                break;
            }
            case 'A':
                f.arc_to(a[0], a[1], a[2], a[3] != 0, a[4] != 0, pt(5));
                prev = 'A';
                break;
            case 'Z':
                f.close();
                prev = 'Z';
                break;
            default:
                break;
            }
        }
    }
    return f.finish();
}

core::PathData rect_path(double x, double y, double w, double h, double rx, double ry) {
    using core::PathCommand;
    core::PathData p;
    if (rx <= 0 || ry <= 0) {
        p.commands = {PathCommand{'M', {x, y}}, PathCommand{'H', {x + w}}, PathCommand{'V', {y + h}},
                      PathCommand{'H', {x}}, PathCommand{'Z', {}}};
        return p;
    }
    rx = std::min(rx, w / 2);
    ry = std::min(ry, h / 2);
    p.commands = {
        PathCommand{'M', {x + rx, y}},
        PathCommand{'H', {x + w - rx}},
        PathCommand{'A', {rx, ry, 0, 0, 1, x + w, y + ry}},
        PathCommand{'V', {y + h - ry}},
        PathCommand{'A', {rx, ry, 0, 0, 1, x + w - rx, y + h}},
        PathCommand{'H', {x + rx}},
        PathCommand{'A', {rx, ry, 0, 0, 1, x, y + h - ry}},
        PathCommand{'V', {y + ry}},
        PathCommand{'A', {rx, ry, 0, 0, 1, x + rx, y}},
        PathCommand{'Z', {}},
    };
    return p;
}

core::PathData ellipse_path(double cx, double cy, double rx, double ry) {
    using core::PathCommand;
    core::PathData p;
    p.commands = {
        PathCommand{'M', {cx + rx, cy}},
        PathCommand{'A', {rx, ry, 0, 0, 1, cx, cy + ry}},
        PathCommand{'A', {rx, ry, 0, 0, 1, cx - rx, cy}},
        PathCommand{'A', {rx, ry, 0, 0, 1, cx, cy - ry}},
        PathCommand{'A', {rx, ry, 0, 0, 1, cx + rx, cy}},
        PathCommand{'Z', {}},
    };
    return p;
}

Polylines apply_dashes(const Polylines& lines, const std::vector<double>& dashes, double offset) {
    std::vector<double> pattern = dashes;
    if (pattern.size() % 2 == 1) {
        pattern.insert(pattern.end(), dashes.begin(), dashes.end());
    }
    double total = 0;
    for (double d : pattern) {
        if (d < 0) return lines;
        total += d;
    }
    if (pattern.empty() || total <= 0) return lines;

    Polylines out;
    for (const auto& sp : lines) {
        std::vector<Point> pts = sp.points;
        if (sp.closed && !pts.empty()) pts.push_back(pts.front());
        if (pts.size() < 2) continue;
        // Phase into the pattern at the start of this subpath.
        double phase = std::fmod(offset, total);
        if (phase < 0) phase += total;
        std::size_t idx = 0;
        while (phase >= pattern[idx]) {
            phase -= pattern[idx];
            idx = (idx + 1) % pattern.size();
        }
        double remaining = pattern[idx] - phase;
        bool on = idx % 2 == 0;
        Subpath piece;
        if (on) piece.points.push_back(pts[0]);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            Point a = pts[i];
            const Point b = pts[i + 1];
            double seg = length(b - a);
            while (seg > remaining) {
                const double t = remaining / seg;
                const Point m{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
                if (on) {
                    piece.points.push_back(m);
                    out.push_back(std::move(piece));
                    piece = Subpath{};
                } else {
                    piece.points.push_back(m);
                }
                on = !on;
                seg -= remaining;
                a = m;
                idx = (idx + 1) % pattern.size();
                remaining = pattern[idx];
            }
            remaining -= seg;
            if (on) piece.points.push_back(b);
        }
        if (on && piece.points.size() >= 2) out.push_back(std::move(piece));
    }
    return out;
}

double signed_area(const Polygon& poly) {
    double a = 0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        a += cross(poly[i], poly[(i + 1) % n]);
    }
    return a / 2;
}

Polygon circle_polygon(Point center, double radius, double tolerance) {
    int n = static_cast<int>(std::ceil(2 * kPi / arc_step(radius, tolerance)));
    n = std::clamp((n + 3) / 4 * 4, 8, 4 * kMaxSegments);
    Polygon poly;
    poly.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2 * kPi * i / n;
        poly.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return poly;
}

namespace {

void push_oriented(std::vector<Polygon>& out, Polygon poly) {
    const double area = signed_area(poly);
    if (!(std::fabs(area) > 0)) return;
    if (area < 0) std::reverse(poly.begin(), poly.end());
    out.push_back(std::move(poly));
}

Point normal(Point d) { return {-d.y, d.x}; }

void add_cap(std::vector<Polygon>& out, Point p, Point dir, double h, LineCap cap, double tol) {
    switch (cap) {
    case LineCap::Butt:
        return;
    case LineCap::Round:
        push_oriented(out, circle_polygon(p, h, tol));
        return;
    case LineCap::Square: {
        const Point n = normal(dir) * h;
        const Point e = p + dir * h;
        push_oriented(out, {p + n, e + n, e - n, p - n});
        return;
    }
    }
}

void add_join(std::vector<Polygon>& out, Point v, Point d0, Point d1, double h,
              const StrokeStyle& st, double tol) {
    const double c = cross(d0, d1);
    const double cosang = dot(d0, d1);
    if (std::fabs(c) < 1e-12 && cosang > 0) return;
    if (st.join == LineJoin::Round) {
        push_oriented(out, circle_polygon(v, h, tol));
        return;
    }
    const double sigma = c > 0 ? -1.0 : 1.0;
    const Point n0 = normal(d0) * sigma, n1 = normal(d1) * sigma;
    const Point a = v + n0 * h, b = v + n1 * h;
    if (st.join == LineJoin::Miter && cosang > -1 + 1e-12) {
        const double ratio = std::sqrt(2.0 / (1.0 + cosang));
        if (ratio <= st.miter_limit) {
            Point bis = n0 + n1;
            const double bl = length(bis);
            if (bl > 0) {
                const Point m = v + bis * (h * ratio / bl);
                push_oriented(out, {v, a, m, b});
                return;
            }
        }
    }
    push_oriented(out, {v, a, b});
}

} // namespace

std::vector<Polygon> stroke_outline(const Polylines& input, const StrokeStyle& st, double tol) {
    std::vector<Polygon> out;
    const double h = st.width / 2;
    if (!(h > 0)) return out;
    const Polylines lines = st.dashes.empty() ? input : apply_dashes(input, st.dashes, st.dash_offset);
    for (const auto& sp : lines) {
        std::vector<Point> pts;
        for (const auto& p : sp.points) {
            if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
        }
        bool closed = sp.closed;
        if (closed && pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
        if (pts.size() == 1) {
            // Zero-length subpath: only caps are drawn.
            if (sp.points.size() >= 2 || sp.closed) {
                if (st.cap == LineCap::Round) push_oriented(out, circle_polygon(pts[0], h, tol));
                if (st.cap == LineCap::Square) {
                    const Point p = pts[0];
                    push_oriented(out, {{p.x - h, p.y - h}, {p.x + h, p.y - h}, {p.x + h, p.y + h}, {p.x - h, p.y + h}});
                }
            }
            continue;
        }
        if (pts.size() < 2) continue;
        if (pts.size() == 2) closed = false;
        const std::size_t n = pts.size();
        const std::size_t nseg = closed ? n : n - 1;
        std::vector<Point> dirs(nseg);
        for (std::size_t i = 0; i < nseg; ++i) {
            const Point a = pts[i], b = pts[(i + 1) % n];
            const Point d = b - a;
            const double l = length(d);
            dirs[i] = {d.x / l, d.y / l};
            const Point off = normal(dirs[i]) * h;
            push_oriented(out, {a + off, b + off, b - off, a - off});
        }
        if (closed) {
            for (std::size_t i = 0; i < n; ++i) {
                add_join(out, pts[i], dirs[(i + nseg - 1) % nseg], dirs[i], h, st, tol);
            }
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                add_join(out, pts[i], dirs[i - 1], dirs[i], h, st, tol);
            }
            add_cap(out, pts.front(), dirs.front() * -1.0, h, st.cap, tol);
            add_cap(out, pts.back(), dirs.back(), h, st.cap, tol);
        }
    }
    return out;
}

Box bounds(const Polylines& lines) {
    Box b;
    for (const auto& sp : lines) {
        for (const auto& p : sp.points) b.extend(p);
    }
    return b;
}

} // namespace svgkit::raster::detail
