#include "svgkit/raster/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>
#include <utility>

#include "geometry.hpp"
#include "scanline.hpp"
#include "svgkit/core/style.hpp"
#include "svgkit/core/text_util.hpp"
#include "svgkit/error.hpp"

namespace svgkit::raster {

namespace {

using core::trim;
using core::AttrValue;
using core::Color;
using core::Point;
using core::SvgDocument;
using core::SvgElement;
using core::TransformMatrix;
using detail::Box;
using detail::CoverageMask;
using detail::FillRule;
using detail::LineCap;
using detail::LineJoin;
using detail::Polygon;
using detail::Polylines;

constexpr int kMaxUseDepth = 16;

// ---------------------------------------------------------------------------
// Pixel buffers

struct Rgba {
    float r = 0, g = 0, b = 0, a = 0;
};

class Layer {
public:
    Layer(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h) {}

    int width() const { return w_; }
    int height() const { return h_; }
    Rgba& at(int x, int y) { return px_[static_cast<std::size_t>(y) * w_ + x]; }
    const Rgba& at(int x, int y) const { return px_[static_cast<std::size_t>(y) * w_ + x]; }
    std::vector<Rgba>& pixels() { return px_; }
    const std::vector<Rgba>& pixels() const { return px_; }

private:
    int w_, h_;
    std::vector<Rgba> px_;
};

void composite_layer(Layer& dst, const Layer& src, float opacity) {
    auto& d = dst.pixels();
    const auto& s = src.pixels();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Rgba& c = s[i];
        if (c.a <= 0) continue;
        const float k = 1.f - c.a * opacity;
        d[i].r = c.r * opacity + d[i].r * k;
        d[i].g = c.g * opacity + d[i].g * k;
        d[i].b = c.b * opacity + d[i].b * k;
        d[i].a = c.a * opacity + d[i].a * k;
    }
}

void multiply_layer(Layer& layer, const std::vector<float>& factor) {
    auto& px = layer.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        const float f = factor[i];
        px[i].r *= f;
        px[i].g *= f;
        px[i].b *= f;
        px[i].a *= f;
    }
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

void blur_layer(Layer& layer, double sigma_x, double sigma_y) {
    const int w = layer.width(), h = layer.height();
    auto pass = [&](double sigma, bool horizontal) {
        if (!(sigma > 0)) return;
        const auto k = gaussian_kernel(sigma);
        const int radius = static_cast<int>(k.size() / 2);
        std::vector<Rgba> out(layer.pixels().size());
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double r = 0, g = 0, b = 0, a = 0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sx = horizontal ? x + i : x;
                    const int sy = horizontal ? y : y + i;
                    if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
                    const Rgba& c = layer.at(sx, sy);
                    const double kv = k[static_cast<std::size_t>(i + radius)];
                    r += c.r * kv;
                    g += c.g * kv;
                    b += c.b * kv;
                    a += c.a * kv;
                }
                out[static_cast<std::size_t>(y) * w + x] = {static_cast<float>(r), static_cast<float>(g),
                                                            static_cast<float>(b), static_cast<float>(a)};
            }
        }
        layer.pixels() = std::move(out);
    };
    pass(sigma_x, true);
    pass(sigma_y, false);
}

// ---------------------------------------------------------------------------
// Paint

struct GradientStop {
    double offset;
    Rgba color;  // straight (not premultiplied)
};

struct Gradient {
    bool radial = false;
    // Gradient space geometry.
    double x1 = 0, y1 = 0, x2 = 1, y2 = 0;
    double cx = 0.5, cy = 0.5, r = 0.5, fx = 0.5, fy = 0.5;
    enum class Spread { Pad, Reflect, Repeat } spread = Spread::Pad;
    std::vector<GradientStop> stops;
    TransformMatrix device_to_gradient;
};

struct PaintSource {
    enum class Kind { Solid, Gradient } kind = Kind::Solid;
    Rgba solid;  // premultiplied
    std::shared_ptr<Gradient> gradient;
    float opacity = 1;

    Rgba at(int x, int y) const;
};

Rgba premultiply(Rgba c) { return {c.r * c.a, c.g * c.a, c.b * c.a, c.a}; }

Rgba gradient_color(const Gradient& g, double t) {
    switch (g.spread) {
    case Gradient::Spread::Pad:
        t = std::clamp(t, 0.0, 1.0);
        break;
    case Gradient::Spread::Repeat:
        t = t - std::floor(t);
        break;
    case Gradient::Spread::Reflect: {
        double m = std::fmod(std::fabs(t), 2.0);
        t = m > 1 ? 2 - m : m;
        break;
    }
    }
    const auto& s = g.stops;
    if (t <= s.front().offset) return premultiply(s.front().color);
    if (t >= s.back().offset) return premultiply(s.back().color);
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (t <= s[i].offset) {
            const double span = s[i].offset - s[i - 1].offset;
            const float u = span > 0 ? static_cast<float>((t - s[i - 1].offset) / span) : 1.f;
            const Rgba& a = s[i - 1].color;
            const Rgba& b = s[i].color;
            return premultiply({a.r + (b.r - a.r) * u, a.g + (b.g - a.g) * u, a.b + (b.b - a.b) * u,
                                a.a + (b.a - a.a) * u});
        }
    }
    return premultiply(s.back().color);
}

Rgba PaintSource::at(int x, int y) const {
    Rgba c;
    if (kind == Kind::Solid) {
        c = solid;
    } else {
        const Gradient& g = *gradient;
        const Point p = g.device_to_gradient.apply({x + 0.5, y + 0.5});
        double t = 0;
        if (!g.radial) {
            const double dx = g.x2 - g.x1, dy = g.y2 - g.y1;
            const double len2 = dx * dx + dy * dy;
            t = len2 > 0 ? ((p.x - g.x1) * dx + (p.y - g.y1) * dy) / len2 : 1.0;
        } else if (g.fx == g.cx && g.fy == g.cy) {
            t = g.r > 0 ? std::hypot(p.x - g.cx, p.y - g.cy) / g.r : 1.0;
        } else {
            // Ray from the focal point through p meets the circle at s * d.
            const double dx = p.x - g.fx, dy = p.y - g.fy;
            const double ox = g.fx - g.cx, oy = g.fy - g.cy;
            const double a = dx * dx + dy * dy;
            const double b = 2 * (dx * ox + dy * oy);
            const double cc = ox * ox + oy * oy - g.r * g.r;
            if (a <= 0) {
                t = 0;
            } else {
                const double disc = std::max(0.0, b * b - 4 * a * cc);
                const double s = (-b + std::sqrt(disc)) / (2 * a);
                t = s > 0 ? 1.0 / s : 1.0;
            }
        }
        c = gradient_color(g, t);
    }
    return {c.r * opacity, c.g * opacity, c.b * opacity, c.a * opacity};
}

void fill_mask(Layer& dst, const CoverageMask& mask, const PaintSource& paint) {
    if (mask.empty()) return;
    const float full = static_cast<float>(mask.full);
    for (int y = 0; y < mask.h; ++y) {
        const int py = mask.y0 + y;
        for (int x = 0; x < mask.w; ++x) {
            const std::uint16_t n = mask.counts[static_cast<std::size_t>(y) * mask.w + x];
            if (n == 0) continue;
            const int px = mask.x0 + x;
            const Rgba c = paint.at(px, py);
            const float f = n / full;
            Rgba& d = dst.at(px, py);
            const float k = 1.f - c.a * f;
            d.r = c.r * f + d.r * k;
            d.g = c.g * f + d.g * k;
            d.b = c.b * f + d.b * k;
            d.a = c.a * f + d.a * k;
        }
    }
}

// ---------------------------------------------------------------------------
// Style

struct PaintSpec {
    enum class Kind { None, Rgb, CurrentColor, Url } kind = Kind::None;
    core::Rgb rgb;
    double alpha = 1;
    std::string url;
    std::optional<core::Rgb> fallback;
    bool fallback_none = false;
};

PaintSpec paint_from_color(const Color& c) {
    PaintSpec p;
    switch (c.kind) {
    case Color::Kind::None:
        p.kind = PaintSpec::Kind::None;
        break;
    case Color::Kind::CurrentColor:
        p.kind = PaintSpec::Kind::CurrentColor;
        break;
    case Color::Kind::Rgb:
        p.kind = PaintSpec::Kind::Rgb;
        p.rgb = c.rgb;
        p.alpha = c.alpha;
        break;
    case Color::Kind::Url:
        p.kind = PaintSpec::Kind::Url;
        p.url = c.url;
        p.fallback = c.fallback;
        p.fallback_none = c.fallback_none;
        break;
    }
    return p;
}

PaintSpec black_paint() {
    PaintSpec p;
    p.kind = PaintSpec::Kind::Rgb;
    return p;
}

struct Viewport {
    double w = 100, h = 100;
    double diag() const { return std::sqrt((w * w + h * h) / 2); }
};

enum class Axis { X, Y, Diag };

double resolve_length_text(std::string_view text, Axis axis, const Viewport& vp, const char* what) {
    auto len = core::parse_length(text);
    if (!len) {
        throw RenderError(std::string("invalid length for ") + what + ": '" + std::string(text) + "'");
    }
    const double ref = axis == Axis::X ? vp.w : axis == Axis::Y ? vp.h : vp.diag();
    if (auto v = core::length_to_user(*len, ref)) return *v;
    throw RenderError("unsupported unit '" + len->unit + "' for " + what);
}

struct Style {
    // Inherited.
    PaintSpec fill = black_paint();
    PaintSpec stroke;
    double fill_opacity = 1, stroke_opacity = 1;
    double stroke_width = 1, miter_limit = 4, dash_offset = 0;
    std::vector<double> dashes;
    LineCap cap = LineCap::Butt;
    LineJoin join = LineJoin::Miter;
    FillRule fill_rule = FillRule::NonZero;
    FillRule clip_rule = FillRule::NonZero;
    bool visible = true;
    core::Rgb color{0, 0, 0};
    // Not inherited.
    double opacity = 1;
    bool display = true;
    std::string clip_path, mask, filter;
};

double parse_opacity(std::string_view text) {
    auto len = core::parse_length(text);
    if (!len) return 1.0;
    double v = len->value;
    if (len->unit == "%") v /= 100.0;
    return std::clamp(v, 0.0, 1.0);
}

std::string url_ref(std::string_view v) {
    v = trim(v);
    if (v.substr(0, 4) != "url(") return {};
    const auto close = v.find(')');
    if (close == std::string_view::npos) return {};
    std::string_view ref = trim(v.substr(4, close - 4));
    if (ref.size() >= 2 && (ref.front() == '"' || ref.front() == '\'')) ref = ref.substr(1, ref.size() - 2);
    if (ref.empty() || ref.front() != '#') return {};
    return std::string(ref.substr(1));
}

void apply_property(Style& s, const Style& parent, std::string_view name, std::string_view value,
                    const Viewport& vp) {
    value = trim(value);
    if (value == "inherit") {
        if (name == "opacity") s.opacity = parent.opacity;
        return;  // inherited properties already carry the parent value
    }
    if (name == "fill" || name == "stroke") {
        auto c = core::try_parse_color(value);
        if (!c) return;
        (name == "fill" ? s.fill : s.stroke) = paint_from_color(*c);
    } else if (name == "color") {
        if (auto c = core::try_parse_color(value); c && c->kind == Color::Kind::Rgb) s.color = c->rgb;
    } else if (name == "fill-opacity") {
        s.fill_opacity = parse_opacity(value);
    } else if (name == "stroke-opacity") {
        s.stroke_opacity = parse_opacity(value);
    } else if (name == "opacity") {
        s.opacity = parse_opacity(value);
    } else if (name == "stroke-width") {
        s.stroke_width = resolve_length_text(value, Axis::Diag, vp, "stroke-width");
        if (s.stroke_width < 0) throw RenderError("negative stroke-width");
    } else if (name == "stroke-miterlimit") {
        if (auto v = core::parse_number(value)) s.miter_limit = std::max(1.0, *v);
    } else if (name == "stroke-dashoffset") {
        s.dash_offset = resolve_length_text(value, Axis::Diag, vp, "stroke-dashoffset");
    } else if (name == "stroke-dasharray") {
        s.dashes.clear();
        if (value == "none") return;
        std::string text(value);
        std::replace(text.begin(), text.end(), ',', ' ');
        std::size_t pos = 0;
        while (pos < text.size()) {
            while (pos < text.size() && text[pos] == ' ') ++pos;
            auto end = text.find(' ', pos);
            if (end == std::string::npos) end = text.size();
            if (end > pos) {
                s.dashes.push_back(resolve_length_text(std::string_view(text).substr(pos, end - pos),
                                                       Axis::Diag, vp, "stroke-dasharray"));
            }
            pos = end;
        }
    } else if (name == "stroke-linecap") {
        if (value == "round") s.cap = LineCap::Round;
        else if (value == "square") s.cap = LineCap::Square;
        else if (value == "butt") s.cap = LineCap::Butt;
    } else if (name == "stroke-linejoin") {
        if (value == "round") s.join = LineJoin::Round;
        else if (value == "bevel") s.join = LineJoin::Bevel;
        else if (value == "miter" || value == "miter-clip" || value == "arcs") s.join = LineJoin::Miter;
    } else if (name == "fill-rule") {
        s.fill_rule = value == "evenodd" ? FillRule::EvenOdd : FillRule::NonZero;
    } else if (name == "clip-rule") {
        s.clip_rule = value == "evenodd" ? FillRule::EvenOdd : FillRule::NonZero;
    } else if (name == "visibility") {
        s.visible = value == "visible";
    } else if (name == "display") {
        s.display = value != "none";
    } else if (name == "clip-path") {
        s.clip_path = url_ref(value);
    } else if (name == "mask") {
        s.mask = url_ref(value);
    } else if (name == "filter") {
        s.filter = url_ref(value);
    }
}

core::StyleDeclarations style_declarations(const SvgElement& el) {
    const AttrValue* style = el.find("style");
    if (!style) return {};
    return core::parse_style(style->text(core::kFullPrecision));
}

constexpr std::string_view kStyleProperties[] = {
    "fill", "stroke", "color", "fill-opacity", "stroke-opacity", "opacity", "stroke-width",
    "stroke-miterlimit", "stroke-dashoffset", "stroke-dasharray", "stroke-linecap",
    "stroke-linejoin", "fill-rule", "clip-rule", "visibility", "display", "clip-path", "mask",
    "filter",
};

Style cascade(const Style& parent, const SvgElement& el, const Viewport& vp) {
    Style s = parent;
    s.opacity = 1;
    s.display = true;
    s.clip_path.clear();
    s.mask.clear();
    s.filter.clear();
    for (const auto& attr : el.attributes()) {
        for (auto prop : kStyleProperties) {
            if (attr.name == prop) {
                apply_property(s, parent, prop, attr.value.text(core::kFullPrecision), vp);
                break;
            }
        }
    }
    for (const auto& [name, value] : style_declarations(el)) {
        apply_property(s, parent, name, value, vp);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Attribute helpers

std::string href_of(const SvgElement& el) {
    const AttrValue* v = el.find("href");
    if (!v) v = el.find("xlink:href");
    if (!v) return {};
    std::string text = std::string(trim(v->text(core::kFullPrecision)));
    if (text.empty() || text.front() != '#') return {};
    return text.substr(1);
}

double length_attr(const SvgElement& el, std::string_view name, Axis axis, const Viewport& vp,
                   double fallback) {
    const AttrValue* v = el.find(name);
    if (!v) return fallback;
    if (auto n = v->single_number()) return *n;
    return resolve_length_text(v->text(core::kFullPrecision), axis, vp, std::string(name).c_str());
}

TransformMatrix transform_attr(const SvgElement& el, std::string_view name = "transform") {
    const AttrValue* v = el.find(name);
    if (!v) return {};
    if (const auto* list = v->as<core::TransformList>()) return list->to_matrix();
    if (trim(v->text()).empty()) return {};
    throw RenderError("invalid " + std::string(name) + " '" + v->text() + "'");
}

struct ViewBox {
    double x, y, w, h;
};

std::optional<ViewBox> viewbox_attr(const SvgElement& el) {
    const AttrValue* v = el.find("viewBox");
    if (!v) return std::nullopt;
    const auto* list = v->as<core::NumberList>();
    if (!list || list->values.size() != 4) throw RenderError("invalid viewBox");
    const auto& n = list->values;
    if (!(n[2] > 0) || !(n[3] > 0)) throw RenderError("viewBox has non-positive size");
    return ViewBox{n[0], n[1], n[2], n[3]};
}

// xMidYMid meet mapping of a viewBox onto a viewport rectangle.
TransformMatrix fit_viewbox(const ViewBox& vb, double x, double y, double w, double h) {
    const double s = std::min(w / vb.w, h / vb.h);
    const double tx = x + (w - s * vb.w) / 2 - s * vb.x;
    const double ty = y + (h - s * vb.h) / 2 - s * vb.y;
    return {s, 0, 0, s, tx, ty};
}

bool is_shape(std::string_view tag) {
    return tag == "path" || tag == "rect" || tag == "circle" || tag == "ellipse" || tag == "line" ||
           tag == "polyline" || tag == "polygon";
}

bool is_container(std::string_view tag) {
    return tag == "g" || tag == "a" || tag == "switch" || tag == "svg" || tag == "use";
}

// Geometry of a basic shape in its own user space; nullopt when the shape
// is disabled (zero size).
std::optional<core::PathData> shape_path(const SvgElement& el, const Viewport& vp) {
    const std::string& tag = el.tag();
    if (tag == "path") {
        const AttrValue* d = el.find("d");
        if (!d) return std::nullopt;
        if (const auto* p = d->as<core::PathData>()) {
            if (p->empty()) return std::nullopt;
            return *p;
        }
        if (trim(d->text()).empty()) return std::nullopt;
        throw RenderError("invalid path data: '" + d->text() + "'");
    }
    if (tag == "rect") {
        const double x = length_attr(el, "x", Axis::X, vp, 0);
        const double y = length_attr(el, "y", Axis::Y, vp, 0);
        const double w = length_attr(el, "width", Axis::X, vp, 0);
        const double h = length_attr(el, "height", Axis::Y, vp, 0);
        if (w < 0 || h < 0) throw RenderError("negative rect size");
        if (w == 0 || h == 0) return std::nullopt;
        const bool has_rx = el.has("rx"), has_ry = el.has("ry");
        double rx = has_rx ? length_attr(el, "rx", Axis::X, vp, 0) : 0;
        double ry = has_ry ? length_attr(el, "ry", Axis::Y, vp, 0) : 0;
        if (rx < 0 || ry < 0) throw RenderError("negative rect radius");
        if (has_rx && !has_ry) ry = rx;
        if (has_ry && !has_rx) rx = ry;
        return detail::rect_path(x, y, w, h, rx, ry);
    }
    if (tag == "circle") {
        const double r = length_attr(el, "r", Axis::Diag, vp, 0);
        if (r < 0) throw RenderError("negative circle radius");
        if (r == 0) return std::nullopt;
        return detail::ellipse_path(length_attr(el, "cx", Axis::X, vp, 0),
                                    length_attr(el, "cy", Axis::Y, vp, 0), r, r);
    }
    if (tag == "ellipse") {
        const double rx = length_attr(el, "rx", Axis::X, vp, 0);
        const double ry = length_attr(el, "ry", Axis::Y, vp, 0);
        if (rx < 0 || ry < 0) throw RenderError("negative ellipse radius");
        if (rx == 0 || ry == 0) return std::nullopt;
        return detail::ellipse_path(length_attr(el, "cx", Axis::X, vp, 0),
                                    length_attr(el, "cy", Axis::Y, vp, 0), rx, ry);
    }
    if (tag == "line") {
        core::PathData p;
        p.commands = {{'M', {length_attr(el, "x1", Axis::X, vp, 0), length_attr(el, "y1", Axis::Y, vp, 0)}},
                      {'L', {length_attr(el, "x2", Axis::X, vp, 0), length_attr(el, "y2", Axis::Y, vp, 0)}}};
        return p;
    }
    if (tag == "polyline" || tag == "polygon") {
        const AttrValue* v = el.find("points");
        if (!v) return std::nullopt;
        const auto* list = v->as<core::NumberList>();
        if (!list) {
            if (trim(v->text()).empty()) return std::nullopt;
            throw RenderError("invalid points list");
        }
        const auto& n = list->values;
        if (n.size() < 2) return std::nullopt;
        core::PathData p;
        p.commands.push_back({'M', {n[0], n[1]}});
        std::vector<double> rest(n.begin() + 2, n.begin() + static_cast<std::ptrdiff_t>(n.size() / 2 * 2));
        if (!rest.empty()) p.commands.push_back({'L', std::move(rest)});
        if (tag == "polygon") p.commands.push_back({'Z', {}});
        return p;
    }
    return std::nullopt;
}

std::vector<Polygon> to_device(const Polylines& lines, const TransformMatrix& m) {
    std::vector<Polygon> out;
    out.reserve(lines.size());
    for (const auto& sp : lines) {
        Polygon poly;
        poly.reserve(sp.points.size());
        for (const auto& p : sp.points) poly.push_back(m.apply(p));
        out.push_back(std::move(poly));
    }
    return out;
}

std::vector<Polygon> to_device(const std::vector<Polygon>& polys, const TransformMatrix& m) {
    std::vector<Polygon> out;
    out.reserve(polys.size());
    for (const auto& src : polys) {
        Polygon poly;
        poly.reserve(src.size());
        for (const auto& p : src) poly.push_back(m.apply(p));
        out.push_back(std::move(poly));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Renderer

struct Context {
    TransformMatrix ctm;
    Style style;
    Viewport viewport;
    int use_depth = 0;
};

class Renderer {
public:
    enum class Mode { Draw, Bounds };

    Renderer(const SvgDocument& doc, const RenderOptions& opt, Mode mode)
        : doc_(doc), opt_(opt), mode_(mode) {
        doc.root.visit([this](const SvgElement& el) {
            if (const AttrValue* id = el.find("id")) ids_.emplace(id->text(core::kFullPrecision), &el);
        });
    }

    RasterImage draw() {
        const int size = opt_.size;
        Layer canvas(size, size);
        Context ctx = root_context();
        render_children(doc_.root, ctx, canvas);
        if (opt_.clip_to_viewbox && root_box_) {
            clip_to_rect(canvas, *root_box_, ctx.ctm);
        }
        RasterImage img(size, size);
        const float bg[3] = {opt_.background.r / 255.f, opt_.background.g / 255.f, opt_.background.b / 255.f};
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const Rgba& c = canvas.at(x, y);
                const float inv = 1.f - std::clamp(c.a, 0.f, 1.f);
                const float v[3] = {c.r + bg[0] * inv, c.g + bg[1] * inv, c.b + bg[2] * inv};
                auto* p = img.pixel(x, y);
                for (int k = 0; k < 3; ++k) {
                    p[k] = static_cast<std::uint8_t>(std::lround(std::clamp(v[k], 0.f, 1.f) * 255.f));
                }
            }
        }
        return img;
    }

    Box bounds() {
        Context ctx = root_context();
        ctx.ctm = TransformMatrix{};
        Layer dummy(1, 1);
        render_children(doc_.root, ctx, dummy);
        return bounds_;
    }

private:
    Context root_context() {
        Context ctx;
        const SvgElement& root = doc_.root;
        const auto vb = viewbox_attr(root);
        Viewport fallback{static_cast<double>(opt_.size), static_cast<double>(opt_.size)};
        ViewBox box{0, 0, fallback.w, fallback.h};
        if (vb) {
            box = *vb;
        } else {
            const double w = length_attr(root, "width", Axis::X, fallback, fallback.w);
            const double h = length_attr(root, "height", Axis::Y, fallback, fallback.h);
            if (!(w > 0) || !(h > 0)) throw RenderError("root has non-positive size");
            box = ViewBox{0, 0, w, h};
        }
        root_box_ = box;
        ctx.viewport = {box.w, box.h};
        ctx.ctm = fit_viewbox(box, 0, 0, opt_.size, opt_.size);
        ctx.style = cascade(Style{}, root, ctx.viewport);
        ctx.ctm = ctx.ctm * transform_attr(root);
        return ctx;
    }

    void clip_to_rect(Layer& layer, const ViewBox& box, const TransformMatrix& m) {
        const Polygon rect = {m.apply({box.x, box.y}), m.apply({box.x + box.w, box.y}),
                              m.apply({box.x + box.w, box.y + box.h}), m.apply({box.x, box.y + box.h})};
        const CoverageMask mask = detail::rasterize_polygons({rect}, FillRule::NonZero, layer.width(),
                                                             layer.height(), opt_.samples_per_axis);
        std::vector<float> factor(layer.pixels().size());
        for (int y = 0; y < layer.height(); ++y) {
            for (int x = 0; x < layer.width(); ++x) factor[static_cast<std::size_t>(y) * layer.width() + x] = mask.at(x, y);
        }
        multiply_layer(layer, factor);
    }

    double local_tolerance(const TransformMatrix& ctm) const {
        const double s = ctm.mean_scale();
        return s > 0 ? opt_.tolerance / s : opt_.tolerance;
    }

    const SvgElement* lookup(const std::string& id) const {
        auto it = ids_.find(id);
        return it == ids_.end() ? nullptr : it->second;
    }

    void render_children(const SvgElement& parent, const Context& ctx, Layer& target) {
        if (parent.tag() == "switch") {
            for (const auto& child : parent.children()) {
                if (child.is_element() && !child.foreign()) {
                    render_element(child, ctx, target);
                    return;
                }
            }
            return;
        }
        for (const auto& child : parent.children()) render_element(child, ctx, target);
    }

    void render_element(const SvgElement& el, const Context& parent, Layer& target) {
        if (!el.is_element() || el.foreign()) return;
        const std::string& tag = el.tag();
        if (!is_shape(tag) && !is_container(tag)) return;

        Context ctx = parent;
        ctx.style = cascade(parent.style, el, parent.viewport);
        if (!ctx.style.display) return;
        ctx.ctm = parent.ctm * transform_attr(el);

        const SvgElement* use_target = nullptr;
        if (tag == "use") {
            const std::string ref = href_of(el);
            use_target = ref.empty() ? nullptr : lookup(ref);
            if (!use_target) return;
            if (ctx.use_depth >= kMaxUseDepth) throw RenderError("<use> reference cycle");
            ctx.use_depth += 1;
            ctx.ctm = ctx.ctm * TransformMatrix::translate(length_attr(el, "x", Axis::X, parent.viewport, 0),
                                                           length_attr(el, "y", Axis::Y, parent.viewport, 0));
        } else if (tag == "svg") {
            const double x = length_attr(el, "x", Axis::X, parent.viewport, 0);
            const double y = length_attr(el, "y", Axis::Y, parent.viewport, 0);
            const double w = length_attr(el, "width", Axis::X, parent.viewport, parent.viewport.w);
            const double h = length_attr(el, "height", Axis::Y, parent.viewport, parent.viewport.h);
            if (w <= 0 || h <= 0) return;
            if (auto vb = viewbox_attr(el)) {
                ctx.ctm = ctx.ctm * fit_viewbox(*vb, x, y, w, h);
                ctx.viewport = {vb->w, vb->h};
            } else {
                ctx.ctm = ctx.ctm * TransformMatrix::translate(x, y);
                ctx.viewport = {w, h};
            }
        }
        if (!ctx.ctm.invertible()) return;

        const bool needs_layer = mode_ == Mode::Draw &&
                                 (ctx.style.opacity < 1 || !ctx.style.clip_path.empty() ||
                                  !ctx.style.mask.empty() || !ctx.style.filter.empty());
        if (needs_layer && ctx.style.opacity <= 0) return;
        std::unique_ptr<Layer> layer;
        if (needs_layer) layer = std::make_unique<Layer>(target.width(), target.height());
        Layer& dst = layer ? *layer : target;

        if (use_target) {
            render_use_target(*use_target, el, ctx, dst);
        } else if (is_shape(tag)) {
            draw_shape(el, ctx, dst);
        } else {
            render_children(el, ctx, dst);
        }

        if (layer) {
            apply_effects(el, ctx, *layer);
            composite_layer(target, *layer, static_cast<float>(ctx.style.opacity));
        }
    }

    void render_use_target(const SvgElement& ref, const SvgElement& use, const Context& ctx, Layer& dst) {
        if (ref.tag() == "symbol") {
            Context inner = ctx;
            inner.style = cascade(ctx.style, ref, ctx.viewport);
            if (auto vb = viewbox_attr(ref)) {
                const double w = length_attr(use, "width", Axis::X, ctx.viewport, ctx.viewport.w);
                const double h = length_attr(use, "height", Axis::Y, ctx.viewport, ctx.viewport.h);
                inner.ctm = inner.ctm * fit_viewbox(*vb, 0, 0, w, h);
                inner.viewport = {vb->w, vb->h};
            }
            render_children(ref, inner, dst);
            return;
        }
        render_element(ref, ctx, dst);
    }

    // Opacity is applied by the caller when compositing the layer.
    void apply_effects(const SvgElement& el, const Context& ctx, Layer& layer) {
        if (!ctx.style.filter.empty()) {
            if (const SvgElement* filter = lookup(ctx.style.filter); filter && filter->tag() == "filter") {
                apply_filter(*filter, ctx, layer);
            }
        }
        if (!ctx.style.clip_path.empty()) {
            const SvgElement* clip = lookup(ctx.style.clip_path);
            if (clip && clip->tag() == "clipPath") {
                multiply_layer(layer, clip_coverage(*clip, el, ctx, layer.width(), layer.height()));
            }
        }
        if (!ctx.style.mask.empty()) {
            const SvgElement* mask = lookup(ctx.style.mask);
            if (mask && mask->tag() == "mask") {
                multiply_layer(layer, mask_coverage(*mask, el, ctx, layer.width(), layer.height()));
            }
        }
    }

    void apply_filter(const SvgElement& filter, const Context& ctx, Layer& layer) {
        for (const auto& prim : filter.children()) {
            if (!prim.is_element() || prim.tag() != "feGaussianBlur") continue;
            const AttrValue* dev = prim.find("stdDeviation");
            if (!dev) continue;
            const auto* list = dev->as<core::NumberList>();
            if (!list || list->values.empty() || list->values.size() > 2) continue;
            const double sx = list->values[0];
            const double sy = list->values.size() == 2 ? list->values[1] : sx;
            if (sx < 0 || sy < 0) continue;
            const double kx = std::hypot(ctx.ctm.a, ctx.ctm.b);
            const double ky = std::hypot(ctx.ctm.c, ctx.ctm.d);
            blur_layer(layer, sx * kx, sy * ky);
        }
    }

    // Fill-geometry bounding box of an element in its own user space.
    Box object_bbox(const SvgElement& el, const Viewport& vp, int depth = 0) {
        Box box;
        if (!el.is_element() || depth > kMaxUseDepth) return box;
        if (is_shape(el.tag())) {
            if (auto path = shape_path(el, vp)) box = detail::bounds(detail::flatten_path(*path, 0.01));
            return box;
        }
        if (el.tag() == "use") {
            const std::string ref = href_of(el);
            const SvgElement* target = ref.empty() ? nullptr : lookup(ref);
            if (!target) return box;
            const auto m = TransformMatrix::translate(length_attr(el, "x", Axis::X, vp, 0),
                                                      length_attr(el, "y", Axis::Y, vp, 0)) *
                           transform_attr(*target);
            const Box inner = object_bbox(*target, vp, depth + 1);
            extend_transformed(box, inner, m);
            return box;
        }
        for (const auto& child : el.children()) {
            if (!child.is_element() || child.foreign()) continue;
            if (!is_shape(child.tag()) && !is_container(child.tag())) continue;
            extend_transformed(box, object_bbox(child, vp, depth + 1), transform_attr(child));
        }
        return box;
    }

    static void extend_transformed(Box& box, const Box& inner, const TransformMatrix& m) {
        if (inner.empty()) return;
        box.extend(m.apply({inner.x0, inner.y0}));
        box.extend(m.apply({inner.x1, inner.y0}));
        box.extend(m.apply({inner.x1, inner.y1}));
        box.extend(m.apply({inner.x0, inner.y1}));
    }

    std::vector<float> clip_coverage(const SvgElement& clip, const SvgElement& el, const Context& ctx,
                                     int w, int h) {
        std::vector<float> cov(static_cast<std::size_t>(w) * h, 0.f);
        TransformMatrix base = ctx.ctm;
        const AttrValue* units = clip.find("clipPathUnits");
        if (units && units->text() == "objectBoundingBox") {
            const Box b = object_bbox(el, ctx.viewport);
            if (b.empty()) return cov;
            base = base * TransformMatrix{b.width(), 0, 0, b.height(), b.x0, b.y0};
        }
        base = base * transform_attr(clip);
        const Style clip_style = cascade(ctx.style, clip, ctx.viewport);
        for (const auto& child : clip.children()) {
            if (!child.is_element()) continue;
            const SvgElement* shape = &child;
            TransformMatrix m = base * transform_attr(child);
            if (child.tag() == "use") {
                const std::string ref = href_of(child);
                shape = ref.empty() ? nullptr : lookup(ref);
                if (!shape) continue;
                m = m * TransformMatrix::translate(length_attr(child, "x", Axis::X, ctx.viewport, 0),
                                                   length_attr(child, "y", Axis::Y, ctx.viewport, 0)) *
                    transform_attr(*shape);
            }
            if (!is_shape(shape->tag())) continue;
            const Style s = cascade(clip_style, *shape, ctx.viewport);
            if (!s.display || !s.visible || !m.invertible()) continue;
            auto path = shape_path(*shape, ctx.viewport);
            if (!path) continue;
            const auto lines = detail::flatten_path(*path, local_tolerance(m));
            const CoverageMask mask = detail::rasterize_polygons(to_device(lines, m), s.clip_rule, w, h,
                                                                 opt_.samples_per_axis);
            for (int y = 0; y < mask.h; ++y) {
                for (int x = 0; x < mask.w; ++x) {
                    const float a = mask.at(mask.x0 + x, mask.y0 + y);
                    float& u = cov[static_cast<std::size_t>(mask.y0 + y) * w + mask.x0 + x];
                    u = u + a - u * a;
                }
            }
        }
        return cov;
    }

    std::vector<float> mask_coverage(const SvgElement& mask, const SvgElement& el, const Context& ctx,
                                     int w, int h) {
        Layer content(w, h);
        Context inner = ctx;
        inner.style = Style{};
        const AttrValue* units = mask.find("maskContentUnits");
        if (units && units->text() == "objectBoundingBox") {
            const Box b = object_bbox(el, ctx.viewport);
            if (!b.empty()) inner.ctm = inner.ctm * TransformMatrix{b.width(), 0, 0, b.height(), b.x0, b.y0};
        }
        render_children(mask, inner, content);
        std::vector<float> cov(static_cast<std::size_t>(w) * h);
        const auto& px = content.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) {
            cov[i] = std::clamp(0.2125f * px[i].r + 0.7154f * px[i].g + 0.0721f * px[i].b, 0.f, 1.f);
        }
        return cov;
    }

    std::optional<PaintSource> resolve_paint(const PaintSpec& spec, double opacity, const Style& style,
                                             const Box& bbox, const Context& ctx) {
        PaintSource src;
        src.opacity = static_cast<float>(opacity);
        auto solid = [&](core::Rgb rgb, double alpha) {
            src.kind = PaintSource::Kind::Solid;
            src.solid = premultiply({rgb.r / 255.f, rgb.g / 255.f, rgb.b / 255.f, static_cast<float>(alpha)});
            return src;
        };
        switch (spec.kind) {
        case PaintSpec::Kind::None:
            return std::nullopt;
        case PaintSpec::Kind::Rgb:
            return solid(spec.rgb, spec.alpha);
        case PaintSpec::Kind::CurrentColor:
            return solid(style.color, 1.0);
        case PaintSpec::Kind::Url:
            break;
        }
        const SvgElement* server = lookup(spec.url);
        if (server && (server->tag() == "linearGradient" || server->tag() == "radialGradient")) {
            auto g = build_gradient(*server, bbox, ctx);
            if (!g) return std::nullopt;
            if (g->stops.size() == 1) {
                const Rgba c = g->stops.front().color;
                src.kind = PaintSource::Kind::Solid;
                src.solid = premultiply(c);
                return src;
            }
            src.kind = PaintSource::Kind::Gradient;
            src.gradient = std::make_shared<Gradient>(std::move(*g));
            return src;
        }
        if (spec.fallback) return solid(*spec.fallback, 1.0);
        return std::nullopt;
    }

    // Gradient attributes may be inherited through href chains.
    const AttrValue* gradient_attr(const SvgElement& g, std::string_view name) {
        const SvgElement* cur = &g;
        for (int i = 0; cur && i < kMaxUseDepth; ++i) {
            if (const AttrValue* v = cur->find(name)) return v;
            const std::string ref = href_of(*cur);
            cur = ref.empty() ? nullptr : lookup(ref);
        }
        return nullptr;
    }

    const SvgElement* gradient_stops_owner(const SvgElement& g) {
        const SvgElement* cur = &g;
        for (int i = 0; cur && i < kMaxUseDepth; ++i) {
            for (const auto& c : cur->children()) {
                if (c.is_element() && c.tag() == "stop") return cur;
            }
            const std::string ref = href_of(*cur);
            cur = ref.empty() ? nullptr : lookup(ref);
        }
        return nullptr;
    }

    std::optional<Gradient> build_gradient(const SvgElement& el, const Box& bbox, const Context& ctx) {
        Gradient g;
        g.radial = el.tag() == "radialGradient";
        const AttrValue* units = gradient_attr(el, "gradientUnits");
        const bool user_space = units && units->text() == "userSpaceOnUse";
        TransformMatrix m = ctx.ctm;
        Viewport vp = ctx.viewport;
        if (!user_space) {
            if (bbox.empty() || bbox.width() <= 0 || bbox.height() <= 0) return std::nullopt;
            m = m * TransformMatrix{bbox.width(), 0, 0, bbox.height(), bbox.x0, bbox.y0};
            vp = {1, 1};
        }
        if (const AttrValue* t = gradient_attr(el, "gradientTransform")) {
            if (const auto* list = t->as<core::TransformList>()) m = m * list->to_matrix();
        }
        if (!m.invertible()) return std::nullopt;
        g.device_to_gradient = m.inverse();

        auto num = [&](std::string_view name, Axis axis, double fallback_user, double fallback_bbox) {
            const AttrValue* v = gradient_attr(el, name);
            const double fallback = user_space ? fallback_user : fallback_bbox;
            if (!v) return fallback;
            if (auto n = v->single_number()) return *n;
            return resolve_length_text(v->text(core::kFullPrecision), axis, vp, "gradient coordinate");
        };
        if (g.radial) {
            g.cx = num("cx", Axis::X, vp.w / 2, 0.5);
            g.cy = num("cy", Axis::Y, vp.h / 2, 0.5);
            g.r = num("r", Axis::Diag, vp.diag() / 2, 0.5);
            g.fx = gradient_attr(el, "fx") ? num("fx", Axis::X, 0, 0) : g.cx;
            g.fy = gradient_attr(el, "fy") ? num("fy", Axis::Y, 0, 0) : g.cy;
            if (g.r <= 0) return std::nullopt;
            const double fd = std::hypot(g.fx - g.cx, g.fy - g.cy);
            if (fd > g.r * 0.99) {
                const double k = g.r * 0.99 / fd;
                g.fx = g.cx + (g.fx - g.cx) * k;
                g.fy = g.cy + (g.fy - g.cy) * k;
            }
        } else {
            g.x1 = num("x1", Axis::X, 0, 0);
            g.y1 = num("y1", Axis::Y, 0, 0);
            g.x2 = num("x2", Axis::X, vp.w, 1);
            g.y2 = num("y2", Axis::Y, 0, 0);
        }
        if (const AttrValue* sp = gradient_attr(el, "spreadMethod")) {
            const std::string v = sp->text();
            if (v == "reflect") g.spread = Gradient::Spread::Reflect;
            else if (v == "repeat") g.spread = Gradient::Spread::Repeat;
        }
        const SvgElement* owner = gradient_stops_owner(el);
        if (!owner) return std::nullopt;
        double last = 0;
        for (const auto& stop : owner->children()) {
            if (!stop.is_element() || stop.tag() != "stop") continue;
            double offset = 0;
            if (const AttrValue* o = stop.find("offset")) {
                offset = parse_opacity(o->text(core::kFullPrecision));
            }
            offset = std::max(offset, last);
            last = offset;
            core::Rgb rgb{0, 0, 0};
            double alpha = 1;
            auto apply = [&](std::string_view name, std::string_view value) {
                if (name == "stop-color") {
                    if (auto c = core::try_parse_color(value)) {
                        if (c->kind == Color::Kind::Rgb) {
                            rgb = c->rgb;
                            alpha *= c->alpha;
                        } else if (c->kind == Color::Kind::CurrentColor) {
                            rgb = ctx.style.color;
                        }
                    }
                } else if (name == "stop-opacity") {
                    alpha *= parse_opacity(value);
                }
            };
            for (const auto& a : stop.attributes()) apply(a.name, a.value.text(core::kFullPrecision));
            for (const auto& [name, value] : style_declarations(stop)) apply(name, value);
            g.stops.push_back({offset, {rgb.r / 255.f, rgb.g / 255.f, rgb.b / 255.f, static_cast<float>(alpha)}});
        }
        if (g.stops.empty()) return std::nullopt;
        return g;
    }

    void draw_shape(const SvgElement& el, const Context& ctx, Layer& dst) {
        auto path = shape_path(el, ctx.viewport);
        if (!path) return;
        const Style& s = ctx.style;
        const double tol = local_tolerance(ctx.ctm);
        const Polylines lines = detail::flatten_path(*path, tol);
        const Box bbox = detail::bounds(lines);
        const bool is_line = el.tag() == "line" || el.tag() == "polyline";

        std::vector<Polygon> stroke_polys;
        const bool stroked = s.stroke.kind != PaintSpec::Kind::None && s.stroke_width > 0;
        if (stroked) {
            detail::StrokeStyle st;
            st.width = s.stroke_width;
            st.cap = s.cap;
            st.join = s.join;
            st.miter_limit = s.miter_limit;
            st.dashes = s.dashes;
            st.dash_offset = s.dash_offset;
            stroke_polys = detail::stroke_outline(lines, st, tol);
        }

        if (mode_ == Mode::Bounds) {
            if (!s.visible) return;
            if (!is_line && s.fill.kind != PaintSpec::Kind::None) {
                for (const auto& poly : to_device(lines, ctx.ctm)) {
                    for (const auto& p : poly) bounds_.extend(p);
                }
            }
            for (const auto& poly : to_device(stroke_polys, ctx.ctm)) {
                for (const auto& p : poly) bounds_.extend(p);
            }
            return;
        }
        if (!s.visible) return;

        if (!is_line) {
            if (auto paint = resolve_paint(s.fill, s.fill_opacity, s, bbox, ctx)) {
                const CoverageMask mask = detail::rasterize_polygons(
                    to_device(lines, ctx.ctm), s.fill_rule, dst.width(), dst.height(), opt_.samples_per_axis);
                fill_mask(dst, mask, *paint);
            }
        }
        if (stroked && !stroke_polys.empty()) {
            if (auto paint = resolve_paint(s.stroke, s.stroke_opacity, s, bbox, ctx)) {
                const CoverageMask mask =
                    detail::rasterize_polygons(to_device(stroke_polys, ctx.ctm), FillRule::NonZero,
                                               dst.width(), dst.height(), opt_.samples_per_axis);
                fill_mask(dst, mask, *paint);
            }
        }
    }

    const SvgDocument& doc_;
    RenderOptions opt_;
    Mode mode_;
    std::unordered_map<std::string, const SvgElement*> ids_;
    std::optional<ViewBox> root_box_;
    Box bounds_;
};

void check_options(const RenderOptions& options) {
    if (options.size < kMinRenderSize) {
        throw TooSmall("render size " + std::to_string(options.size) + " is below the minimum of " +
                       std::to_string(kMinRenderSize));
    }
}

} // namespace

RasterImage render(const SvgDocument& doc, const RenderOptions& options) {
    check_options(options);
    if (options.samples_per_axis < 1 || options.samples_per_axis > 16) {
        throw RenderError("samples_per_axis must be in [1, 16]");
    }
    Renderer renderer(doc, options, Renderer::Mode::Draw);
    return renderer.draw();
}

RenderOutcome RenderOutcome::penalized(int size, std::string reason) {
    RenderOutcome out;
    out.status = Status::Penalized;
    out.image = black_image(size, size);
    out.error = std::move(reason);
    return out;
}

RenderOutcome rasterize(const SvgDocument& doc, const RenderOptions& options) {
    check_options(options);
    try {
        RenderOutcome out;
        out.image = render(doc, options);
        return out;
    } catch (const Error& e) {
        return RenderOutcome::penalized(options.size, e.what());
    } catch (const std::bad_alloc&) {
        return RenderOutcome::penalized(options.size, "out of memory");
    }
}

RenderOutcome rasterize(const SvgDocument& doc, int size) {
    RenderOptions opt;
    opt.size = size;
    return rasterize(doc, opt);
}

RenderOutcome rasterize_text(std::string_view svg_text, const RenderOptions& options) {
    check_options(options);
    core::SvgDocument doc;
    try {
        doc = core::parse_svg(svg_text);
    } catch (const Error& e) {
        return RenderOutcome::penalized(options.size, e.what());
    }
    return rasterize(doc, options);
}

std::optional<Bounds> content_bounds(const SvgDocument& doc) {
    RenderOptions opt;
    opt.size = kDefaultEvalSize;
    Renderer renderer(doc, opt, Renderer::Mode::Bounds);
    const Box b = renderer.bounds();
    if (b.empty()) return std::nullopt;
    return Bounds{b.x0, b.y0, b.x1, b.y1};
}

} // namespace svgkit::raster

namespace svgkit::core {

bool validate_renderable(const SvgDocument& doc) {
    raster::RenderOptions opt;
    opt.size = raster::kMinRenderSize;
    opt.samples_per_axis = 1;
    return raster::rasterize(doc, opt).ok();
}

bool validate_renderable(std::string_view text) {
    try {
        return validate_renderable(parse_svg(text));
    } catch (const Error&) {
        return false;
    }
}

} // namespace svgkit::core
