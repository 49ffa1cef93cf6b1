#include "svgkit/raster/animation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "geometry.hpp"
#include "svgkit/core/color.hpp"
#include "svgkit/core/style.hpp"
#include "svgkit/core/text_util.hpp"
#include "svgkit/error.hpp"

namespace svgkit::raster {

namespace {

using core::split;
using core::trim;
using core::SvgDocument;
using core::SvgElement;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeEps = 1e-9;
constexpr int kMaxSyncDepth = 16;

bool is_animation_tag(std::string_view tag) {
    return tag == "animate" || tag == "animateTransform" || tag == "animateMotion" || tag == "set" ||
           tag == "animateColor";
}

std::string attr(const SvgElement& el, std::string_view name) {
    auto v = el.attr_text(name, core::kFullPrecision);
    return v ? std::string(trim(*v)) : std::string();
}

std::string href_id(const SvgElement& el) {
    std::string h = attr(el, "href");
    if (h.empty()) h = attr(el, "xlink:href");
    if (h.size() > 1 && h.front() == '#') return h.substr(1);
    return {};
}

// ---------------------------------------------------------------------------
// Timing

struct Timing {
    std::optional<double> begin;  // nullopt: never starts
    double dur = kInf;            // simple duration
    double active = kInf;         // active duration
    bool freeze = false;
};

class Timeline {
public:
    explicit Timeline(const std::unordered_map<std::string, const SvgElement*>& ids) : ids_(ids) {}

    Timing timing(const SvgElement& el, int depth = 0) const {
        Timing t;
        t.begin = resolve_begin(el, depth);
        const std::string dur = attr(el, "dur");
        if (auto d = parse_clock_value(dur); d && *d > 0) t.dur = *d;
        const std::string rc = attr(el, "repeatCount");
        const std::string rd = attr(el, "repeatDur");
        std::optional<double> repeat_count;
        if (rc == "indefinite") repeat_count = kInf;
        else if (auto n = core::parse_number(rc); n && *n > 0) repeat_count = *n;
        std::optional<double> repeat_dur;
        if (rd == "indefinite") repeat_dur = kInf;
        else if (auto d = parse_clock_value(rd); d && *d > 0) repeat_dur = *d;

        if (repeat_count) {
            t.active = std::isinf(*repeat_count) ? kInf : t.dur * *repeat_count;
            if (repeat_dur) t.active = std::min(t.active, *repeat_dur);
        } else if (repeat_dur) {
            t.active = *repeat_dur;
        } else {
            t.active = t.dur;
        }
        if (auto end = parse_clock_value(attr(el, "end")); end && t.begin) {
            t.active = std::min(t.active, std::max(0.0, *end - *t.begin));
        }
        t.freeze = attr(el, "fill") == "freeze";
        return t;
    }

private:
    std::optional<double> resolve_begin(const SvgElement& el, int depth) const {
        const std::string text = attr(el, "begin");
        if (text.empty()) return 0.0;
        std::optional<double> best;
        for (const auto& item : split(text, ';')) {
            auto v = resolve_begin_item(item, depth);
            if (v && (!best || *v < *best)) best = v;
        }
        return best;
    }

    std::optional<double> resolve_begin_item(std::string_view item, int depth) const {
        if (auto v = parse_clock_value(item)) return v;
        // Syncbase: id.begin / id.end with an optional +/- offset.
        const auto dot = item.find('.');
        if (dot == std::string_view::npos || depth >= kMaxSyncDepth) return std::nullopt;
        const std::string id(trim(item.substr(0, dot)));
        std::string_view rest = item.substr(dot + 1);
        double offset = 0;
        const auto sign = rest.find_first_of("+-");
        std::string_view event = trim(rest.substr(0, sign));
        if (sign != std::string_view::npos) {
            auto off = parse_clock_value(trim(rest.substr(sign + 1)));
            if (!off) return std::nullopt;
            offset = rest[sign] == '-' ? -*off : *off;
        }
        auto it = ids_.find(id);
        if (it == ids_.end() || !is_animation_tag(it->second->tag())) return std::nullopt;
        const Timing ref = timing(*it->second, depth + 1);
        if (!ref.begin) return std::nullopt;
        if (event == "begin") return *ref.begin + offset;
        if (event == "end" && std::isfinite(ref.active)) return *ref.begin + ref.active + offset;
        return std::nullopt;
    }

    const std::unordered_map<std::string, const SvgElement*>& ids_;
};

// Simple-duration progress in [0, 1] at time t, or nullopt when the
// animation has no effect at t.
std::optional<double> progress(const Timing& tm, double t) {
    if (!tm.begin || t < *tm.begin - kTimeEps) return std::nullopt;
    const double elapsed = std::max(0.0, t - *tm.begin);
    auto end_state = [&]() {
        if (!std::isfinite(tm.dur)) return 0.0;
        const double iterations = tm.active / tm.dur;
        const double frac = iterations - std::floor(iterations + kTimeEps);
        return frac > kTimeEps ? frac : 1.0;
    };
    if (std::isfinite(tm.active) && elapsed >= tm.active - kTimeEps) {
        if (elapsed <= tm.active + kTimeEps || tm.freeze) return end_state();
        return std::nullopt;
    }
    if (!std::isfinite(tm.dur)) return 0.0;
    return std::fmod(elapsed, tm.dur) / tm.dur;
}

// ---------------------------------------------------------------------------
// Value interpolation

// Segment index and local fraction for n values (linear mode).
std::pair<std::size_t, double> locate(double p, std::size_t n, const std::vector<double>& key_times) {
    if (n < 2) return {0, 0.0};
    if (key_times.size() == n) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (p <= key_times[i + 1] || i + 2 == n) {
                const double span = key_times[i + 1] - key_times[i];
                const double u = span > 0 ? (p - key_times[i]) / span : 1.0;
                return {i, std::clamp(u, 0.0, 1.0)};
            }
        }
    }
    const double scaled = p * static_cast<double>(n - 1);
    const std::size_t seg = std::min(static_cast<std::size_t>(std::floor(scaled)), n - 2);
    return {seg, std::clamp(scaled - static_cast<double>(seg), 0.0, 1.0)};
}

std::size_t discrete_index(double p, std::size_t n, const std::vector<double>& key_times) {
    if (key_times.size() == n) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (key_times[i] <= p + kTimeEps) idx = i;
        }
        return idx;
    }
    return std::min(static_cast<std::size_t>(std::floor(p * static_cast<double>(n))), n - 1);
}

std::optional<std::vector<double>> numeric_value(std::string_view text) {
    if (auto list = core::parse_number_list(text)) {
        if (!list->empty()) return list;
    }
    if (auto len = core::parse_length(text); len && (len->unit.empty() || len->unit == "px")) {
        return std::vector<double>{len->value};
    }
    return std::nullopt;
}

bool same_shape(const core::PathData& a, const core::PathData& b) {
    if (a.commands.size() != b.commands.size()) return false;
    for (std::size_t i = 0; i < a.commands.size(); ++i) {
        if (a.commands[i].op != b.commands[i].op || a.commands[i].args.size() != b.commands[i].args.size()) {
            return false;
        }
    }
    return true;
}

std::string interpolate_text(std::string_view attribute, const std::string& a, const std::string& b, double u) {
    if (auto na = numeric_value(a)) {
        if (auto nb = numeric_value(b); nb && nb->size() == na->size()) {
            std::vector<double> out(na->size());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*na)[i] + ((*nb)[i] - (*na)[i]) * u;
            return core::format_number_list(out, core::kFullPrecision);
        }
    }
    if (attribute == "d") {
        try {
            auto pa = core::parse_path_data(a);
            auto pb = core::parse_path_data(b);
            if (same_shape(pa, pb)) {
                for (std::size_t i = 0; i < pa.commands.size(); ++i) {
                    auto& args = pa.commands[i].args;
                    const auto& to = pb.commands[i].args;
                    for (std::size_t k = 0; k < args.size(); ++k) args[k] += (to[k] - args[k]) * u;
                }
                return core::format_path_data(pa, core::kFullPrecision);
            }
        } catch (const Error&) {
        }
    }
    auto ca = core::try_parse_color(a);
    auto cb = core::try_parse_color(b);
    if (ca && cb && ca->kind == core::Color::Kind::Rgb && cb->kind == core::Color::Kind::Rgb) {
        auto mix = [u](std::uint8_t x, std::uint8_t y) {
            return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * u));
        };
        return core::to_hex({mix(ca->rgb.r, cb->rgb.r), mix(ca->rgb.g, cb->rgb.g), mix(ca->rgb.b, cb->rgb.b)});
    }
    return u < 0.5 ? a : b;
}

std::string add_numeric(const std::string& base, const std::string& delta) {
    auto nb = numeric_value(base);
    auto nd = numeric_value(delta);
    if (!nb || !nd || nb->size() != nd->size()) return delta;
    for (std::size_t i = 0; i < nb->size(); ++i) (*nb)[i] += (*nd)[i];
    return core::format_number_list(*nb, core::kFullPrecision);
}

std::vector<double> key_times_of(const SvgElement& el) {
    std::vector<double> out;
    for (const auto& item : split(attr(el, "keyTimes"), ';')) {
        auto v = core::parse_number(item);
        if (!v) return {};
        out.push_back(*v);
    }
    return out;
}

std::string default_base(std::string_view attribute) {
    if (attribute == "opacity" || attribute == "fill-opacity" || attribute == "stroke-opacity" ||
        attribute == "stop-opacity") {
        return "1";
    }
    return "0";
}

// Keyframe list from values / from / to / by.
std::vector<std::string> keyframes(const SvgElement& anim, const std::string& base) {
    if (anim.has("values")) return split(attr(anim, "values"), ';');
    const std::string from = anim.has("from") ? attr(anim, "from") : base;
    if (anim.has("to")) return {from, attr(anim, "to")};
    if (anim.has("by")) return {from, add_numeric(from, attr(anim, "by"))};
    return {};
}

void strip_style_property(SvgElement& el, std::string_view name) {
    core::AttrValue* style = el.find("style");
    if (!style) return;
    auto decls = core::parse_style(style->text(core::kFullPrecision));
    std::erase_if(decls, [&](const auto& d) { return d.first == name; });
    if (decls.empty()) el.erase("style");
    else el.set("style", core::AttrValue::opaque(core::format_style(decls)));
}

void set_value(SvgElement& target, const std::string& name, const std::string& value) {
    strip_style_property(target, name);
    target.set_raw(name, value);
}

// ---------------------------------------------------------------------------
// Per-element application

struct Job {
    const SvgElement* anim;
    SvgElement* target;
};

void apply_animate(const Job& job, double p) {
    const SvgElement& anim = *job.anim;
    const std::string name = attr(anim, "attributeName");
    if (name.empty()) return;
    SvgElement& target = *job.target;
    const std::string base = target.attr_text(name, core::kFullPrecision).value_or(default_base(name));

    if (anim.tag() == "set") {
        if (anim.has("to")) set_value(target, name, attr(anim, "to"));
        return;
    }
    const auto frames = keyframes(anim, base);
    if (frames.empty()) return;
    const auto key_times = key_times_of(anim);
    std::string value;
    if (frames.size() == 1 || attr(anim, "calcMode") == "discrete") {
        value = frames[discrete_index(p, frames.size(), key_times)];
    } else {
        auto [seg, u] = locate(p, frames.size(), key_times);
        value = interpolate_text(name, frames[seg], frames[seg + 1], u);
    }
    if (attr(anim, "additive") == "sum") value = add_numeric(base, value);
    set_value(target, name, value);
}

std::vector<double> transform_args(const std::string& type, std::vector<double> v) {
    if (type == "translate" && v.size() == 1) v.push_back(0);
    else if (type == "scale" && v.size() == 1) v.push_back(v[0]);
    else if (type == "rotate" && v.size() == 1) v.insert(v.end(), {0, 0});
    return v;
}

void apply_animate_transform(const Job& job, double p) {
    const SvgElement& anim = *job.anim;
    std::string type = attr(anim, "type");
    if (type.empty()) type = "translate";
    using Kind = core::TransformItem::Kind;
    Kind kind;
    std::size_t arity;
    if (type == "translate") kind = Kind::Translate, arity = 2;
    else if (type == "scale") kind = Kind::Scale, arity = 2;
    else if (type == "rotate") kind = Kind::Rotate, arity = 3;
    else if (type == "skewX") kind = Kind::SkewX, arity = 1;
    else if (type == "skewY") kind = Kind::SkewY, arity = 1;
    else return;

    const std::string neutral = type == "scale" ? "1" : "0";
    const auto frames = keyframes(anim, neutral);
    if (frames.empty()) return;
    std::vector<std::vector<double>> values;
    for (const auto& f : frames) {
        auto v = core::parse_number_list(f);
        if (!v || v->empty()) return;
        v = transform_args(type, *v);
        if (v->size() != arity) return;
        values.push_back(*v);
    }
    const auto key_times = key_times_of(anim);
    std::vector<double> args;
    if (values.size() == 1 || attr(anim, "calcMode") == "discrete") {
        args = values[discrete_index(p, values.size(), key_times)];
    } else {
        auto [seg, u] = locate(p, values.size(), key_times);
        args.resize(arity);
        for (std::size_t i = 0; i < arity; ++i) args[i] = values[seg][i] + (values[seg + 1][i] - values[seg][i]) * u;
    }
    if (kind == Kind::Rotate && args[1] == 0 && args[2] == 0) args.resize(1);

    std::string name = attr(anim, "attributeName");
    if (name.empty()) name = "transform";
    SvgElement& target = *job.target;
    core::TransformList list;
    if (attr(anim, "additive") == "sum") {
        if (const core::AttrValue* existing = target.find(name)) {
            const auto* parsed = existing->as<core::TransformList>();
            if (!parsed) return;  // leave the unparseable value for the renderer to reject
            list = *parsed;
        }
    }
    list.items.push_back({kind, args});
    target.set(name, core::AttrValue::transform(list));
}

struct MotionPath {
    std::vector<core::Point> points;
    std::vector<double> cumulative;
};

std::optional<MotionPath> motion_path(const SvgElement& anim,
                                      const std::unordered_map<std::string, SvgElement*>& ids) {
    core::PathData path;
    bool found = false;
    for (const auto& child : anim.children()) {
        if (child.is_element() && child.tag() == "mpath") {
            auto it = ids.find(href_id(child));
            if (it != ids.end()) {
                if (const auto* v = it->second->find("d"); v && v->as<core::PathData>()) {
                    path = *v->as<core::PathData>();
                    found = true;
                }
            }
        }
    }
    if (!found) {
        if (const auto* v = anim.find("path")) {
            if (!v->as<core::PathData>()) throw RenderError("invalid animateMotion path");
            path = *v->as<core::PathData>();
            found = true;
        }
    }
    if (!found) {
        const auto frames = keyframes(anim, "0,0");
        if (frames.empty()) return std::nullopt;
        for (const auto& f : frames) {
            auto v = core::parse_number_list(f);
            if (!v || v->size() != 2) return std::nullopt;
            path.commands.push_back({path.commands.empty() ? 'M' : 'L', *v});
        }
    }
    MotionPath mp;
    for (const auto& sub : detail::flatten_path(path, 0.01)) {
        for (const auto& pt : sub.points) {
            if (!mp.points.empty() && mp.points.back() == pt) continue;
            mp.points.push_back(pt);
        }
    }
    if (mp.points.empty()) return std::nullopt;
    mp.cumulative.push_back(0);
    for (std::size_t i = 1; i < mp.points.size(); ++i) {
        const auto& a = mp.points[i - 1];
        const auto& b = mp.points[i];
        mp.cumulative.push_back(mp.cumulative.back() + std::hypot(b.x - a.x, b.y - a.y));
    }
    return mp;
}

void apply_animate_motion(const Job& job, double p, const std::unordered_map<std::string, SvgElement*>& ids) {
    auto mp = motion_path(*job.anim, ids);
    if (!mp) return;
    const double total = mp->cumulative.back();
    core::Point pos = mp->points.front();
    double angle = 0;
    if (mp->points.size() > 1) {
        const double dist = p * total;
        std::size_t seg = 1;
        while (seg + 1 < mp->points.size() && mp->cumulative[seg] < dist) ++seg;
        const auto& a = mp->points[seg - 1];
        const auto& b = mp->points[seg];
        const double len = mp->cumulative[seg] - mp->cumulative[seg - 1];
        const double u = len > 0 ? std::clamp((dist - mp->cumulative[seg - 1]) / len, 0.0, 1.0) : 0.0;
        pos = {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u};
        angle = std::atan2(b.y - a.y, b.x - a.x) * 180.0 / M_PI;
    }
    const std::string rotate = attr(*job.anim, "rotate");
    double rot = 0;
    if (rotate == "auto") rot = angle;
    else if (rotate == "auto-reverse") rot = angle + 180;
    else if (auto v = core::parse_number(rotate)) rot = *v;

    SvgElement& target = *job.target;
    core::TransformList list;
    list.items.push_back({core::TransformItem::Kind::Translate, {pos.x, pos.y}});
    if (rot != 0) list.items.push_back({core::TransformItem::Kind::Rotate, {rot}});
    if (const core::AttrValue* existing = target.find("transform")) {
        const auto* parsed = existing->as<core::TransformList>();
        if (!parsed) return;
        list.items.insert(list.items.end(), parsed->items.begin(), parsed->items.end());
    }
    target.set("transform", core::AttrValue::transform(list));
}

void collect(SvgElement& el, SvgElement* parent, std::vector<std::pair<const SvgElement*, SvgElement*>>& anims,
             std::unordered_map<std::string, SvgElement*>& ids) {
    if (!el.is_element()) return;
    if (auto id = el.attr_text("id", core::kFullPrecision)) ids.emplace(*id, &el);
    if (is_animation_tag(el.tag())) {
        anims.emplace_back(&el, parent);
        return;
    }
    for (auto& child : el.children()) collect(child, &el, anims, ids);
}

void remove_animations(SvgElement& el) {
    auto& kids = el.children();
    kids.erase(std::remove_if(kids.begin(), kids.end(),
                              [](const SvgElement& c) { return c.is_element() && is_animation_tag(c.tag()); }),
               kids.end());
    for (auto& c : kids) remove_animations(c);
}

std::unordered_map<std::string, const SvgElement*> const_ids(const SvgElement& root) {
    std::unordered_map<std::string, const SvgElement*> ids;
    root.visit([&](const SvgElement& el) {
        if (auto id = el.attr_text("id", core::kFullPrecision)) ids.emplace(*id, &el);
    });
    return ids;
}

} // namespace

std::optional<double> parse_clock_value(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    const bool negative = text.front() == '-';
    if (text.front() == '+' || text.front() == '-') text = trim(text.substr(1));
    if (text.empty() || !(std::isdigit(static_cast<unsigned char>(text.front())) || text.front() == '.')) {
        return std::nullopt;
    }
    double value;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
        value = 0;
        for (const auto& part : parts) {
            auto v = core::parse_number(part);
            if (!v || *v < 0) return std::nullopt;
            value = value * 60 + *v;
        }
    } else {
        static const std::pair<std::string_view, double> kUnits[] = {
            {"ms", 0.001}, {"min", 60.0}, {"h", 3600.0}, {"s", 1.0}};
        double scale = 1.0;
        for (const auto& [unit, factor] : kUnits) {
            if (text.size() > unit.size() && text.substr(text.size() - unit.size()) == unit) {
                text = text.substr(0, text.size() - unit.size());
                scale = factor;
                break;
            }
        }
        auto v = core::parse_number(text);
        if (!v) return std::nullopt;
        value = *v * scale;
    }
    return negative ? -value : value;
}

double resolve_duration(const SvgDocument& doc) {
    const auto ids = const_ids(doc.root);
    Timeline timeline(ids);
    double duration = 0;
    doc.root.visit([&](const SvgElement& el) {
        if (!is_animation_tag(el.tag())) return;
        const Timing t = timeline.timing(el);
        if (!t.begin || !std::isfinite(t.dur)) return;
        duration = std::max(duration, *t.begin + t.dur);
    });
    return duration;
}

std::vector<double> frame_times(int n_frames, double duration) {
    if (n_frames < 1) throw std::invalid_argument("n_frames must be at least 1");
    std::vector<double> times(static_cast<std::size_t>(n_frames), 0.0);
    for (int k = 1; k < n_frames; ++k) {
        times[static_cast<std::size_t>(k)] = k == n_frames - 1 ? duration : duration * k / (n_frames - 1);
    }
    return times;
}

SvgDocument sample_document(const SvgDocument& doc, double t) {
    const auto timing_ids = const_ids(doc.root);
    Timeline timeline(timing_ids);
    std::vector<std::pair<const SvgElement*, Timing>> timings;
    doc.root.visit([&](const SvgElement& el) {
        if (is_animation_tag(el.tag())) timings.emplace_back(&el, timeline.timing(el));
    });

    SvgDocument out = doc;
    std::vector<std::pair<const SvgElement*, SvgElement*>> anims;
    std::unordered_map<std::string, SvgElement*> ids;
    collect(out.root, nullptr, anims, ids);
    // Same pre-order walk on both trees, so the indices line up.
    for (std::size_t i = 0; i < anims.size() && i < timings.size(); ++i) {
        const SvgElement* anim = anims[i].first;
        SvgElement* target = anims[i].second;
        if (const std::string ref = href_id(*anim); !ref.empty()) {
            auto it = ids.find(ref);
            target = it == ids.end() ? nullptr : it->second;
        }
        if (!target) continue;
        const auto p = progress(timings[i].second, t);
        if (!p) continue;
        const Job job{anim, target};
        if (anim->tag() == "animateTransform") apply_animate_transform(job, *p);
        else if (anim->tag() == "animateMotion") apply_animate_motion(job, *p, ids);
        else apply_animate(job, *p);
    }
    remove_animations(out.root);
    return out;
}

std::vector<RenderOutcome> rasterize_animation(const SvgDocument& doc, const RenderOptions& options, int n_frames,
                                               double duration) {
    if (options.size < kMinRenderSize) throw TooSmall("render size below minimum");
    if (!(duration > 0)) duration = resolve_duration(doc);
    std::vector<RenderOutcome> frames;
    for (double t : frame_times(n_frames, duration)) {
        try {
            frames.push_back(rasterize(sample_document(doc, t), options));
        } catch (const Error& e) {
            frames.push_back(RenderOutcome::penalized(options.size, e.what()));
        }
    }
    return frames;
}

std::vector<RenderOutcome> rasterize_animation(const SvgDocument& doc, int size, int n_frames, double duration) {
    RenderOptions opt;
    opt.size = size;
    return rasterize_animation(doc, opt, n_frames, duration);
}

std::vector<RenderOutcome> rasterize_animation_text(std::string_view svg_text, const RenderOptions& options,
                                                    int n_frames, double duration) {
    if (options.size < kMinRenderSize) throw TooSmall("render size below minimum");
    try {
        const SvgDocument doc = core::parse_svg(svg_text);
        return rasterize_animation(doc, options, n_frames, duration);
    } catch (const Error& e) {
        std::vector<RenderOutcome> frames;
        for (int k = 0; k < std::max(1, n_frames); ++k) frames.push_back(RenderOutcome::penalized(options.size, e.what()));
        return frames;
    }
}

} // namespace svgkit::raster
