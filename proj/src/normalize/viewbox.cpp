#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "svgkit/core/style.hpp"
#include "svgkit/core/text_util.hpp"
#include "svgkit/error.hpp"
#include "svgkit/normalize/normalizer.hpp"
#include "svgkit/raster/render.hpp"

namespace svgkit::normalize {

namespace {

using core::AttrValue;
using core::SvgDocument;
using core::SvgElement;

// Raised when a value cannot be rewritten; triggers the wrapper fallback.
struct Unscalable {
    std::string what;
};

enum class Axis { X, Y, Diag };

struct Viewport {
    double w, h;
    double reference(Axis axis) const {
        if (axis == Axis::X) return w;
        if (axis == Axis::Y) return h;
        return std::sqrt((w * w + h * h) / 2);
    }
};

const std::unordered_map<std::string_view, Axis>& length_attributes() {
    static const std::unordered_map<std::string_view, Axis> table = {
        {"x", Axis::X},           {"cx", Axis::X},          {"x1", Axis::X},
        {"x2", Axis::X},          {"width", Axis::X},       {"rx", Axis::X},
        {"fx", Axis::X},          {"dx", Axis::X},          {"y", Axis::Y},
        {"cy", Axis::Y},          {"y1", Axis::Y},          {"y2", Axis::Y},
        {"height", Axis::Y},      {"ry", Axis::Y},          {"fy", Axis::Y},
        {"dy", Axis::Y},          {"r", Axis::Diag},        {"fr", Axis::Diag},
        {"stroke-width", Axis::Diag}, {"stroke-dashoffset", Axis::Diag},
        {"stroke-dasharray", Axis::Diag}, {"font-size", Axis::Diag},
        {"stdDeviation", Axis::Diag}, {"letter-spacing", Axis::Diag},
        {"word-spacing", Axis::Diag}, {"textLength", Axis::Diag},
        {"startOffset", Axis::Diag},
    };
    return table;
}

bool is_gradient(std::string_view tag) { return tag == "linearGradient" || tag == "radialGradient"; }

bool is_gradient_geometry(std::string_view name) {
    return name == "x1" || name == "y1" || name == "x2" || name == "y2" || name == "cx" || name == "cy" ||
           name == "r" || name == "fx" || name == "fy" || name == "fr";
}

bool is_animation(std::string_view tag) {
    return tag == "animate" || tag == "animateTransform" || tag == "animateMotion" || tag == "set" ||
           tag == "animateColor";
}

std::string attr_string(const SvgElement& el, std::string_view name) {
    return std::string(core::trim(el.attr_text(name, core::kFullPrecision).value_or("")));
}

class Rescaler {
public:
    Rescaler(const SvgDocument& doc, double s) : s_(s) {
        doc.root.visit([this](const SvgElement& el) {
            if (auto id = el.attr_text("id", core::kFullPrecision)) ids_.emplace(*id, &el);
        });
    }

    void root(SvgElement& root, const Viewport& vp) {
        for (auto& attr : root.attributes()) {
            const std::string& n = attr.name;
            if (n == "viewBox" || n == "width" || n == "height" || n == "x" || n == "y" || n == "transform") continue;
            rescale_attribute(root, attr, vp, true);
        }
        for (auto& child : root.children()) element(child, vp, true);
    }

    core::TransformList scaled_transform(const core::TransformList& list) const {
        core::TransformList out = list;
        using Kind = core::TransformItem::Kind;
        for (auto& item : out.items) {
            auto& a = item.args;
            switch (item.kind) {
            case Kind::Matrix:
                if (a.size() == 6) a[4] *= s_, a[5] *= s_;
                break;
            case Kind::Translate:
                for (auto& v : a) v *= s_;
                break;
            case Kind::Rotate:
                if (a.size() == 3) a[1] *= s_, a[2] *= s_;
                break;
            default:
                break;
            }
        }
        return out;
    }

private:
    void element(SvgElement& el, Viewport vp, bool user_space) {
        if (!el.is_element() || !user_space) return;
        const std::string& tag = el.tag();
        if (is_animation(tag)) {
            animation(el, vp);
            return;
        }

        bool own_user_space = true;
        bool child_user_space = true;
        if (is_gradient(tag)) {
            own_user_space = gradient_units(el) == "userSpaceOnUse";
        } else if (tag == "clipPath") {
            own_user_space = child_user_space = attr_string(el, "clipPathUnits") != "objectBoundingBox";
        } else if (tag == "mask") {
            own_user_space = attr_string(el, "maskUnits") == "userSpaceOnUse";
            child_user_space = attr_string(el, "maskContentUnits") != "objectBoundingBox";
        } else if (tag == "pattern") {
            own_user_space = attr_string(el, "patternUnits") == "userSpaceOnUse";
            child_user_space = attr_string(el, "patternContentUnits") != "objectBoundingBox";
        } else if (tag == "filter") {
            own_user_space = attr_string(el, "filterUnits") == "userSpaceOnUse";
            child_user_space = attr_string(el, "primitiveUnits") != "objectBoundingBox";
        } else if (tag == "marker") {
            own_user_space = child_user_space = attr_string(el, "markerUnits") == "userSpaceOnUse";
        }

        Viewport child_vp = vp;
        if (tag == "svg" || tag == "symbol") child_vp = nested_viewport(el, vp);

        for (auto& attr : el.attributes()) {
            const std::string& n = attr.name;
            if (n == "transform" || n == "patternTransform") {
                if (tag == "clipPath" && !child_user_space) continue;
                attr.value = scaled_transform_value(attr.value, n);
            } else if (n == "gradientTransform") {
                if (own_user_space) attr.value = scaled_transform_value(attr.value, n);
            } else if (is_gradient(tag) && is_gradient_geometry(n)) {
                if (own_user_space) rescale_attribute(el, attr, vp, true);
            } else if ((tag == "mask" || tag == "pattern" || tag == "filter") &&
                       (n == "x" || n == "y" || n == "width" || n == "height")) {
                if (own_user_space) rescale_attribute(el, attr, vp, true);
            } else {
                rescale_attribute(el, attr, vp, own_user_space);
            }
        }
        for (auto& child : el.children()) element(child, child_vp, child_user_space);
    }

    Viewport nested_viewport(const SvgElement& el, const Viewport& vp) const {
        if (const AttrValue* vb = el.find("viewBox")) {
            if (const auto* n = vb->as<core::NumberList>(); n && n->values.size() == 4) {
                return {n->values[2], n->values[3]};
            }
        }
        if (el.tag() == "svg") {
            return {length_value(attr_string(el, "width"), Axis::X, vp).value_or(vp.w),
                    length_value(attr_string(el, "height"), Axis::Y, vp).value_or(vp.h)};
        }
        return vp;
    }

    std::string gradient_units(const SvgElement& el) const {
        const SvgElement* cur = &el;
        for (int depth = 0; cur && depth < 16; ++depth) {
            if (cur->has("gradientUnits")) return attr_string(*cur, "gradientUnits");
            std::string href = attr_string(*cur, "href");
            if (href.empty()) href = attr_string(*cur, "xlink:href");
            if (href.size() < 2 || href.front() != '#') break;
            auto it = ids_.find(href.substr(1));
            cur = it == ids_.end() ? nullptr : it->second;
        }
        return "objectBoundingBox";
    }

    static std::optional<double> length_value(std::string_view text, Axis axis, const Viewport& vp) {
        auto len = core::parse_length(text);
        if (!len) return std::nullopt;
        return core::length_to_user(*len, vp.reference(axis));
    }

    // Scales a whitespace/comma separated list of lengths.
    std::string scaled_length_list(std::string_view text, Axis axis, const Viewport& vp) const {
        std::string normalized(text);
        for (auto& c : normalized) {
            if (c == ',') c = ' ';
        }
        std::vector<double> values;
        for (const auto& token : core::split(normalized, ' ')) {
            auto v = length_value(token, axis, vp);
            if (!v) throw Unscalable{std::string(text)};
            values.push_back(*v * s_);
        }
        if (values.empty()) throw Unscalable{std::string(text)};
        return core::format_number_list(values, core::kFullPrecision);
    }

    AttrValue scaled_transform_value(const AttrValue& value, const std::string& name) const {
        const auto* list = value.as<core::TransformList>();
        if (!list) {
            if (core::trim(value.text()).empty()) return value;
            throw Unscalable{name};
        }
        return AttrValue::transform(scaled_transform(*list));
    }

    core::PathData scaled_path(core::PathData path) const {
        core::for_each_path_length(path, [this](double v) { return v * s_; });
        return path;
    }

    void rescale_attribute(SvgElement& el, core::Attribute& attr, const Viewport& vp, bool user_space) {
        const std::string& n = attr.name;
        if (n == "style") {
            attr.value = AttrValue::opaque(scaled_style(attr.value.text(core::kFullPrecision), vp, user_space));
            return;
        }
        if (!user_space) return;
        if (n == "d") {
            const auto* p = attr.value.as<core::PathData>();
            if (!p) throw Unscalable{"d"};
            attr.value = AttrValue::path(scaled_path(*p));
            return;
        }
        if (n == "points") {
            const auto* list = attr.value.as<core::NumberList>();
            if (!list) {
                if (core::trim(attr.value.text()).empty()) return;
                throw Unscalable{"points"};
            }
            auto values = list->values;
            for (auto& v : values) v *= s_;
            attr.value = AttrValue::numbers(std::move(values));
            return;
        }
        if (n == "viewBox" && (el.tag() == "svg" || el.tag() == "symbol" || el.tag() == "pattern" ||
                               el.tag() == "marker")) {
            const auto* list = attr.value.as<core::NumberList>();
            if (!list) throw Unscalable{"viewBox"};
            auto values = list->values;
            for (auto& v : values) v *= s_;
            attr.value = AttrValue::numbers(std::move(values));
            return;
        }
        const auto& table = length_attributes();
        auto it = table.find(n);
        if (it == table.end()) return;
        if (const auto* list = attr.value.as<core::NumberList>()) {
            auto values = list->values;
            for (auto& v : values) v *= s_;
            attr.value = AttrValue::numbers(std::move(values));
            return;
        }
        const std::string text(core::trim(attr.value.text(core::kFullPrecision)));
        if (text == "none" || text == "inherit" || text.empty()) return;
        attr.value = AttrValue::parse(n, scaled_length_list(text, it->second, vp));
    }

    std::string scaled_style(const std::string& text, const Viewport& vp, bool user_space) const {
        auto decls = core::parse_style(text);
        const auto& table = length_attributes();
        for (auto& [prop, value] : decls) {
            if (prop == "transform") throw Unscalable{"style transform"};
            if (!user_space) continue;
            auto it = table.find(prop);
            if (it == table.end() || value == "none" || value == "inherit") continue;
            value = scaled_length_list(value, it->second, vp);
        }
        return core::format_style(decls);
    }

    // Rewrites the keyframe attributes of one animation element.
    void animation(SvgElement& el, const Viewport& vp) {
        const std::string tag = el.tag();
        const std::string name = attr_string(el, "attributeName");
        std::function<std::string(const std::string&)> item_fn;

        if (tag == "animateMotion") {
            if (AttrValue* path = el.find("path")) {
                const auto* p = path->as<core::PathData>();
                if (!p) throw Unscalable{"animateMotion path"};
                *path = AttrValue::path(scaled_path(*p));
            }
            item_fn = [this](const std::string& item) { return scaled_numbers(item, {}); };
        } else if (tag == "animateTransform") {
            const std::string type = attr_string(el, "type");
            if (type.empty() || type == "translate") {
                item_fn = [this](const std::string& item) { return scaled_numbers(item, {}); };
            } else if (type == "rotate") {
                item_fn = [this](const std::string& item) { return scaled_numbers(item, {1, 2}); };
            }
        } else if (name == "d") {
            item_fn = [this](const std::string& item) {
                try {
                    return core::format_path_data(scaled_path(core::parse_path_data(item)), core::kFullPrecision);
                } catch (const Error&) {
                    throw Unscalable{"animated path"};
                }
            };
        } else if (name == "points" || name == "viewBox") {
            item_fn = [this](const std::string& item) { return scaled_numbers(item, {}); };
        } else if (auto it = length_attributes().find(name); it != length_attributes().end()) {
            const Axis axis = it->second;
            item_fn = [this, axis, vp](const std::string& item) {
                if (item == "none" || item == "inherit") return item;
                return scaled_length_list(item, axis, vp);
            };
        }
        if (!item_fn) return;
        for (const char* key : {"values", "from", "to", "by"}) {
            AttrValue* v = el.find(key);
            if (!v) continue;
            std::string out;
            for (const auto& item : core::split(v->text(core::kFullPrecision), ';')) {
                if (!out.empty()) out += ';';
                out += item_fn(item);
            }
            *v = AttrValue::opaque(out);
        }
    }

    // Scales every number, or only those at the listed positions.
    std::string scaled_numbers(const std::string& item, std::vector<std::size_t> positions) const {
        auto list = core::parse_number_list(item);
        if (!list) throw Unscalable{item};
        for (std::size_t i = 0; i < list->size(); ++i) {
            if (positions.empty() || std::find(positions.begin(), positions.end(), i) != positions.end()) {
                (*list)[i] *= s_;
            }
        }
        return core::format_number_list(*list, core::kFullPrecision);
    }

    double s_;
    std::unordered_map<std::string, const SvgElement*> ids_;
};

bool is_wrapped(const SvgElement& child) {
    if (!child.is_element()) return false;
    const std::string& t = child.tag();
    return !(t == "defs" || t == "title" || t == "desc" || t == "metadata" || t == "style" || t == "script" ||
             is_animation(t));
}

// Whether anything could be drawn outside the source window. The source
// renderer clips there; a letterboxed canvas would otherwise show it.
bool overflows_extent(const SvgDocument& doc, const Extent& ext) {
    bool animated = false;
    doc.root.visit([&](const SvgElement& el) { animated = animated || is_animation(el.tag()); });
    if (animated) return true;
    try {
        const auto b = raster::content_bounds(doc);
        if (!b) return false;
        constexpr double eps = 1e-9;
        return b->x0 < ext.x - eps || b->y0 < ext.y - eps || b->x1 > ext.x + ext.width + eps ||
               b->y1 > ext.y + ext.height + eps;
    } catch (const Error&) {
        return false;
    }
}

std::string unused_id(const SvgElement& root, const std::string& base) {
    std::unordered_map<std::string, bool> ids;
    root.visit([&](const SvgElement& el) {
        if (auto id = el.attr_text("id")) ids[*id] = true;
    });
    std::string id = base;
    for (int n = 2; ids.count(id); ++n) id = base + std::to_string(n);
    return id;
}

void clip_to_window(SvgElement& root, double x, double y, double w, double h) {
    const std::string id = unused_id(root, "canvas-clip");
    SvgElement rect("rect");
    rect.set("x", AttrValue::number(x));
    rect.set("y", AttrValue::number(y));
    rect.set("width", AttrValue::number(w));
    rect.set("height", AttrValue::number(h));
    SvgElement clip("clipPath");
    clip.set("id", AttrValue::opaque(id));
    clip.append(std::move(rect));

    SvgElement* defs = nullptr;
    for (auto& child : root.children()) {
        if (child.is_element() && child.tag() == "defs") {
            defs = &child;
            break;
        }
    }
    if (!defs) {
        auto& kids = root.children();
        auto pos = std::find_if(kids.begin(), kids.end(), [](const SvgElement& c) { return c.is_element(); });
        defs = &*kids.insert(pos, SvgElement("defs"));
    }
    defs->append(std::move(clip));

    SvgElement group("g");
    group.set("clip-path", AttrValue::opaque("url(#" + id + ")"));
    wrap_root_content(root, std::move(group));
}

} // namespace

void wrap_root_content(SvgElement& root, SvgElement group) {
    std::vector<SvgElement> kept;
    std::optional<std::size_t> slot;
    for (auto& child : root.children()) {
        if (is_wrapped(child)) {
            if (!slot) slot = kept.size();
            group.append(std::move(child));
        } else {
            kept.push_back(std::move(child));
        }
    }
    if (slot) kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(*slot), std::move(group));
    root.children() = std::move(kept);
}

void NormalizeConfig::validate() const {
    if (!(canvas_width > 0) || !(canvas_height > 0)) throw std::invalid_argument("canvas size must be positive");
    if (precision < 0) throw std::invalid_argument("precision must be non-negative");
}

Extent source_extent(const SvgDocument& doc) {
    const SvgElement& root = doc.root;
    if (const AttrValue* vb = root.find("viewBox")) {
        const auto* list = vb->as<core::NumberList>();
        if (!list || list->values.size() != 4) throw NoExtent("root viewBox is not four numbers");
        const auto& v = list->values;
        if (!(v[2] > 0) || !(v[3] > 0)) throw DegenerateExtent("root viewBox has non-positive size");
        return {v[0], v[1], v[2], v[3]};
    }
    auto dimension = [&](std::string_view name) -> double {
        const auto text = root.attr_text(name, core::kFullPrecision);
        if (!text) throw NoExtent("root has neither viewBox nor width/height");
        auto len = core::parse_length(*text);
        std::optional<double> v;
        if (len && len->unit != "%") v = core::length_to_user(*len, 0);
        if (!v) throw NoExtent("root " + std::string(name) + " is not an absolute length: " + *text);
        if (!(*v > 0)) throw DegenerateExtent("root " + std::string(name) + " is not positive");
        return *v;
    };
    const double w = dimension("width");
    const double h = dimension("height");
    return {0, 0, w, h};
}

SvgDocument normalize_viewbox(const SvgDocument& doc, const NormalizeConfig& config) {
    config.validate();
    const Extent ext = source_extent(doc);
    const double cw = config.canvas_width, ch = config.canvas_height;
    const double s = std::min(cw / ext.width, ch / ext.height);
    const double tx = (cw - s * ext.width) / 2 - s * ext.x;
    const double ty = (ch - s * ext.height) / 2 - s * ext.y;

    SvgDocument out = doc;
    Rescaler rescaler(doc, s);
    core::TransformList wrapper;
    if (tx != 0 || ty != 0) wrapper.items.push_back({core::TransformItem::Kind::Translate, {tx, ty}});
    try {
        rescaler.root(out.root, {ext.width, ext.height});
        if (const AttrValue* t = out.root.find("transform")) {
            const auto* list = t->as<core::TransformList>();
            if (!list) throw Unscalable{"root transform"};
            const auto scaled = rescaler.scaled_transform(*list);
            wrapper.items.insert(wrapper.items.end(), scaled.items.begin(), scaled.items.end());
        }
    } catch (const Unscalable&) {
        // Leave the content untouched and apply the whole mapping from outside.
        out = doc;
        wrapper.items.clear();
        wrapper.items.push_back({core::TransformItem::Kind::Matrix, {s, 0, 0, s, tx, ty}});
        if (const AttrValue* t = out.root.find("transform")) {
            if (const auto* list = t->as<core::TransformList>()) {
                wrapper.items.insert(wrapper.items.end(), list->items.begin(), list->items.end());
            }
        }
    }
    SvgElement& root = out.root;
    root.erase("transform");
    root.erase("width");
    root.erase("height");
    root.set("viewBox", AttrValue::numbers({0, 0, cw, ch}));
    if (!wrapper.empty()) {
        SvgElement group("g");
        group.set("transform", AttrValue::transform(std::move(wrapper)));
        wrap_root_content(root, std::move(group));
    }
    const double fit_w = s * ext.width, fit_h = s * ext.height;
    if ((fit_w < cw || fit_h < ch) && overflows_extent(doc, ext)) {
        clip_to_window(root, (cw - fit_w) / 2, (ch - fit_h) / 2, fit_w, fit_h);
    }
    return out;
}

SvgDocument pipeline(const SvgDocument& doc, const NormalizeConfig& config, bool run_simplify) {
    SvgDocument out = normalize_viewbox(doc, config);
    if (run_simplify) {
        SimplifyOptions opt;
        opt.precision = config.precision;
        out = simplify(out, opt);
    }
    return quantize_numbers(out, config.precision);
}

} // namespace svgkit::normalize
