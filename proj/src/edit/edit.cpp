#include "svgkit/edit/edit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "svgkit/core/style.hpp"
#include "svgkit/error.hpp"
#include "svgkit/normalize/normalizer.hpp"
#include "svgkit/raster/render.hpp"

namespace svgkit::edit {

using core::AttrValue;
using core::SvgDocument;
using core::SvgElement;
using core::TransformItem;
using core::TransformList;

namespace {

constexpr std::string_view kKindNames[] = {"color_edit", "add_stroke", "translate",    "scale",
                                           "rotate",     "flip",       "transparency", "crop"};

constexpr std::string_view kColorProperties[] = {"fill", "stroke", "stop-color"};

bool is_shape(std::string_view tag) {
    return tag == "path" || tag == "rect" || tag == "circle" || tag == "ellipse" || tag == "line" ||
           tag == "polyline" || tag == "polygon";
}

// Subtrees that are only drawn by reference.
bool is_reference_container(std::string_view tag) {
    return tag == "defs" || tag == "clipPath" || tag == "mask" || tag == "pattern" || tag == "symbol" ||
           tag == "marker" || tag == "linearGradient" || tag == "radialGradient" || tag == "filter";
}

std::string num(double v) { return core::format_number(v, 2); }

std::string flip_name(FlipAxis a) { return a == FlipAxis::Horizontal ? "horizontal" : "vertical"; }

constexpr std::string_view kRegionNames[] = {"left-half", "right-half", "top-half", "bottom-half"};

CropRegion region_from_name(std::string_view name) {
    for (int i = 0; i < 4; ++i) {
        if (kRegionNames[i] == name) return static_cast<CropRegion>(i);
    }
    throw InvalidEditOp("unknown crop region '" + std::string(name) + "'");
}

std::optional<core::Rgb> solid_rgb(std::string_view text) {
    auto c = core::try_parse_color(text);
    if (!c || c->kind != core::Color::Kind::Rgb) return std::nullopt;
    return c->rgb;
}

core::Rgb require_hex(const std::string& text, const char* what) {
    auto rgb = solid_rgb(text);
    if (!rgb || text.empty() || text[0] != '#') throw InvalidEditOp(std::string(what) + " is not a hex color: " + text);
    return *rgb;
}

struct Canvas {
    double x = 0, y = 0, w = 128, h = 128;
    double cx() const { return x + w / 2; }
    double cy() const { return y + h / 2; }
};

Canvas canvas_of(const SvgDocument& doc) {
    try {
        const auto e = normalize::source_extent(doc);
        return {e.x, e.y, e.width, e.height};
    } catch (const Error&) {
        return {};
    }
}

TransformItem item(TransformItem::Kind kind, std::vector<double> args) { return TransformItem{kind, std::move(args)}; }

void wrap(SvgDocument& doc, SvgElement group) { normalize::wrap_root_content(doc.root, std::move(group)); }

void wrap_transform(SvgDocument& doc, TransformList list) {
    SvgElement g("g");
    g.set("transform", AttrValue::transform(std::move(list)));
    wrap(doc, std::move(g));
}

// Transform about the canvas center: translate(c) op translate(-c).
TransformList about_center(const Canvas& c, TransformItem op) {
    TransformList list;
    list.items.push_back(item(TransformItem::Kind::Translate, {c.cx(), c.cy()}));
    list.items.push_back(std::move(op));
    list.items.push_back(item(TransformItem::Kind::Translate, {-c.cx(), -c.cy()}));
    return list;
}

void color_edit(SvgDocument& doc, const ColorEditParams& p) {
    const core::Rgb from = require_hex(p.from_hex, "from_hex");
    require_hex(p.to_hex, "to_hex");
    bool found = false;
    doc.root.visit([&](SvgElement& el) {
        for (auto prop : kColorProperties) {
            if (const AttrValue* v = el.find(prop)) {
                if (auto rgb = solid_rgb(v->text()); rgb && *rgb == from) {
                    el.set(prop, AttrValue::color(p.to_hex));
                    found = true;
                }
            }
        }
        if (const AttrValue* style = el.find("style")) {
            auto decls = core::parse_style(style->text());
            bool changed = false;
            for (auto& [name, value] : decls) {
                if (std::find(std::begin(kColorProperties), std::end(kColorProperties), name) ==
                    std::end(kColorProperties)) {
                    continue;
                }
                if (auto rgb = solid_rgb(value); rgb && *rgb == from) {
                    value = p.to_hex;
                    changed = true;
                }
            }
            if (changed) {
                el.set("style", AttrValue::opaque(core::format_style(decls)));
                found = true;
            }
        }
    });
    if (!found) throw ColorNotFound("color " + p.from_hex + " does not occur in the document");
}

bool has_stroke(const SvgElement& el, bool inherited) {
    if (const AttrValue* v = el.find("stroke")) return v->text() != "none";
    if (const AttrValue* style = el.find("style")) {
        for (const auto& [name, value] : core::parse_style(style->text())) {
            if (name == "stroke") return value != "none";
        }
    }
    return inherited;
}

void add_stroke(SvgDocument& doc, const AddStrokeParams& p) {
    require_hex(p.color, "stroke color");
    std::size_t shapes = 0;
    std::function<void(SvgElement&, bool)> walk = [&](SvgElement& el, bool stroked) {
        for (auto& child : el.children()) {
            if (!child.is_element() || is_reference_container(child.tag())) continue;
            const bool child_stroked = has_stroke(child, stroked);
            if (is_shape(child.tag())) {
                ++shapes;
                if (!child_stroked) {
                    child.set("stroke", AttrValue::color(p.color));
                    child.set("stroke-width", AttrValue::number(p.width));
                }
            } else {
                walk(child, child_stroked);
            }
        }
    };
    walk(doc.root, has_stroke(doc.root, false));
    if (shapes == 0) throw NoShapes("document has no drawable shapes to outline");
}

// Offsets that keep the drawn content inside the canvas, truncated to whole
// units. A box larger than the canvas on some axis cannot move on it.
TranslateParams bound_translation(const SvgDocument& doc, TranslateParams p) {
    const Canvas c = canvas_of(doc);
    const auto b = raster::content_bounds(doc);
    if (!b) return p;
    auto clamp_axis = [](double d, double lo, double hi, double min_edge, double max_edge) {
        const double down = std::min(0.0, min_edge - lo);
        const double up = std::max(0.0, max_edge - hi);
        if (down > up) return 0.0;
        return std::trunc(std::clamp(d, down, up));
    };
    p.dx = clamp_axis(p.dx, b->x0, b->x1, c.x, c.x + c.w);
    p.dy = clamp_axis(p.dy, b->y0, b->y1, c.y, c.y + c.h);
    return p;
}

void translate(SvgDocument& doc, TranslateParams p) {
    if (p.bounded) p = bound_translation(doc, p);
    TransformList list;
    list.items.push_back(item(TransformItem::Kind::Translate, {p.dx, p.dy}));
    wrap_transform(doc, std::move(list));
}

void crop(SvgDocument& doc, const CropParams& p) {
    const Canvas c = canvas_of(doc);
    std::vector<double> box{c.x, c.y, c.w, c.h};
    switch (p.region) {
    case CropRegion::LeftHalf: box[2] = c.w / 2; break;
    case CropRegion::RightHalf: box[0] = c.x + c.w / 2; box[2] = c.w / 2; break;
    case CropRegion::TopHalf: box[3] = c.h / 2; break;
    case CropRegion::BottomHalf: box[1] = c.y + c.h / 2; box[3] = c.h / 2; break;
    }
    doc.root.set("viewBox", AttrValue::numbers(box));
}

const std::vector<std::vector<std::string>>& template_pools() {
    static const std::vector<std::vector<std::string>> pools = {
        {"Change color {from} to {to}"},
        {"Add an outline to this SVG shape.", "Apply stroke effects to the SVG graphic.", "Add a border to the shape.",
         "Please add an outline stroke to this graphic.", "Add border lines to the SVG shape.",
         "Give the graphic a border outline.", "Please add stroke to the SVG element.",
         "Add an outer outline to this shape.", "Add boundary lines to the graphic.",
         "Please add border effects to the SVG graphic.", "Add outline lines to this graphic.",
         "Add stroke outline to the SVG shape.", "Please add outer border lines to the graphic.",
         "Add border stroke to this SVG.", "Add outline border to the shape."},
        {"Translate this SVG graphic.", "Move the SVG graphic to a new position.", "Please translate this graphic.",
         "Move the graphic in the specified direction.", "Please move the SVG shape.",
         "Adjust the position of the graphic.", "Please translate this shape.",
         "Move the position of the SVG element.", "Please adjust the graphic's position.",
         "Move the SVG graphic in a certain direction.", "Please apply translation transform to the graphic.",
         "Move this SVG shape.", "Please translate the graphic to a new position.",
         "Apply position movement to the SVG.", "Please translate this SVG element."},
        {"Scale this SVG graphic.", "Adjust the size of the SVG graphic.", "Please scale this graphic.",
         "Enlarge or shrink the graphic.", "Please scale the SVG shape.", "Adjust the size of the graphic.",
         "Please scale this shape.", "Apply size adjustment to the SVG element.", "Please adjust the graphic size.",
         "Scale the SVG graphic proportionally.", "Please apply scaling transform to the graphic.",
         "Adjust the size of this SVG shape.", "Please scale the graphic proportionally.",
         "Apply size adjustment to the SVG.", "Please scale this SVG element."},
        {"Rotate this SVG graphic.", "Rotate the SVG graphic around its center.", "Please rotate this graphic.",
         "Rotate the graphic by a specified angle.", "Please rotate the SVG shape.",
         "Rotate the graphic around the center point.", "Please rotate this shape.",
         "Apply angle adjustment to the SVG element.", "Please rotate the graphic.",
         "Rotate the SVG graphic clockwise/counterclockwise.", "Please apply rotation transform to the graphic.",
         "Rotate this SVG shape around its center.", "Please rotate the graphic by a certain angle.",
         "Apply rotation operation to the SVG.", "Please rotate this SVG element."},
        {"Flip this SVG graphic.", "Flip the SVG graphic.", "Please flip this graphic.",
         "Flip the graphic vertically or horizontally.", "Please flip the SVG shape.",
         "Flip the direction of the graphic.", "Please flip this shape.", "Apply mirror flip to the SVG element.",
         "Please flip the graphic.", "Apply mirror processing to the SVG graphic.",
         "Please apply flip transform to the graphic.", "Flip this SVG shape.",
         "Please apply mirror flip to the graphic.", "Apply flip operation to the SVG.",
         "Please flip this SVG element."},
        {"Adjust the opacity of this SVG graphic.", "Set the transparency of the SVG graphic.",
         "Please adjust the transparency of the graphic.", "Set the graphic to semi-transparent.",
         "Please modify the opacity of the SVG shape.", "Adjust the opacity of the graphic.",
         "Please set the transparency of this shape.", "Apply opacity adjustment to the SVG element.",
         "Please adjust the graphic's opacity.", "Set the SVG graphic to transparent effect.",
         "Please apply opacity transform to the graphic.", "Adjust the opacity of this SVG shape.",
         "Please modify the graphic's transparency.", "Apply opacity operation to the SVG.",
         "Please adjust the opacity of this SVG element."},
        {"Crop this SVG graphic.", "Crop the SVG graphic to show part of it.", "Please crop this graphic.",
         "Crop the graphic to a specific region.", "Please crop the SVG shape.", "Crop the graphic to half size.",
         "Please crop this shape.", "Apply cropping to the SVG element.", "Please crop the graphic.",
         "Crop the SVG graphic to show only part.", "Please apply crop transform to the graphic.",
         "Crop this SVG shape.", "Please crop the graphic to specified area.", "Apply crop operation to the SVG.",
         "Please crop this SVG element."},
    };
    return pools;
}

std::string parameter_phrase(const EditOp& op) {
    struct Phrase {
        std::string operator()(const ColorEditParams&) const { return ""; }
        std::string operator()(const AddStrokeParams& p) const {
            return " Use stroke color " + p.color + " with width " + num(p.width) + ".";
        }
        std::string operator()(const TranslateParams& p) const {
            return " Move it " + num(std::abs(p.dx)) + (p.dx < 0 ? " units left and " : " units right and ") +
                   num(std::abs(p.dy)) + (p.dy < 0 ? " units up." : " units down.");
        }
        std::string operator()(const ScaleParams& p) const {
            return " Scale it by a factor of " + num(p.factor) + " around its center.";
        }
        std::string operator()(const RotateParams& p) const {
            return " Rotate it " + num(std::abs(p.degrees)) +
                   (p.degrees < 0 ? " degrees counterclockwise around its center." : " degrees clockwise around its center.");
        }
        std::string operator()(const FlipParams& p) const { return " Flip it " + flip_name(p.axis) + "ly."; }
        std::string operator()(const TransparencyParams& p) const { return " Set the opacity to " + num(p.opacity) + "."; }
        std::string operator()(const CropParams& p) const {
            std::string region(kRegionNames[static_cast<int>(p.region)]);
            std::replace(region.begin(), region.end(), '-', ' ');
            return " Keep only the " + region + ".";
        }
    };
    return std::visit(Phrase{}, op.params);
}

std::string random_hex(std::mt19937_64& rng) {
    return core::to_hex({static_cast<std::uint8_t>(rng() & 0xFF), static_cast<std::uint8_t>(rng() & 0xFF),
                         static_cast<std::uint8_t>(rng() & 0xFF)});
}

// Uniform in [lo, hi] from one 53-bit draw; avoids the implementation-defined
// std distributions so output matches across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::vector<core::Rgb> document_colors(const SvgDocument& doc) {
    std::vector<core::Rgb> colors;
    auto add = [&](std::string_view text) {
        if (auto rgb = solid_rgb(text); rgb && std::find(colors.begin(), colors.end(), *rgb) == colors.end()) {
            colors.push_back(*rgb);
        }
    };
    doc.root.visit([&](const SvgElement& el) {
        for (auto prop : kColorProperties) {
            if (const AttrValue* v = el.find(prop)) add(v->text());
        }
        if (const AttrValue* style = el.find("style")) {
            for (const auto& [name, value] : core::parse_style(style->text())) {
                if (name == "fill" || name == "stroke" || name == "stop-color") add(value);
            }
        }
    });
    return colors;
}

EditOp draw_op(EditKind kind, const SvgDocument& doc, std::mt19937_64& rng) {
    auto round2 = [](double v) { return core::round_decimal(v, 2); };
    switch (kind) {
    case EditKind::ColorEdit: {
        const auto colors = document_colors(doc);
        if (colors.empty()) throw ColorNotFound("document has no solid fill, stroke or stop colors");
        const std::string from = core::to_hex(colors[pick(rng, colors.size())]);
        std::string to = random_hex(rng);
        while (to == from) to = random_hex(rng);
        return {ColorEditParams{from, to}};
    }
    case EditKind::AddStroke:
        return {AddStrokeParams{random_hex(rng), std::round(uniform(rng, 1, 4) * 2) / 2}};
    case EditKind::Translate:
    {
        const double dx = std::round(uniform(rng, -32, 32));
        const double dy = std::round(uniform(rng, -32, 32));
        return {bound_translation(doc, TranslateParams{dx, dy, true})};
    }
    case EditKind::Scale:
        return {ScaleParams{round2(uniform(rng, 0.5, 1.5))}};
    case EditKind::Rotate:
        if (pick(rng, 2) == 0) return {RotateParams{90.0 * static_cast<double>(1 + pick(rng, 3))}};
        return {RotateParams{std::round(uniform(rng, -45, 45))}};
    case EditKind::Flip:
        return {FlipParams{pick(rng, 2) == 0 ? FlipAxis::Horizontal : FlipAxis::Vertical}};
    case EditKind::Transparency:
        return {TransparencyParams{round2(uniform(rng, 0.2, 0.8))}};
    case EditKind::Crop:
        return {CropParams{static_cast<CropRegion>(pick(rng, 4))}};
    }
    throw InvalidEditOp("unknown edit kind");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::string_view kind_name(EditKind kind) { return kKindNames[static_cast<int>(kind)]; }

EditKind kind_from_name(std::string_view name) {
    for (int i = 0; i < kEditKindCount; ++i) {
        if (kKindNames[i] == name) return static_cast<EditKind>(i);
    }
    throw InvalidEditOp("unknown edit kind '" + std::string(name) + "'");
}

void EditOp::validate() const {
    struct Check {
        void operator()(const ColorEditParams& p) const {
            require_hex(p.from_hex, "from_hex");
            require_hex(p.to_hex, "to_hex");
        }
        void operator()(const AddStrokeParams& p) const {
            require_hex(p.color, "stroke color");
            if (!(p.width > 0)) throw InvalidEditOp("stroke width must be positive");
        }
        void operator()(const TranslateParams& p) const {
            if (!std::isfinite(p.dx) || !std::isfinite(p.dy)) throw InvalidEditOp("translation must be finite");
        }
        void operator()(const ScaleParams& p) const {
            if (!(p.factor > 0) || !std::isfinite(p.factor)) throw InvalidEditOp("scale factor must be positive");
        }
        void operator()(const RotateParams& p) const {
            if (!(p.degrees > -360 && p.degrees < 360)) throw InvalidEditOp("rotation must lie in (-360, 360)");
        }
        void operator()(const FlipParams&) const {}
        void operator()(const TransparencyParams& p) const {
            if (!(p.opacity >= 0 && p.opacity <= 1)) throw InvalidEditOp("opacity must lie in [0, 1]");
        }
        void operator()(const CropParams&) const {}
    };
    std::visit(Check{}, params);
}

nlohmann::ordered_json EditOp::params_json() const {
    struct ToJson {
        nlohmann::ordered_json operator()(const ColorEditParams& p) const {
            return {{"from_hex", p.from_hex}, {"to_hex", p.to_hex}};
        }
        nlohmann::ordered_json operator()(const AddStrokeParams& p) const {
            return {{"color", p.color}, {"width", p.width}};
        }
        nlohmann::ordered_json operator()(const TranslateParams& p) const {
            return {{"dx", p.dx}, {"dy", p.dy}, {"bounded", p.bounded}};
        }
        nlohmann::ordered_json operator()(const ScaleParams& p) const { return {{"factor", p.factor}}; }
        nlohmann::ordered_json operator()(const RotateParams& p) const { return {{"degrees", p.degrees}}; }
        nlohmann::ordered_json operator()(const FlipParams& p) const { return {{"axis", flip_name(p.axis)}}; }
        nlohmann::ordered_json operator()(const TransparencyParams& p) const { return {{"opacity", p.opacity}}; }
        nlohmann::ordered_json operator()(const CropParams& p) const {
            return {{"region", kRegionNames[static_cast<int>(p.region)]}};
        }
    };
    return std::visit(ToJson{}, params);
}

EditOp EditOp::from_json(EditKind kind, const nlohmann::json& j) {
    try {
        switch (kind) {
        case EditKind::ColorEdit: return {ColorEditParams{j.at("from_hex"), j.at("to_hex")}};
        case EditKind::AddStroke: return {AddStrokeParams{j.at("color"), j.value("width", 1.0)}};
        case EditKind::Translate: return {TranslateParams{j.value("dx", 0.0), j.value("dy", 0.0), j.value("bounded", false)}};
        case EditKind::Scale: return {ScaleParams{j.at("factor")}};
        case EditKind::Rotate: return {RotateParams{j.at("degrees")}};
        case EditKind::Flip: {
            const std::string axis = j.at("axis");
            if (axis != "horizontal" && axis != "vertical") throw InvalidEditOp("unknown flip axis '" + axis + "'");
            return {FlipParams{axis == "horizontal" ? FlipAxis::Horizontal : FlipAxis::Vertical}};
        }
        case EditKind::Transparency: return {TransparencyParams{j.at("opacity")}};
        case EditKind::Crop: return {CropParams{region_from_name(j.at("region").get<std::string>())}};
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidEditOp(std::string("bad parameters for ") + std::string(kind_name(kind)) + ": " + e.what());
    }
    throw InvalidEditOp("unknown edit kind");
}

SvgDocument apply_edit(const SvgDocument& doc, const EditOp& op) {
    op.validate();
    SvgDocument out = doc;
    const Canvas c = canvas_of(doc);
    switch (op.kind()) {
    case EditKind::ColorEdit: color_edit(out, std::get<ColorEditParams>(op.params)); break;
    case EditKind::AddStroke: add_stroke(out, std::get<AddStrokeParams>(op.params)); break;
    case EditKind::Translate: translate(out, std::get<TranslateParams>(op.params)); break;
    case EditKind::Scale: {
        const double s = std::get<ScaleParams>(op.params).factor;
        wrap_transform(out, about_center(c, item(TransformItem::Kind::Scale, {s})));
        break;
    }
    case EditKind::Rotate: {
        TransformList list;
        list.items.push_back(
            item(TransformItem::Kind::Rotate, {std::get<RotateParams>(op.params).degrees, c.cx(), c.cy()}));
        wrap_transform(out, std::move(list));
        break;
    }
    case EditKind::Flip: {
        const bool h = std::get<FlipParams>(op.params).axis == FlipAxis::Horizontal;
        wrap_transform(out, about_center(c, item(TransformItem::Kind::Scale, {h ? -1.0 : 1.0, h ? 1.0 : -1.0})));
        break;
    }
    case EditKind::Transparency: {
        SvgElement g("g");
        g.set("opacity", AttrValue::number(std::get<TransparencyParams>(op.params).opacity));
        wrap(out, std::move(g));
        break;
    }
    case EditKind::Crop: crop(out, std::get<CropParams>(op.params)); break;
    }
    return out;
}

const std::vector<std::string>& instruction_templates(EditKind kind) {
    return template_pools()[static_cast<std::size_t>(kind)];
}

std::string make_instruction(const EditOp& op, std::uint64_t seed) {
    if (const auto* p = std::get_if<ColorEditParams>(&op.params)) {
        return "Change color " + p->from_hex + " to " + p->to_hex;
    }
    std::mt19937_64 rng(seed);
    const auto& pool = instruction_templates(op.kind());
    return pool[pick(rng, pool.size())] + parameter_phrase(op);
}

nlohmann::ordered_json EditSample::to_json() const {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["op_kind"] = kind_name(op.kind());
    auto params = op.params_json();
    params["seed"] = seed;
    j["params"] = std::move(params);
    j["instruction"] = instruction;
    j["original_svg"] = core::serialize_svg(original);
    j["edited_svg"] = core::serialize_svg(edited);
    return j;
}

SynthesisResult synthesize_pairs(const std::vector<CorpusEntry>& corpus, int ops_per_doc, std::uint64_t seed) {
    if (ops_per_doc < 0) throw std::invalid_argument("ops_per_doc must be non-negative");
    SynthesisResult result;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto& entry = corpus[d];
        std::mt19937_64 rng(mix_seed(seed, d));
        std::vector<EditKind> round;
        for (int j = 0; j < ops_per_doc; ++j) {
            if (round.empty()) {
                for (int k = kEditKindCount - 1; k >= 0; --k) round.push_back(static_cast<EditKind>(k));
                for (std::size_t i = round.size() - 1; i > 0; --i) std::swap(round[i], round[pick(rng, i + 1)]);
            }
            const EditKind kind = round.back();
            round.pop_back();
            const std::uint64_t sample_seed = rng();
            const std::string id = entry.id + "-" + std::to_string(j);
            try {
                EditSample s;
                s.id = id;
                s.original = entry.doc;
                s.op = draw_op(kind, entry.doc, rng);
                s.seed = sample_seed;
                s.edited = apply_edit(entry.doc, s.op);
                s.instruction = make_instruction(s.op, sample_seed);
                if (!core::validate_renderable(s.edited)) {
                    result.skipped.push_back(id + ": edited document does not render");
                    continue;
                }
                result.samples.push_back(std::move(s));
            } catch (const Error& e) {
                result.skipped.push_back(id + " (" + std::string(kind_name(kind)) + "): " + e.what());
            }
        }
    }
    return result;
}

std::string to_jsonl(const std::vector<EditSample>& samples) {
    std::string out;
    for (const auto& s : samples) out += s.to_json().dump() + "\n";
    return out;
}

} // namespace svgkit::edit
