#include "svgkit/core/attr_value.hpp"

#include <algorithm>
#include <array>

#include "svgkit/error.hpp"

namespace svgkit::core {

namespace {

constexpr std::array<std::string_view, 34> kNumericAttributes = {
    "x", "y", "width", "height", "cx", "cy", "r", "rx", "ry", "x1", "y1", "x2", "y2",
    "fx", "fy", "fr", "viewBox", "points", "stroke-width", "stroke-miterlimit",
    "stroke-dashoffset", "stroke-dasharray", "opacity", "fill-opacity", "stroke-opacity",
    "stop-opacity", "offset", "font-size", "stdDeviation", "dx", "dy", "refX", "refY",
    "pathLength",
};

constexpr std::array<std::string_view, 6> kColorAttributes = {
    "fill", "stroke", "stop-color", "flood-color", "lighting-color", "color",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& table, std::string_view name) {
    return std::find(table.begin(), table.end(), name) != table.end();
}

} // namespace

bool is_numeric_attribute(std::string_view name) { return contains(kNumericAttributes, name); }
bool is_color_attribute(std::string_view name) { return contains(kColorAttributes, name); }
bool is_transform_attribute(std::string_view name) {
    return name == "transform" || name == "gradientTransform" || name == "patternTransform";
}

AttrValue AttrValue::parse(std::string_view name, std::string_view raw) {
    std::string r(raw);
    if (name == "d" || name == "path") {
        try {
            return {r, parse_path_data(raw)};
        } catch (const PathSyntaxError&) {
            return {r, Opaque{r}};
        }
    }
    if (is_transform_attribute(name)) {
        try {
            return {r, parse_transform_list(raw)};
        } catch (const TransformSyntaxError&) {
            return {r, Opaque{r}};
        }
    }
    if (is_color_attribute(name)) {
        if (auto c = try_parse_color(raw)) {
            return {r, *c};
        }
        return {r, Opaque{r}};
    }
    if (is_numeric_attribute(name)) {
        if (auto list = parse_number_list(raw); list && !list->empty()) {
            return {r, NumberList{std::move(*list)}};
        }
    }
    return {r, Opaque{r}};
}

AttrValue AttrValue::numbers(std::vector<double> values) {
    std::string raw = format_number_list(values, kFullPrecision);
    return {std::move(raw), NumberList{std::move(values)}};
}

AttrValue AttrValue::path(PathData path) {
    std::string raw = format_path_data(path, kFullPrecision);
    return {std::move(raw), std::move(path)};
}

AttrValue AttrValue::transform(TransformList list) {
    std::string raw = format_transform_list(list, kFullPrecision);
    return {std::move(raw), std::move(list)};
}

AttrValue AttrValue::color(std::string_view spelling) {
    return {std::string(spelling), parse_color(spelling)};
}

AttrValue AttrValue::opaque(std::string text) {
    Opaque o{text};
    return {std::move(text), std::move(o)};
}

std::string AttrValue::text(int precision) const {
    if (auto* n = as<NumberList>()) {
        return format_number_list(n->values, precision);
    }
    if (auto* p = as<PathData>()) {
        return format_path_data(*p, precision);
    }
    if (auto* t = as<TransformList>()) {
        return format_transform_list(*t, precision);
    }
    if (auto* o = as<Opaque>()) {
        return o->text;
    }
    return raw_;
}

std::optional<double> AttrValue::single_number() const {
    if (auto* n = as<NumberList>(); n && n->values.size() == 1) {
        return n->values.front();
    }
    return std::nullopt;
}

} // namespace svgkit::core
