#include "svgkit/core/style.hpp"
#include "svgkit/core/text_util.hpp"
#include "svgkit/error.hpp"
#include "svgkit/normalize/normalizer.hpp"

namespace svgkit::normalize {

namespace {

using core::AttrValue;
using core::SvgElement;

struct Quantizer {
    int precision;

    double round(double v) const { return core::round_decimal(v, precision); }

    // Rounds a standalone numeric token ("1.234", "12.5px"); other text is
    // returned unchanged.
    std::string token(const std::string& text) const {
        if (auto list = core::parse_number_list(text); list && !list->empty()) {
            for (auto& v : *list) v = round(v);
            return core::format_number_list(*list, core::kFullPrecision);
        }
        if (auto len = core::parse_length(text)) {
            return core::format_number(round(len->value), core::kFullPrecision) + len->unit;
        }
        return text;
    }

    std::string keyframes(const std::string& text, bool path_values) const {
        std::string out;
        for (const auto& item : core::split(text, ';')) {
            if (!out.empty()) out += ';';
            std::string q = token(item);
            if (q == item && path_values) {
                try {
                    auto p = core::parse_path_data(item);
                    for (auto& cmd : p.commands) {
                        for (auto& a : cmd.args) a = round(a);
                    }
                    q = core::format_path_data(p, core::kFullPrecision);
                } catch (const Error&) {
                }
            }
            out += q;
        }
        return out;
    }

    void element(SvgElement& el) const {
        if (!el.is_element()) return;
        const bool path_values = el.attr_text("attributeName").value_or("") == "d";
        for (auto& attr : el.attributes()) {
            AttrValue& v = attr.value;
            if (const auto* list = v.as<core::NumberList>()) {
                auto values = list->values;
                for (auto& x : values) x = round(x);
                v = AttrValue::numbers(std::move(values));
            } else if (const auto* path = v.as<core::PathData>()) {
                auto p = *path;
                for (auto& cmd : p.commands) {
                    for (auto& a : cmd.args) a = round(a);
                }
                v = AttrValue::path(std::move(p));
            } else if (const auto* t = v.as<core::TransformList>()) {
                auto list2 = *t;
                for (auto& item : list2.items) {
                    for (auto& a : item.args) a = round(a);
                }
                v = AttrValue::transform(std::move(list2));
            } else if (attr.name == "style") {
                auto decls = core::parse_style(v.text(core::kFullPrecision));
                for (auto& d : decls) d.second = token(d.second);
                v = AttrValue::opaque(core::format_style(decls));
            } else if (attr.name == "values" || attr.name == "from" || attr.name == "to" || attr.name == "by" ||
                       attr.name == "keyTimes") {
                v = AttrValue::opaque(keyframes(v.text(core::kFullPrecision), path_values));
            }
        }
        for (auto& child : el.children()) element(child);
    }
};

} // namespace

core::SvgDocument quantize_numbers(const core::SvgDocument& doc, int precision) {
    core::SvgDocument out = doc;
    Quantizer{precision}.element(out.root);
    return out;
}

} // namespace svgkit::normalize
