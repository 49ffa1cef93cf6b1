#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "svgkit/core/color.hpp"
#include "svgkit/core/style.hpp"
#include "svgkit/core/text_util.hpp"
#include "svgkit/normalize/normalizer.hpp"

namespace svgkit::normalize {

namespace {

using core::AttrValue;
using core::SvgDocument;
using core::SvgElement;

using IdSet = std::unordered_set<std::string>;

bool is_animation(std::string_view tag) {
    return tag == "animate" || tag == "animateTransform" || tag == "animateMotion" || tag == "set" ||
           tag == "animateColor";
}

std::string attr_string(const SvgElement& el, std::string_view name) {
    return std::string(core::trim(el.attr_text(name, core::kFullPrecision).value_or("")));
}

std::string href_target(const SvgElement& el) {
    std::string h = attr_string(el, "href");
    if (h.empty()) h = attr_string(el, "xlink:href");
    if (h.size() > 1 && h.front() == '#') return h.substr(1);
    return {};
}

// ---------------------------------------------------------------------------
// Node and attribute removal

bool is_dropped_element(const SvgElement& el) {
    if (el.kind() == SvgElement::Kind::Comment) return true;
    if (!el.is_element()) return false;
    const std::string& t = el.tag();
    return t == "metadata" || t == "title" || t == "desc" || el.foreign();
}

bool is_dropped_attribute(const SvgElement& el, bool is_root, const core::Attribute& attr) {
    const std::string& n = attr.name;
    if (n == "xml:space" || n == "enable-background") return true;
    if (core::starts_with(n, "xmlns:")) return n != "xmlns:xlink";  // re-checked after the walk
    const auto colon = n.find(':');
    if (colon != std::string::npos) {
        const std::string_view prefix = std::string_view(n).substr(0, colon);
        return prefix != "xlink" && prefix != "xml";
    }
    const std::string value(core::trim(attr.value.text(core::kFullPrecision)));
    if ((n == "style" || n == "class" || n == "id") && value.empty()) return true;
    if (is_root) {
        if (n == "version" || n == "baseProfile") return true;
        if ((n == "x" || n == "y") && attr.value.single_number() == 0.0) return true;
    }
    (void)el;
    return false;
}

bool uses_xlink(const SvgElement& el) {
    if (!el.is_element()) return false;
    for (const auto& a : el.attributes()) {
        if (core::starts_with(a.name, "xlink:")) return true;
    }
    return std::any_of(el.children().begin(), el.children().end(), uses_xlink);
}

void strip(SvgElement& el, bool is_root) {
    auto& kids = el.children();
    kids.erase(std::remove_if(kids.begin(), kids.end(), is_dropped_element), kids.end());
    auto& attrs = el.attributes();
    attrs.erase(std::remove_if(attrs.begin(), attrs.end(),
                               [&](const core::Attribute& a) { return is_dropped_attribute(el, is_root, a); }),
                attrs.end());
    for (auto& c : kids) {
        if (c.is_element()) strip(c, false);
    }
}

// ---------------------------------------------------------------------------
// References

void scan_urls(std::string_view text, IdSet& refs) {
    std::size_t pos = 0;
    while ((pos = text.find("url(", pos)) != std::string_view::npos) {
        pos += 4;
        const auto close = text.find(')', pos);
        if (close == std::string_view::npos) break;
        std::string_view ref = core::trim(text.substr(pos, close - pos));
        if (ref.size() >= 2 && (ref.front() == '"' || ref.front() == '\'')) ref = ref.substr(1, ref.size() - 2);
        if (ref.size() > 1 && ref.front() == '#') refs.emplace(ref.substr(1));
        pos = close;
    }
}

void scan_css_ids(std::string_view text, IdSet& refs) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '#') continue;
        std::size_t j = i + 1;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '-' ||
                                   text[j] == '_')) {
            ++j;
        }
        if (j > i + 1) refs.emplace(text.substr(i + 1, j - i - 1));
    }
}

void collect_references(const SvgElement& el, IdSet& refs) {
    if (el.is_element() && el.tag() == "style") {
        for (const auto& c : el.children()) scan_css_ids(c.text(), refs);
    }
    if (!el.is_element()) return;
    const bool href_animation = is_animation(el.tag()) &&
                                (attr_string(el, "attributeName") == "href" ||
                                 attr_string(el, "attributeName") == "xlink:href");
    for (const auto& a : el.attributes()) {
        const std::string text = a.value.text(core::kFullPrecision);
        scan_urls(text, refs);
        if (a.name == "href" || a.name == "xlink:href") {
            const auto t = core::trim(text);
            if (t.size() > 1 && t.front() == '#') refs.emplace(t.substr(1));
        } else if (a.name == "begin" || a.name == "end") {
            for (const auto& item : core::split(text, ';')) {
                const auto dot = item.find('.');
                if (dot != std::string::npos && dot > 0 && !std::isdigit(static_cast<unsigned char>(item[0]))) {
                    refs.emplace(item.substr(0, dot));
                }
            }
        } else if (href_animation && (a.name == "values" || a.name == "from" || a.name == "to")) {
            for (const auto& item : core::split(text, ';')) {
                if (item.size() > 1 && item.front() == '#') refs.emplace(item.substr(1));
            }
        }
    }
    for (const auto& c : el.children()) collect_references(c, refs);
}

IdSet references(const SvgElement& root) {
    IdSet refs;
    collect_references(root, refs);
    return refs;
}

bool subtree_has_referenced_id(const SvgElement& el, const IdSet& refs) {
    if (!el.is_element()) return false;
    if (auto id = el.attr_text("id", core::kFullPrecision); id && refs.count(*id)) return true;
    return std::any_of(el.children().begin(), el.children().end(),
                       [&](const SvgElement& c) { return subtree_has_referenced_id(c, refs); });
}

bool prune_defs(SvgElement& el, const IdSet& refs) {
    bool changed = false;
    auto& kids = el.children();
    if (el.tag() == "defs") {
        const auto before = kids.size();
        kids.erase(std::remove_if(kids.begin(), kids.end(),
                                  [&](const SvgElement& c) {
                                      if (!c.is_element()) return c.kind() != SvgElement::Kind::Text;
                                      if (c.tag() == "style" || c.tag() == "script") return false;
                                      return !subtree_has_referenced_id(c, refs);
                                  }),
                   kids.end());
        changed = kids.size() != before;
    }
    for (auto& c : kids) {
        if (c.is_element()) changed |= prune_defs(c, refs);
    }
    const auto before = kids.size();
    kids.erase(std::remove_if(kids.begin(), kids.end(),
                              [](const SvgElement& c) {
                                  return c.is_element() && c.tag() == "defs" && c.attributes().empty() &&
                                         c.children().empty();
                              }),
               kids.end());
    return changed || kids.size() != before;
}

void drop_unreferenced_ids(SvgElement& el, const IdSet& refs) {
    if (!el.is_element()) return;
    if (auto id = el.attr_text("id", core::kFullPrecision); id && !refs.count(*id)) el.erase("id");
    for (auto& c : el.children()) drop_unreferenced_ids(c, refs);
}

// ---------------------------------------------------------------------------
// Default values

enum class ValueKind { Number, Color, Keyword };

struct PropertyDefault {
    std::string_view name;
    std::string_view value;
    ValueKind kind;
    bool inherited;
};

constexpr PropertyDefault kPropertyDefaults[] = {
    {"fill", "#000000", ValueKind::Color, true},
    {"fill-opacity", "1", ValueKind::Number, true},
    {"fill-rule", "nonzero", ValueKind::Keyword, true},
    {"stroke", "none", ValueKind::Color, true},
    {"stroke-width", "1", ValueKind::Number, true},
    {"stroke-opacity", "1", ValueKind::Number, true},
    {"stroke-linecap", "butt", ValueKind::Keyword, true},
    {"stroke-linejoin", "miter", ValueKind::Keyword, true},
    {"stroke-miterlimit", "4", ValueKind::Number, true},
    {"stroke-dasharray", "none", ValueKind::Keyword, true},
    {"stroke-dashoffset", "0", ValueKind::Number, true},
    {"clip-rule", "nonzero", ValueKind::Keyword, true},
    {"visibility", "visible", ValueKind::Keyword, true},
    {"opacity", "1", ValueKind::Number, false},
    {"display", "inline", ValueKind::Keyword, false},
};

const PropertyDefault* property_default(std::string_view name) {
    for (const auto& p : kPropertyDefaults) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

// Element-specific attribute defaults that are not presentation properties.
std::optional<std::string_view> element_default(const SvgElement& el, std::string_view name) {
    const std::string& t = el.tag();
    if ((t == "rect" || t == "use" || t == "image") && (name == "x" || name == "y")) return "0";
    if ((t == "circle" || t == "ellipse") && (name == "cx" || name == "cy")) return "0";
    if (t == "line" && (name == "x1" || name == "y1" || name == "x2" || name == "y2")) return "0";
    if (t == "stop" && name == "stop-opacity") return "1";
    if (t == "clipPath" && name == "clipPathUnits") return "userSpaceOnUse";
    if ((t == "linearGradient" || t == "radialGradient") && href_target(el).empty()) {
        if (name == "gradientUnits") return "objectBoundingBox";
        if (name == "spreadMethod") return "pad";
    }
    return std::nullopt;
}

// Canonical comparable form of a value, or nullopt when it cannot be
// interpreted.
std::optional<std::string> canonical(std::string_view text, ValueKind kind, int precision) {
    text = core::trim(text);
    switch (kind) {
    case ValueKind::Number: {
        auto v = core::parse_number(text);
        if (!v) return std::nullopt;
        const double r = precision == core::kFullPrecision ? *v : core::round_decimal(*v, precision);
        return core::format_number(r, core::kFullPrecision);
    }
    case ValueKind::Color: {
        auto c = core::try_parse_color(text);
        if (!c) return std::nullopt;
        if (c->kind == core::Color::Kind::None) return std::string("none");
        if (c->kind != core::Color::Kind::Rgb) return std::nullopt;
        if (c->alpha != 1.0) return std::nullopt;
        return core::to_hex(c->rgb);
    }
    case ValueKind::Keyword:
        return std::string(text);
    }
    return std::nullopt;
}

ValueKind guess_kind(std::string_view value) {
    return core::parse_number(value) ? ValueKind::Number : ValueKind::Keyword;
}

struct DocumentFacts {
    std::set<std::string> animated;   // attribute names targeted by any animation
    std::set<std::string> non_default;  // inherited properties set to a non-initial value somewhere
    IdSet use_targets;
};

void gather_facts(const SvgElement& el, DocumentFacts& facts, int precision) {
    if (!el.is_element()) return;
    if (is_animation(el.tag())) {
        auto name = attr_string(el, "attributeName");
        if (name.empty() && el.tag() == "animateTransform") name = "transform";
        facts.animated.insert(name);
    }
    if (el.tag() == "use") {
        if (auto t = href_target(el); !t.empty()) facts.use_targets.insert(t);
    }
    auto note = [&](std::string_view name, std::string_view value) {
        const PropertyDefault* p = property_default(name);
        if (!p || !p->inherited) return;
        if (canonical(value, p->kind, precision) != canonical(p->value, p->kind, precision)) {
            facts.non_default.emplace(name);
        }
    };
    for (const auto& a : el.attributes()) note(a.name, a.value.text(core::kFullPrecision));
    if (const AttrValue* style = el.find("style")) {
        for (const auto& [prop, value] : core::parse_style(style->text(core::kFullPrecision))) note(prop, value);
    }
    for (const auto& c : el.children()) gather_facts(c, facts, precision);
}

bool is_reference_container(std::string_view tag) {
    return tag == "defs" || tag == "clipPath" || tag == "mask" || tag == "symbol" || tag == "pattern" ||
           tag == "marker" || tag == "linearGradient" || tag == "radialGradient" || tag == "filter";
}

class DefaultDropper {
public:
    DefaultDropper(const DocumentFacts& facts, int precision) : facts_(facts), precision_(precision) {}

    void run(SvgElement& root) {
        std::map<std::string, std::optional<std::string>> inherited;
        for (const auto& p : kPropertyDefaults) {
            if (p.inherited) inherited.emplace(p.name, canonical(p.value, p.kind, precision_));
        }
        visit(root, inherited, false);
    }

private:
    using Inherited = std::map<std::string, std::optional<std::string>>;

    void visit(SvgElement& el, const Inherited& parent, bool detached) {
        if (!el.is_element()) return;
        if (auto id = el.attr_text("id", core::kFullPrecision); id && facts_.use_targets.count(*id)) detached = true;

        std::set<std::string> styled;
        if (const AttrValue* style = el.find("style")) {
            for (const auto& d : core::parse_style(style->text(core::kFullPrecision))) styled.insert(d.first);
        }
        Inherited mine = parent;
        auto& attrs = el.attributes();
        std::vector<std::string> drop;
        for (const auto& a : attrs) {
            const std::string value = a.value.text(core::kFullPrecision);
            if (const PropertyDefault* p = property_default(a.name)) {
                const auto canon = canonical(value, p->kind, precision_);
                if (p->inherited) mine[a.name] = core::trim(value) == "inherit" ? parent.at(a.name) : canon;
                if (facts_.animated.count(a.name) || styled.count(a.name) || !canon) continue;
                const auto initial = canonical(p->value, p->kind, precision_);
                bool droppable;
                if (!p->inherited) droppable = canon == initial;
                else if (detached) droppable = canon == initial && !facts_.non_default.count(a.name);
                else droppable = canon == parent.at(a.name);
                if (droppable) drop.push_back(a.name);
            } else if (auto def = element_default(el, a.name)) {
                if (facts_.animated.count(a.name)) continue;
                const ValueKind kind = guess_kind(*def);
                const auto canon = canonical(value, kind, precision_);
                if (canon && canon == canonical(*def, kind, precision_)) drop.push_back(a.name);
            }
        }
        for (const auto& name : drop) el.erase(name);
        if (const AttrValue* style = el.find("style")) {
            const auto decls = core::parse_style(style->text(core::kFullPrecision));
            core::StyleDeclarations kept;
            for (const auto& [prop, value] : decls) {
                const PropertyDefault* p = property_default(prop);
                if (!p) {
                    kept.emplace_back(prop, value);
                    continue;
                }
                const auto canon = canonical(value, p->kind, precision_);
                if (p->inherited) mine[prop] = core::trim(value) == "inherit" ? parent.at(prop) : canon;
                const bool repeated = std::count_if(decls.begin(), decls.end(), [&](const auto& d) { return d.first == prop; }) > 1;
                // Without the declaration a same-named attribute would apply instead.
                bool droppable = canon && !facts_.animated.count(prop) && !repeated && !el.has(prop);
                if (droppable) {
                    const auto initial = canonical(p->value, p->kind, precision_);
                    if (!p->inherited) droppable = canon == initial;
                    else if (detached) droppable = canon == initial && !facts_.non_default.count(prop);
                    else droppable = canon == parent.at(prop);
                }
                if (!droppable) kept.emplace_back(prop, value);
            }
            if (kept.empty()) el.erase("style");
            else if (kept.size() != decls.size()) el.set("style", AttrValue::opaque(core::format_style(kept)));
        }

        const bool child_detached = detached || is_reference_container(el.tag());
        for (auto& c : el.children()) visit(c, mine, child_detached);
    }

    const DocumentFacts& facts_;
    int precision_;
};

} // namespace

SvgDocument simplify(const SvgDocument& doc, const SimplifyOptions& options) {
    SvgDocument out = doc;
    SvgElement& root = out.root;
    strip(root, true);

    for (int guard = 0; guard < 64; ++guard) {
        if (!prune_defs(root, references(root))) break;
    }
    drop_unreferenced_ids(root, references(root));

    DocumentFacts facts;
    gather_facts(root, facts, options.precision);
    DefaultDropper(facts, options.precision).run(root);

    if (!uses_xlink(root)) root.erase("xmlns:xlink");
    return out;
}

} // namespace svgkit::normalize
