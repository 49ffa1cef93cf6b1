#include "svgkit/core/document.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "svgkit/error.hpp"

namespace svgkit::core {

namespace {

constexpr std::array<std::string_view, 79> kKnownTags = {
    "a", "altGlyph", "animate", "animateColor", "animateMotion", "animateTransform",
    "circle", "clipPath", "cursor", "defs", "desc", "ellipse", "feBlend", "feColorMatrix",
    "feComponentTransfer", "feComposite", "feConvolveMatrix", "feDiffuseLighting",
    "feDisplacementMap", "feDistantLight", "feDropShadow", "feFlood", "feFuncA", "feFuncB",
    "feFuncG", "feFuncR", "feGaussianBlur", "feImage", "feMerge", "feMergeNode",
    "feMorphology", "feOffset", "fePointLight", "feSpecularLighting", "feSpotLight",
    "feTile", "feTurbulence", "filter", "font", "foreignObject", "g", "glyph", "hatch",
    "image", "line", "linearGradient", "marker", "mask", "metadata", "mpath", "path",
    "pattern", "polygon", "polyline", "radialGradient", "rect", "script", "set", "solidcolor",
    "stop", "style", "svg", "switch", "symbol", "text", "textPath", "title", "tref", "tspan",
    "use", "view", "missing-glyph", "font-face", "hkern", "vkern", "glyphRef", "color-profile",
    "meshgradient", "discard",
};

constexpr std::array<std::string_view, 7> kTextContentTags = {
    "text", "tspan", "textPath", "style", "title", "desc", "script",
};

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return is_name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

// Recursive-descent parser for the XML subset SVG files use.
class XmlParser {
public:
    explicit XmlParser(std::string_view text) : s_(text) {}

    SvgElement parse_document() {
        if (s_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos_ = 3;
        }
        skip_misc();
        if (at_end() || peek() != '<') {
            fail("expected root element");
        }
        SvgElement root = parse_element(0);
        skip_misc();
        if (!at_end()) {
            fail("content after root element");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw MalformedXml(what + " at offset " + std::to_string(pos_));
    }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
    bool starts_with(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    void skip_ws() {
        while (!at_end() && is_ws(s_[pos_])) ++pos_;
    }

    void expect(std::string_view p) {
        if (!starts_with(p)) {
            fail("expected '" + std::string(p) + "'");
        }
        pos_ += p.size();
    }

    std::string_view until(std::string_view terminator) {
        const auto end = s_.find(terminator, pos_);
        if (end == std::string_view::npos) {
            fail("unterminated construct, missing '" + std::string(terminator) + "'");
        }
        std::string_view body = s_.substr(pos_, end - pos_);
        pos_ = end + terminator.size();
        return body;
    }

    // Prolog and epilog: declarations, PIs, comments, doctype, whitespace.
    void skip_misc() {
        while (true) {
            skip_ws();
            if (starts_with("<?")) {
                pos_ += 2;
                until("?>");
            } else if (starts_with("<!--")) {
                pos_ += 4;
                until("-->");
            } else if (starts_with("<!DOCTYPE")) {
                pos_ += 9;
                while (!at_end() && peek() != '>') {
                    if (peek() == '[') {
                        fail("internal DTD subsets are not supported");
                    }
                    if (peek() == '"' || peek() == '\'') {
                        const char q = peek();
                        ++pos_;
                        until(std::string_view(&q, 1));
                        continue;
                    }
                    ++pos_;
                }
                expect(">");
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        const std::size_t start = pos_;
        if (at_end() || !is_name_start(static_cast<unsigned char>(peek()))) {
            fail("expected a name");
        }
        while (!at_end() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string decode(std::string_view raw, bool attribute) const {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const char c = raw[i];
            if (c == '<' && attribute) {
                throw MalformedXml("'<' in attribute value");
            }
            if (c != '&') {
                out += (attribute && (c == '\t' || c == '\n' || c == '\r')) ? ' ' : c;
                continue;
            }
            const auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) {
                throw MalformedXml("unterminated entity reference");
            }
            const std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "amp") out += '&';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (ent.size() > 1 && ent[0] == '#') {
                std::uint32_t cp = 0;
                const bool hex = ent[1] == 'x' || ent[1] == 'X';
                const std::string_view digits = ent.substr(hex ? 2 : 1);
                if (digits.empty()) {
                    throw MalformedXml("empty character reference");
                }
                for (char d : digits) {
                    int v = -1;
                    if (d >= '0' && d <= '9') v = d - '0';
                    else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
                    else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
                    if (v < 0) {
                        throw MalformedXml("bad character reference &" + std::string(ent) + ";");
                    }
                    cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                    if (cp > 0x10FFFF) {
                        throw MalformedXml("character reference out of range");
                    }
                }
                append_utf8(out, cp);
            } else {
                throw MalformedXml("undefined entity &" + std::string(ent) + ";");
            }
            i = semi;
        }
        return out;
    }

    // Expands fill/stroke/opacity from style="" into presentation attributes.
    static void expand_style(SvgElement& el, std::size_t style_index, const std::string& style) {
        std::vector<std::pair<std::string, std::string>> promoted;
        std::string remainder;
        std::size_t start = 0;
        while (start <= style.size()) {
            auto end = style.find(';', start);
            if (end == std::string::npos) end = style.size();
            std::string_view decl = trim(std::string_view(style).substr(start, end - start));
            start = end + 1;
            if (decl.empty()) continue;
            const auto colon = decl.find(':');
            if (colon == std::string_view::npos) {
                if (!remainder.empty()) remainder += ';';
                remainder += decl;
                continue;
            }
            std::string prop(trim(decl.substr(0, colon)));
            std::string_view value = trim(decl.substr(colon + 1));
            if (value.size() > 10 && value.substr(value.size() - 10) == "!important") {
                value = trim(value.substr(0, value.size() - 10));
            }
            if (prop == "fill" || prop == "stroke" || prop == "opacity") {
                promoted.emplace_back(prop, std::string(value));
            } else {
                if (!remainder.empty()) remainder += ';';
                remainder += prop;
                remainder += ':';
                remainder += value;
            }
        }
        auto& attrs = el.attributes();
        attrs.erase(attrs.begin() + static_cast<std::ptrdiff_t>(style_index));
        std::size_t insert_at = style_index;
        for (auto& [prop, value] : promoted) {
            auto it = std::find_if(attrs.begin(), attrs.end(),
                                   [&](const Attribute& a) { return a.name == prop; });
            if (it != attrs.end()) {
                it->value = AttrValue::parse(prop, value);
            } else {
                attrs.insert(attrs.begin() + static_cast<std::ptrdiff_t>(insert_at),
                             Attribute{prop, AttrValue::parse(prop, value)});
                ++insert_at;
            }
        }
        if (!remainder.empty()) {
            attrs.insert(attrs.begin() + static_cast<std::ptrdiff_t>(insert_at),
                         Attribute{"style", AttrValue::opaque(remainder)});
        }
    }

    SvgElement parse_element(int depth) {
        if (depth > 512) {
            fail("element nesting too deep");
        }
        expect("<");
        SvgElement el(parse_name());
        std::optional<std::size_t> style_index;
        while (true) {
            const std::size_t before = pos_;
            skip_ws();
            if (starts_with("/>")) {
                pos_ += 2;
                finish_style(el, style_index);
                return el;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (pos_ == before) {
                fail("expected whitespace between attributes");
            }
            std::string name = parse_name();
            skip_ws();
            expect("=");
            skip_ws();
            const char quote = peek();
            if (quote != '"' && quote != '\'') {
                fail("attribute value must be quoted");
            }
            ++pos_;
            std::string value = decode(until(std::string_view(&quote, 1)), true);
            if (el.has(name)) {
                fail("duplicate attribute '" + name + "'");
            }
            if (name == "style") {
                style_index = el.attributes().size();
                el.attributes().push_back({name, AttrValue::opaque(std::move(value))});
            } else {
                AttrValue parsed = AttrValue::parse(name, value);
                el.attributes().push_back({std::move(name), std::move(parsed)});
            }
        }
        finish_style(el, style_index);
        const bool keep_space = is_text_content_tag(el.tag());
        while (true) {
            if (at_end()) {
                fail("unclosed element <" + el.tag() + ">");
            }
            if (starts_with("</")) {
                pos_ += 2;
                const std::string close = parse_name();
                if (close != el.tag()) {
                    fail("mismatched closing tag </" + close + "> for <" + el.tag() + ">");
                }
                skip_ws();
                expect(">");
                return el;
            }
            if (starts_with("<!--")) {
                pos_ += 4;
                const std::string_view body = until("-->");
                el.append(SvgElement::make_comment(std::string(body)));
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                add_text(el, std::string(until("]]>")), keep_space);
            } else if (starts_with("<?")) {
                pos_ += 2;
                until("?>");
            } else if (peek() == '<') {
                el.append(parse_element(depth + 1));
            } else {
                const auto next = s_.find('<', pos_);
                const std::size_t end = next == std::string_view::npos ? s_.size() : next;
                std::string_view raw = s_.substr(pos_, end - pos_);
                pos_ = end;
                add_text(el, decode(raw, false), keep_space);
            }
        }
    }

    static void finish_style(SvgElement& el, const std::optional<std::size_t>& index) {
        if (!index) return;
        const std::string style = el.attributes()[*index].value.text();
        expand_style(el, *index, style);
    }

    static void add_text(SvgElement& el, std::string text, bool keep_space) {
        if (!keep_space && trim(text).empty()) {
            return;
        }
        auto& kids = el.children();
        if (!kids.empty() && kids.back().kind() == SvgElement::Kind::Text) {
            kids.back().set_text(kids.back().text() + text);
        } else {
            el.append(SvgElement::make_text(std::move(text)));
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

void escape_into(std::string& out, std::string_view text, bool attribute) {
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += attribute ? ">" : "&gt;"; break;
        case '"': out += attribute ? "&quot;" : "\""; break;
        default: out += c;
        }
    }
}

void serialize_into(std::string& out, const SvgElement& el, const SerializeOptions& opt) {
    switch (el.kind()) {
    case SvgElement::Kind::Text:
        escape_into(out, el.text(), false);
        return;
    case SvgElement::Kind::Comment:
        out += "<!--";
        out += el.text();
        out += "-->";
        return;
    case SvgElement::Kind::Element:
        break;
    }
    out += '<';
    out += el.tag();
    for (const auto& attr : el.attributes()) {
        out += ' ';
        out += attr.name;
        out += "=\"";
        escape_into(out, attr.value.text(opt.precision), true);
        out += '"';
    }
    if (el.children().empty()) {
        out += "/>";
        return;
    }
    out += '>';
    for (const auto& child : el.children()) {
        serialize_into(out, child, opt);
    }
    out += "</";
    out += el.tag();
    out += '>';
}

} // namespace

bool is_known_tag(std::string_view tag) {
    return std::find(kKnownTags.begin(), kKnownTags.end(), tag) != kKnownTags.end();
}

bool is_text_content_tag(std::string_view tag) {
    return std::find(kTextContentTags.begin(), kTextContentTags.end(), tag) !=
           kTextContentTags.end();
}

SvgElement SvgElement::make_text(std::string text) {
    SvgElement e;
    e.kind_ = Kind::Text;
    e.text_ = std::move(text);
    return e;
}

SvgElement SvgElement::make_comment(std::string text) {
    SvgElement e;
    e.kind_ = Kind::Comment;
    e.text_ = std::move(text);
    return e;
}

void SvgElement::refresh_foreign() { foreign_ = !is_known_tag(tag_); }

const AttrValue* SvgElement::find(std::string_view name) const {
    for (const auto& a : attributes_) {
        if (a.name == name) return &a.value;
    }
    return nullptr;
}

AttrValue* SvgElement::find(std::string_view name) {
    for (auto& a : attributes_) {
        if (a.name == name) return &a.value;
    }
    return nullptr;
}

void SvgElement::set(std::string_view name, AttrValue value) {
    if (auto* existing = find(name)) {
        *existing = std::move(value);
        return;
    }
    attributes_.push_back({std::string(name), std::move(value)});
}

void SvgElement::set_raw(std::string_view name, std::string_view raw) {
    set(name, AttrValue::parse(name, raw));
}

bool SvgElement::erase(std::string_view name) {
    auto it = std::find_if(attributes_.begin(), attributes_.end(),
                           [&](const Attribute& a) { return a.name == name; });
    if (it == attributes_.end()) return false;
    attributes_.erase(it);
    return true;
}

std::optional<std::string> SvgElement::attr_text(std::string_view name, int precision) const {
    if (const auto* v = find(name)) {
        return v->text(precision);
    }
    return std::nullopt;
}

SvgElement& SvgElement::append(SvgElement child) {
    children_.push_back(std::move(child));
    return children_.back();
}

void SvgElement::visit(const std::function<void(const SvgElement&)>& fn) const {
    if (!is_element()) return;
    fn(*this);
    for (const auto& c : children_) c.visit(fn);
}

void SvgElement::visit(const std::function<void(SvgElement&)>& fn) {
    if (!is_element()) return;
    fn(*this);
    for (auto& c : children_) c.visit(fn);
}

SvgDocument parse_svg(std::string_view text) {
    XmlParser parser(text);
    SvgDocument doc;
    doc.root = parser.parse_document();
    if (doc.root.tag() != "svg") {
        throw NotSvg("root element is <" + doc.root.tag() + ">, expected <svg>");
    }
    doc.source_bytes_len = text.size();
    return doc;
}

std::string serialize_element(const SvgElement& element, const SerializeOptions& options) {
    std::string out;
    serialize_into(out, element, options);
    return out;
}

std::string serialize_svg(const SvgDocument& doc, const SerializeOptions& options) {
    return serialize_element(doc.root, options);
}

bool structurally_equal(const SvgDocument& a, const SvgDocument& b, int precision) {
    SerializeOptions opt{precision};
    return serialize_svg(a, opt) == serialize_svg(b, opt);
}

} // namespace svgkit::core
