#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svgkit/core/attr_value.hpp"

namespace svgkit::core {

struct Attribute {
    std::string name;
    AttrValue value;

    bool operator==(const Attribute&) const = default;
};

/// A node of the SVG tree. Character data and comments are kept as child
/// nodes so mixed content (text with tspans) preserves its order.
class SvgElement {
public:
    enum class Kind { Element, Text, Comment };

    SvgElement() = default;
    explicit SvgElement(std::string tag) : tag_(std::move(tag)) { refresh_foreign(); }

    static SvgElement make_text(std::string text);
    static SvgElement make_comment(std::string text);

    Kind kind() const { return kind_; }
    bool is_element() const { return kind_ == Kind::Element; }
    const std::string& tag() const { return tag_; }
    void set_tag(std::string tag) {
        tag_ = std::move(tag);
        refresh_foreign();
    }
    /// True for namespaced or unrecognised element names.
    bool foreign() const { return foreign_; }

    const std::string& text() const { return text_; }
    void set_text(std::string text) { text_ = std::move(text); }

    const std::vector<Attribute>& attributes() const { return attributes_; }
    std::vector<Attribute>& attributes() { return attributes_; }
    const std::vector<SvgElement>& children() const { return children_; }
    std::vector<SvgElement>& children() { return children_; }

    const AttrValue* find(std::string_view name) const;
    AttrValue* find(std::string_view name);
    bool has(std::string_view name) const { return find(name) != nullptr; }
    /// Replaces in place when present, otherwise appends.
    void set(std::string_view name, AttrValue value);
    /// Parses `raw` as it would be at load time and stores it.
    void set_raw(std::string_view name, std::string_view raw);
    bool erase(std::string_view name);
    std::optional<std::string> attr_text(std::string_view name, int precision = kFullPrecision) const;

    SvgElement& append(SvgElement child);

    /// Pre-order visit of element nodes (this included).
    void visit(const std::function<void(const SvgElement&)>& fn) const;
    void visit(const std::function<void(SvgElement&)>& fn);

    bool operator==(const SvgElement&) const = default;

private:
    void refresh_foreign();

    Kind kind_ = Kind::Element;
    std::string tag_;
    bool foreign_ = false;
    std::string text_;
    std::vector<Attribute> attributes_;
    std::vector<SvgElement> children_;
};

struct SvgDocument {
    SvgElement root;
    std::size_t source_bytes_len = 0;

    bool operator==(const SvgDocument& other) const { return root == other.root; }
};

/// Element names the library understands (SVG 1.1 + SMIL subset).
bool is_known_tag(std::string_view tag);
/// Elements whose character data is significant.
bool is_text_content_tag(std::string_view tag);

/// Parses UTF-8 SVG text. Throws MalformedXml or NotSvg.
SvgDocument parse_svg(std::string_view text);

struct SerializeOptions {
    /// Decimal places for numeric values; kFullPrecision keeps every digit.
    int precision = 2;
};

std::string serialize_svg(const SvgDocument& doc, const SerializeOptions& options = {});
std::string serialize_element(const SvgElement& element, const SerializeOptions& options = {});

/// Equality after both trees are printed at `precision`.
bool structurally_equal(const SvgDocument& a, const SvgDocument& b, int precision = 2);

/// True iff the raster pipeline draws the document without error.
bool validate_renderable(const SvgDocument& doc);

/// Convenience: false on parse errors too.
bool validate_renderable(std::string_view text);

} // namespace svgkit::core
