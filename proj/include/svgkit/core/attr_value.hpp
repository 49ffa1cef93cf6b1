#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svgkit/core/color.hpp"
#include "svgkit/core/number.hpp"
#include "svgkit/core/path_data.hpp"
#include "svgkit/core/transform.hpp"

namespace svgkit::core {

struct NumberList {
    std::vector<double> values;
    bool operator==(const NumberList&) const = default;
};

/// Any value the library does not interpret; kept verbatim.
struct Opaque {
    std::string text;
    bool operator==(const Opaque&) const = default;
};

/// Attribute value with its source spelling and a typed interpretation chosen
/// from the attribute name. Values that fail their typed parse stay Opaque.
class AttrValue {
public:
    using Parsed = std::variant<NumberList, PathData, TransformList, Color, Opaque>;

    AttrValue() : parsed_(Opaque{}) {}

    /// Classifies `raw` according to the attribute `name`.
    static AttrValue parse(std::string_view name, std::string_view raw);

    static AttrValue numbers(std::vector<double> values);
    static AttrValue number(double value) { return numbers({value}); }
    static AttrValue path(PathData path);
    static AttrValue transform(TransformList list);
    static AttrValue color(std::string_view spelling);
    static AttrValue opaque(std::string text);

    const std::string& raw() const { return raw_; }
    const Parsed& parsed() const { return parsed_; }

    template <typename T>
    const T* as() const { return std::get_if<T>(&parsed_); }
    template <typename T>
    T* as() { return std::get_if<T>(&parsed_); }
    bool is_opaque() const { return std::holds_alternative<Opaque>(parsed_); }

    /// Serialized form: numeric kinds are re-printed at `precision`; colors
    /// and opaque values keep their source spelling.
    std::string text(int precision = 2) const;

    /// Single number, if this is a one-element NumberList.
    std::optional<double> single_number() const;

    bool operator==(const AttrValue& other) const { return parsed_ == other.parsed_; }

private:
    AttrValue(std::string raw, Parsed parsed) : raw_(std::move(raw)), parsed_(std::move(parsed)) {}

    std::string raw_;
    Parsed parsed_;
};

/// Attribute names whose values are interpreted as number lists.
bool is_numeric_attribute(std::string_view name);
bool is_color_attribute(std::string_view name);
bool is_transform_attribute(std::string_view name);

} // namespace svgkit::core
