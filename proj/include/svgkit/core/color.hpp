#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace svgkit::core {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// A paint or color value as written in fill/stroke/stop-color.
struct Color {
    enum class Kind { None, CurrentColor, Rgb, Url };

    Kind kind = Kind::Rgb;
    Rgb rgb;
    /// Alpha from rgba()/#rrggbbaa/transparent forms, in [0,1].
    double alpha = 1.0;
    /// Fragment id for Kind::Url (without '#').
    std::string url;
    /// Optional fallback after a url reference ("url(#g) red").
    std::optional<Rgb> fallback;
    bool fallback_none = false;

    bool operator==(const Color&) const = default;
};

/// Throws ColorSyntaxError for unrecognised input.
Color parse_color(std::string_view text);
std::optional<Color> try_parse_color(std::string_view text);

/// "#rrggbb" in lower case.
std::string to_hex(Rgb rgb);

/// Looks up a CSS color keyword (case-insensitive).
std::optional<Rgb> named_color(std::string_view name);

} // namespace svgkit::core
