#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svgkit::core {

/// Precision value meaning "shortest representation that round-trips".
inline constexpr int kFullPrecision = -1;

/// Rounds half away from zero at `precision` decimal places. Values that sit
/// within a few ulps of a decimal tie are treated as ties, so 1.005 rounds
/// to 1.01 even though its binary value is slightly below the tie.
double round_decimal(double value, int precision);

/// Formats a number with at most `precision` decimals and no trailing zeros.
/// Negative zero prints as "0". kFullPrecision selects shortest round-trip.
std::string format_number(double value, int precision = 2);

/// Cursor over SVG numeric microsyntax (number lists, path data, transforms).
class NumberScanner {
public:
    explicit NumberScanner(std::string_view text) : text_(text) {}

    void skip_ws();
    /// Skips whitespace and at most one comma.
    void skip_separator();
    /// Reads one number. Returns nullopt without consuming on failure.
    std::optional<double> number();
    /// Reads an arc flag: a single '0' or '1'.
    std::optional<bool> flag();
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void advance(std::size_t n = 1) { pos_ += n; }
    std::size_t pos() const { return pos_; }
    std::string_view rest() const { return text_.substr(pos_); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

/// Parses a whitespace/comma separated list of plain numbers.
std::optional<std::vector<double>> parse_number_list(std::string_view text);

std::string format_number_list(const std::vector<double>& values, int precision = 2);

/// Parses a full string as one number (surrounding whitespace allowed).
std::optional<double> parse_number(std::string_view text);

/// Splits off a trailing unit: "12.5px" -> {12.5, "px"}.
struct Length {
    double value = 0;
    std::string unit;
};
std::optional<Length> parse_length(std::string_view text);

/// Converts to user units. `percent_reference` is the length that 100%
/// stands for; em and ex assume a 16px font. Unknown units give nullopt.
std::optional<double> length_to_user(const Length& length, double percent_reference);

} // namespace svgkit::core
