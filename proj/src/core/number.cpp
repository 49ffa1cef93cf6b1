#include "svgkit/core/number.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace svgkit::core {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::array<double, 10> kPow10 = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};

} // namespace

double round_decimal(double value, int precision) {
    if (precision < 0 || !std::isfinite(value)) {
        return value;
    }
    const double scale = precision < static_cast<int>(kPow10.size()) ? kPow10[precision]
                                                                        : std::pow(10.0, precision);
    const double scaled = std::fabs(value) * scale;
    double whole = std::floor(scaled);
    const double frac = scaled - whole;
    // Tolerance absorbs representation error of decimal ties such as 1.005.
    const double eps = std::min(1e-9 * std::max(1.0, scaled), 1e-4);
    if (frac >= 0.5 - eps) {
        whole += 1.0;
    }
    const double result = whole / scale;
    return std::signbit(value) ? -result : result;
}

std::string format_number(double value, int precision) {
    if (precision < 0) {
        if (value == 0) {
            return "0";
        }
        std::array<char, 64> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
        return std::string(buf.data(), ptr);
    }
    double rounded = round_decimal(value, precision);
    if (rounded == 0) {
        return "0";
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), rounded,
                                   std::chars_format::fixed, precision);
    std::string out(buf.data(), ptr);
    if (out.find('.') != std::string::npos) {
        while (!out.empty() && out.back() == '0') {
            out.pop_back();
        }
        if (!out.empty() && out.back() == '.') {
            out.pop_back();
        }
    }
    return out;
}

void NumberScanner::skip_ws() {
    while (!at_end() && is_ws(text_[pos_])) {
        ++pos_;
    }
}

void NumberScanner::skip_separator() {
    skip_ws();
    if (!at_end() && text_[pos_] == ',') {
        ++pos_;
        skip_ws();
    }
}

std::optional<double> NumberScanner::number() {
    std::size_t p = pos_;
    const std::size_t start = p;
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
        ++p;
    }
    bool digits = false;
    while (p < text_.size() && is_digit(text_[p])) {
        ++p;
        digits = true;
    }
    if (p < text_.size() && text_[p] == '.') {
        std::size_t q = p + 1;
        bool frac_digits = false;
        while (q < text_.size() && is_digit(text_[q])) {
            ++q;
            frac_digits = true;
        }
        if (frac_digits || digits) {
            p = q;
            digits = digits || frac_digits;
        }
    }
    if (!digits) {
        return std::nullopt;
    }
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) {
            ++q;
        }
        if (q < text_.size() && is_digit(text_[q])) {
            while (q < text_.size() && is_digit(text_[q])) {
                ++q;
            }
            p = q;
        }
    }
    std::string_view token = text_.substr(start, p - start);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        // from_chars rejects forms like "5." on some libraries; fall back.
        std::string copy(token);
        char* end = nullptr;
        value = std::strtod(copy.c_str(), &end);
        if (end != copy.c_str() + copy.size()) {
            return std::nullopt;
        }
    }
    pos_ = p;
    return value;
}

std::optional<bool> NumberScanner::flag() {
    if (at_end()) {
        return std::nullopt;
    }
    char c = text_[pos_];
    if (c == '0' || c == '1') {
        ++pos_;
        return c == '1';
    }
    return std::nullopt;
}

std::optional<std::vector<double>> parse_number_list(std::string_view text) {
    NumberScanner scan(text);
    std::vector<double> values;
    scan.skip_ws();
    while (!scan.at_end()) {
        auto v = scan.number();
        if (!v) {
            return std::nullopt;
        }
        values.push_back(*v);
        scan.skip_separator();
    }
    return values;
}

std::string format_number_list(const std::vector<double>& values, int precision) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += ' ';
        }
        out += format_number(values[i], precision);
    }
    return out;
}

std::optional<double> parse_number(std::string_view text) {
    NumberScanner scan(text);
    scan.skip_ws();
    auto v = scan.number();
    scan.skip_ws();
    if (!v || !scan.at_end()) {
        return std::nullopt;
    }
    return v;
}

std::optional<Length> parse_length(std::string_view text) {
    NumberScanner scan(text);
    scan.skip_ws();
    auto v = scan.number();
    if (!v) {
        return std::nullopt;
    }
    std::string_view rest = scan.rest();
    while (!rest.empty() && is_ws(rest.back())) {
        rest.remove_suffix(1);
    }
    for (char c : rest) {
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '%')) {
            return std::nullopt;
        }
    }
    return Length{*v, std::string(rest)};
}

std::optional<double> length_to_user(const Length& length, double percent_reference) {
    const std::string& u = length.unit;
    const double v = length.value;
    if (u.empty() || u == "px") return v;
    if (u == "%") return v * percent_reference / 100.0;
    if (u == "pt") return v * 4.0 / 3.0;
    if (u == "pc") return v * 16.0;
    if (u == "mm") return v * 96.0 / 25.4;
    if (u == "cm") return v * 96.0 / 2.54;
    if (u == "in") return v * 96.0;
    if (u == "em") return v * 16.0;
    if (u == "ex") return v * 8.0;
    return std::nullopt;
}

} // namespace svgkit::core
