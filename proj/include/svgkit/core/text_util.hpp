#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace svgkit::core {

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each part and dropping empty parts.
std::vector<std::string> split(std::string_view text, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

} // namespace svgkit::core
