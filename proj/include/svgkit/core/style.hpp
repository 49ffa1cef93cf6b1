#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svgkit::core {

using StyleDeclarations = std::vector<std::pair<std::string, std::string>>;

/// Splits "a:b; c:d" into trimmed (property, value) pairs. Declarations
/// without a colon are dropped and "!important" is stripped.
StyleDeclarations parse_style(std::string_view text);

std::string format_style(const StyleDeclarations& decls);

} // namespace svgkit::core
