#include "svgkit/core/style.hpp"

#include "svgkit/core/text_util.hpp"

namespace svgkit::core {

StyleDeclarations parse_style(std::string_view text) {
    StyleDeclarations out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view decl = trim(text.substr(start, end - start));
        start = end + 1;
        const auto colon = decl.find(':');
        if (colon == std::string_view::npos) continue;
        std::string_view value = trim(decl.substr(colon + 1));
        if (value.size() >= 10 && value.substr(value.size() - 10) == "!important") {
            value = trim(value.substr(0, value.size() - 10));
        }
        std::string_view prop = trim(decl.substr(0, colon));
        if (prop.empty()) continue;
        out.emplace_back(std::string(prop), std::string(value));
    }
    return out;
}

std::string format_style(const StyleDeclarations& decls) {
    std::string out;
    for (const auto& [prop, value] : decls) {
        if (!out.empty()) out += ';';
        out += prop;
        out += ':';
        out += value;
    }
    return out;
}

} // namespace svgkit::core
