#include "svgkit/tokenizer/vocab.hpp"

#include "json.hpp"

namespace svgkit::tokenizer {

namespace {

struct Row {
    const char* group;
    std::vector<const char*> items;
};

const std::vector<Row>& tag_rows() {
    static const std::vector<Row> rows = {
        {"Root", {"svg", "defs", "use"}},
        {"Grouping", {"g"}},
        {"Shapes", {"path", "rect", "circle", "ellipse", "line", "polyline", "polygon"}},
        {"Text", {"text", "tspan", "textPath"}},
        {"Gradients", {"linearGradient", "radialGradient", "stop"}},
        {"Clipping", {"clipPath", "mask"}},
        {"Filters", {"filter", "feGaussianBlur", "feColorMatrix", "feComposite", "feBlend"}},
        {"Animation", {"animate", "animateMotion", "animateTransform"}},
    };
    return rows;
}

const std::vector<Row>& attribute_rows() {
    static const std::vector<Row> rows = {
        {"Geometry",
         {"width", "height", "viewBox", "x", "y", "x1", "y1", "x2", "y2", "cx", "cy", "r", "rx", "ry", "d",
          "points"}},
        {"Styling",
         {"fill", "stroke", "stroke-width", "stroke-linecap", "stroke-linejoin", "stroke-miterlimit", "fill-rule",
          "opacity"}},
        {"Transform", {"transform"}},
        {"Text", {"font-size", "font-family", "text-anchor"}},
        {"Gradients", {"gradientUnits", "gradientTransform", "offset", "stop-color"}},
        {"Animation", {"begin", "dur", "repeatCount", "from", "to", "rotate", "path"}},
        {"Identifiers", {"id", "class", "clip-path"}},
    };
    return rows;
}

} // namespace

std::string_view category_name(TokenCategory c) {
    switch (c) {
    case TokenCategory::Tag: return "tag";
    case TokenCategory::Attribute: return "attribute";
    case TokenCategory::Integer: return "integer";
    case TokenCategory::Fraction: return "fraction";
    }
    return "";
}

SpecialVocab::SpecialVocab(TokenId id_offset) : id_offset_(id_offset) {
    auto add = [this](std::string text, TokenCategory c, std::string group) {
        index_.emplace(text, tokens_.size());
        tokens_.push_back({std::move(text), c, std::move(group)});
    };
    for (const auto& row : tag_rows()) {
        for (const char* name : row.items) {
            add(std::string("<") + name, TokenCategory::Tag, row.group);
            add(std::string("</") + name + ">", TokenCategory::Tag, row.group);
        }
        if (std::string_view(row.group) == "Root") add("/>", TokenCategory::Tag, row.group);
    }
    for (const auto& row : attribute_rows()) {
        for (const char* name : row.items) add(std::string(name) + "=\"", TokenCategory::Attribute, row.group);
    }
    for (int v = -128; v <= 128; ++v) add(std::to_string(v), TokenCategory::Integer, "Integer");
    for (int d = 0; d <= 9; ++d) add("." + std::to_string(d), TokenCategory::Fraction, "OneDecimal");
    for (int d = 0; d <= 99; ++d) {
        std::string s = ".";
        s += static_cast<char>('0' + d / 10);
        s += static_cast<char>('0' + d % 10);
        add(s, TokenCategory::Fraction, "TwoDecimal");
    }
}

std::vector<const SpecialToken*> SpecialVocab::category(TokenCategory c) const {
    std::vector<const SpecialToken*> out;
    for (const auto& t : tokens_) {
        if (t.category == c) out.push_back(&t);
    }
    return out;
}

std::optional<TokenId> SpecialVocab::id_of(std::string_view text) const {
    auto it = index_.find(std::string(text));
    if (it == index_.end()) return std::nullopt;
    return id_offset_ + static_cast<TokenId>(it->second);
}

std::string SpecialVocab::manifest_json() const {
    nlohmann::ordered_json doc;
    doc["id_offset"] = id_offset_;
    doc["total"] = tokens_.size();
    nlohmann::ordered_json counts;
    nlohmann::ordered_json categories;
    for (auto c : {TokenCategory::Tag, TokenCategory::Attribute, TokenCategory::Integer, TokenCategory::Fraction}) {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            const auto& t = tokens_[i];
            if (t.category != c) continue;
            list.push_back({{"id", id_offset_ + static_cast<TokenId>(i)}, {"token", t.text}, {"group", t.group}});
        }
        counts[std::string(category_name(c))] = list.size();
        categories[std::string(category_name(c))] = std::move(list);
    }
    doc["counts"] = std::move(counts);
    doc["categories"] = std::move(categories);
    return doc.dump(2) + "\n";
}

SpecialVocab build_vocab(TokenId id_offset) { return SpecialVocab(id_offset); }

} // namespace svgkit::tokenizer
