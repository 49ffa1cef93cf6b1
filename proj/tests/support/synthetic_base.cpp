#include "synthetic_base.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace svgkit::testing {

std::unordered_map<std::string, TokenId> synthetic_base_vocab() {
    std::unordered_map<std::string, TokenId> vocab;
    TokenId next = 0;
    auto add = [&](const std::string& s) {
        if (!s.empty() && vocab.emplace(s, next).second) ++next;
    };
    for (int b = 0; b < 256; ++b) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "<0x%02X>", b);
        add(buf);
    }
    for (char c = 0x20; c < 0x7F; ++c) add(std::string(1, c));
    add("\n");
    for (char a = 'a'; a <= 'z'; ++a) {
        for (char b = 'a'; b <= 'z'; ++b) add(std::string{a, b});
    }
    static const char* words[] = {
        "svg", "path", "rect", "circle", "ellipse", "line", "polyline", "polygon", "fill", "stroke", "width",
        "height", "view", "Box", "xmlns", "xlink", "href", "http", "www", "w3", "org", "version", "transform",
        "translate", "rotate", "scale", "matrix", "opacity", "linear", "radial", "Gradient", "stop", "offset",
        "color", "points", "rule", "linecap", "linejoin", "round", "none", "defs", "use", "symbol", "clip",
        "mask", "group", "animate", "Transform", "Motion", "attribute", "Name", "begin", "dur", "repeat",
        "Count", "from", "to", "values", "key", "Times", "id", "class", "style", "text", "span", "font",
        "size", "family", "anchor", "the", "and", "of", "a", "in", "is", "with", "for", "on", "this", "that",
        "icon", "shape", "graphic", "image", "color", "red", "blue", "green", "black", "white", "gold",
        "orange", "navy", "teal", "evenodd", "nonzero", "miter", "butt", "square", "inherit", "xml",
        "encoding", "UTF", "preserve", "space", "title", "desc", "metadata", "cx", "cy", "rx", "ry", "x1",
        "y1", "x2", "y2", "fx", "fy", "dx", "dy", "units", "user", "Space", "On", "Use", "object", "Bounding",
    };
    for (const char* w : words) {
        add(w);
        add(std::string(" ") + w);
    }
    static const char* punct[] = {"=\"", "\" ", "\"/>", "/>", "</", "\">", "><", ">\n", "  ", "    ", "\"#",
                                  ":\"", "=\"#", "=\"M", "px", "#", "\n  ", "\n    ", "<?", "?>", "://",
                                  "/2000", "/svg", ";", ":", ".", ",", " ", "(", ")", "url(#"};
    for (const char* p : punct) add(p);
    return vocab;
}

std::string synthetic_base_vocab_json() {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [text, id] : synthetic_base_vocab()) j[text] = id;
    return j.dump();
}

tokenizer::EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t dim, std::uint64_t seed) {
    tokenizer::EmbeddingMatrix m;
    m.rows = rows;
    m.dim = dim;
    m.data.resize(rows * dim);
    std::uint64_t s = seed;
    for (auto& v : m.data) {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        v = static_cast<float>(static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0);
    }
    return m;
}

std::vector<TokenId> naive_greedy_encode(const std::unordered_map<std::string, TokenId>& vocab,
                                         const std::string& text) {
    std::size_t longest = 0;
    for (const auto& [s, _] : vocab) longest = std::max(longest, s.size());
    std::vector<TokenId> ids;
    std::size_t pos = 0;
    while (pos < text.size()) {
        bool matched = false;
        for (std::size_t len = std::min(longest, text.size() - pos); len > 0; --len) {
            auto it = vocab.find(text.substr(pos, len));
            // "<0xNN>" entries stand for single bytes, not their spelling.
            if (it != vocab.end() && !(it->first.size() == 6 && it->first.rfind("<0x", 0) == 0)) {
                ids.push_back(it->second);
                pos += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "<0x%02X>", static_cast<unsigned char>(text[pos]));
            ids.push_back(vocab.at(buf));
            ++pos;
        }
    }
    return ids;
}

} // namespace svgkit::testing
