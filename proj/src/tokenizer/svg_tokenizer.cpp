#include "svgkit/tokenizer/svg_tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "svgkit/error.hpp"

namespace svgkit::tokenizer {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

bool is_path_command(char c) {
    switch (c) {
    case 'M': case 'm': case 'L': case 'l': case 'H': case 'h': case 'V': case 'v':
    case 'C': case 'c': case 'S': case 's': case 'Q': case 'q': case 'T': case 't':
    case 'A': case 'a': case 'Z': case 'z':
        return true;
    default:
        return false;
    }
}

// Marks bytes inside d="..." and path="..." values.
std::vector<bool> path_value_mask(std::string_view text) {
    std::vector<bool> mask(text.size(), false);
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != '=' || (text[i + 1] != '"' && text[i + 1] != '\'')) continue;
        std::size_t name_end = i;
        std::size_t name_start = name_end;
        while (name_start > 0 && is_name_char(text[name_start - 1])) --name_start;
        const auto name = text.substr(name_start, name_end - name_start);
        if (name != "d" && name != "path") continue;
        const char quote = text[i + 1];
        std::size_t j = i + 2;
        while (j < text.size() && text[j] != quote) mask[j++] = true;
        i = j;
    }
    return mask;
}

struct Literal {
    std::size_t length = 0;
    std::string_view sign, integer, fraction;
};

Literal scan_literal(std::string_view text, std::size_t pos) {
    Literal lit;
    std::size_t i = pos;
    if (i < text.size() && text[i] == '-') ++i;
    const std::size_t int_start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    const std::size_t int_end = i;
    std::size_t frac_end = i;
    if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
        frac_end = i + 1;
        while (frac_end < text.size() && is_digit(text[frac_end])) ++frac_end;
    }
    if (int_end == int_start && frac_end == int_end) return lit;
    lit.length = frac_end - pos;
    lit.sign = text.substr(pos, int_start - pos);
    lit.integer = text.substr(int_start, int_end - int_start);
    lit.fraction = text.substr(int_end, frac_end - int_end);
    return lit;
}

} // namespace

SvgTokenizer::SvgTokenizer(const BaseTokenizer& base) : base_(&base), vocab_(base.vocab_size()) {
    trie_.emplace_back();
    const auto& tokens = vocab_.tokens();
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const auto& t = tokens[k];
        if (t.category != TokenCategory::Tag && t.category != TokenCategory::Attribute) continue;
        int node = 0;
        for (char c : t.text) {
            const auto uc = static_cast<unsigned char>(c);
            if (trie_[static_cast<std::size_t>(node)].next[uc] < 0) {
                trie_.emplace_back();
                trie_[static_cast<std::size_t>(node)].next[uc] = static_cast<int>(trie_.size() - 1);
            }
            node = trie_[static_cast<std::size_t>(node)].next[uc];
        }
        trie_[static_cast<std::size_t>(node)].token = static_cast<int>(k);
    }
}

std::vector<TokenId> SvgTokenizer::encode_greedy(std::string_view text) const {
    std::vector<TokenId> out;
    std::string pending;
    auto flush = [&] {
        if (pending.empty()) return;
        const auto ids = base_->encode(pending);
        out.insert(out.end(), ids.begin(), ids.end());
        pending.clear();
    };
    auto special = [&](std::string_view s) {
        flush();
        out.push_back(*vocab_.id_of(s));
    };

    const auto in_path = path_value_mask(text);
    const auto& tokens = vocab_.tokens();
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const char prev = i > 0 ? text[i - 1] : '\0';

        int best = -1;
        std::size_t best_len = 0;
        int node = 0;
        for (std::size_t j = i; j < text.size(); ++j) {
            const auto uc = static_cast<unsigned char>(text[j]);
            if (uc >= 128) break;
            node = trie_[static_cast<std::size_t>(node)].next[uc];
            if (node < 0) break;
            if (trie_[static_cast<std::size_t>(node)].token >= 0) {
                best = trie_[static_cast<std::size_t>(node)].token;
                best_len = j - i + 1;
            }
        }
        // Attribute tokens only start at a name boundary, so x=" is not split out of dx=".
        if (best >= 0 && tokens[static_cast<std::size_t>(best)].category == TokenCategory::Attribute &&
            i > 0 && is_name_char(prev)) {
            best = -1;
        }
        if (best >= 0) {
            special(tokens[static_cast<std::size_t>(best)].text);
            i += best_len;
            continue;
        }

        if (c == '-' || c == '.' || is_digit(c)) {
            bool gated = i == 0 || std::isspace(static_cast<unsigned char>(prev)) || prev == ',' || prev == '"' ||
                         prev == '\'' || prev == '(' || prev == ';' || prev == ':';
            if (!gated && in_path[i]) {
                gated = is_path_command(prev) || (c == '-' && (is_digit(prev) || prev == '.')) ||
                        (c == '.' && is_digit(prev));
            }
            const Literal lit = gated ? scan_literal(text, i) : Literal{};
            if (lit.length > 0) {
                const std::string int_text = std::string(lit.sign) + std::string(lit.integer);
                const bool frac_ok = lit.fraction.empty() || vocab_.contains(lit.fraction);
                if (!lit.integer.empty() && frac_ok && vocab_.contains(int_text)) {
                    special(int_text);
                    if (!lit.fraction.empty()) special(lit.fraction);
                } else if (lit.integer == "0" && !lit.sign.empty() && frac_ok) {
                    pending += lit.sign;
                    special(lit.integer);
                    if (!lit.fraction.empty()) special(lit.fraction);
                } else if (lit.integer.empty() && frac_ok) {
                    pending += lit.sign;
                    special(lit.fraction);
                } else {
                    pending.append(text.substr(i, lit.length));
                }
                i += lit.length;
                continue;
            }
        }
        pending += c;
        ++i;
    }
    flush();
    return out;
}

std::vector<TokenId> SvgTokenizer::encode(std::string_view text) const {
    auto augmented = encode_greedy(text);
    auto base_only = base_->encode(text);
    // Splitting at special-token boundaries can cost a subword tokenizer a
    // merge or two; keep whichever sequence is shorter.
    return augmented.size() <= base_only.size() ? augmented : base_only;
}

std::string SvgTokenizer::decode(const std::vector<TokenId>& ids) const {
    std::string out;
    std::vector<TokenId> run;
    auto flush = [&] {
        if (run.empty()) return;
        out += base_->decode(run);
        run.clear();
    };
    for (TokenId id : ids) {
        if (vocab_.owns(id)) {
            flush();
            out += vocab_.token(id).text;
        } else if (id >= 0 && id < vocab_.id_offset()) {
            run.push_back(id);
        } else {
            throw UnknownId("token id " + std::to_string(id) + " is outside the vocabulary");
        }
    }
    flush();
    return out;
}

std::vector<std::string> SvgTokenizer::pieces(const std::vector<TokenId>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (TokenId id : ids) {
        if (vocab_.owns(id)) out.push_back(vocab_.token(id).text);
        else if (id >= 0 && id < vocab_.id_offset()) out.push_back(base_->piece(id));
        else throw UnknownId("token id " + std::to_string(id) + " is outside the vocabulary");
    }
    return out;
}

CompressionStats compression_stats(const std::vector<std::string>& corpus, const SvgTokenizer& tokenizer) {
    if (corpus.empty()) throw EmptyCorpus("compression statistics need at least one file");
    CompressionStats stats;
    stats.files = corpus.size();
    double sum_before = 0, sum_after = 0, sum_ratio = 0;
    for (const auto& text : corpus) {
        const std::size_t before = tokenizer.encode_base_only(text).size();
        const std::size_t after = tokenizer.encode(text).size();
        stats.before.push_back(before);
        stats.after.push_back(after);
        sum_before += static_cast<double>(before);
        sum_after += static_cast<double>(after);
        const double ratio = before == 0 ? 1.0 : static_cast<double>(after) / static_cast<double>(before);
        sum_ratio += ratio;
        const auto bin = ratio >= 1.0 ? 10 : static_cast<std::size_t>(std::floor(ratio * 10));
        ++stats.ratio_histogram[std::min<std::size_t>(bin, 10)];
    }
    const auto n = static_cast<double>(corpus.size());
    stats.mean_before = sum_before / n;
    stats.mean_after = sum_after / n;
    stats.mean_ratio = sum_ratio / n;
    return stats;
}

std::vector<EmbeddingInit> init_embeddings(const SvgTokenizer& tokenizer, const EmbeddingMatrix& base_embedding) {
    const auto& vocab = tokenizer.vocab();
    std::vector<EmbeddingInit> rows;
    rows.reserve(vocab.size());
    for (std::size_t k = 0; k < vocab.size(); ++k) {
        EmbeddingInit init;
        init.id = vocab.id_offset() + static_cast<TokenId>(k);
        init.token = vocab.tokens()[k].text;
        init.subword_ids = tokenizer.encode_base_only(init.token);
        if (init.subword_ids.empty()) throw EmptyDecomposition("base tokenizer returned no ids for '" + init.token + "'");
        std::vector<double> sum(base_embedding.dim, 0.0);
        for (TokenId id : init.subword_ids) {
            if (id < 0 || static_cast<std::size_t>(id) >= base_embedding.rows) {
                throw UnknownId("no embedding row for base id " + std::to_string(id));
            }
            const float* row = base_embedding.row(static_cast<std::size_t>(id));
            for (std::size_t d = 0; d < base_embedding.dim; ++d) sum[d] += row[d];
        }
        init.vector.resize(base_embedding.dim);
        const auto n = static_cast<double>(init.subword_ids.size());
        for (std::size_t d = 0; d < base_embedding.dim; ++d) init.vector[d] = static_cast<float>(sum[d] / n);
        rows.push_back(std::move(init));
    }
    return rows;
}

void write_embedding_init(const std::filesystem::path& out_bin, const std::vector<EmbeddingInit>& rows) {
    EmbeddingMatrix m;
    m.rows = rows.size();
    m.dim = rows.empty() ? 0 : rows.front().vector.size();
    for (const auto& r : rows) m.data.insert(m.data.end(), r.vector.begin(), r.vector.end());
    write_embeddings(out_bin, m);

    nlohmann::ordered_json index;
    index["rows"] = m.rows;
    index["dim"] = m.dim;
    index["dtype"] = "float32-le";
    auto& list = index["tokens"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        nlohmann::ordered_json e;
        e["row"] = k;
        e["id"] = rows[k].id;
        e["token"] = rows[k].token;
        e["subword_ids"] = rows[k].subword_ids;
        list.push_back(std::move(e));
    }
    auto json_path = out_bin;
    json_path.replace_extension(".json");
    std::ofstream out(json_path);
    if (!out) throw TokenizerLoadError("cannot write " + json_path.string());
    out << index.dump(2) << "\n";
}

} // namespace svgkit::tokenizer
