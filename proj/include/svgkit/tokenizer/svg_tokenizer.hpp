#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "svgkit/tokenizer/base_tokenizer.hpp"
#include "svgkit/tokenizer/vocab.hpp"

namespace svgkit::tokenizer {

/// A base tokenizer extended with the special vocabulary. Special ids start
/// at base.vocab_size().
class SvgTokenizer {
public:
    /// `base` must outlive the tokenizer.
    explicit SvgTokenizer(const BaseTokenizer& base);

    const BaseTokenizer& base() const { return *base_; }
    const SpecialVocab& vocab() const { return vocab_; }
    TokenId total_size() const { return vocab_.id_offset() + static_cast<TokenId>(vocab_.size()); }

    /// Special-augmented encoding. Never longer than encode_base_only.
    std::vector<TokenId> encode(std::string_view text) const;
    std::vector<TokenId> encode_base_only(std::string_view text) const { return base_->encode(text); }
    /// Throws UnknownId.
    std::string decode(const std::vector<TokenId>& ids) const;
    /// Display form of each id, one string per id.
    std::vector<std::string> pieces(const std::vector<TokenId>& ids) const;

private:
    std::vector<TokenId> encode_greedy(std::string_view text) const;

    struct Node {
        std::array<int, 128> next;
        int token = -1;  // index into vocab_.tokens()
        Node() { next.fill(-1); }
    };

    const BaseTokenizer* base_;
    SpecialVocab vocab_;
    std::vector<Node> trie_;  // tag and attribute tokens
};

struct CompressionStats {
    std::size_t files = 0;
    double mean_before = 0;
    double mean_after = 0;
    /// mean over files of after / before
    double mean_ratio = 0;
    /// Per-file ratio counts, bins [0,0.1), ..., [0.9,1.0), then ratio >= 1.
    std::array<std::size_t, 11> ratio_histogram{};
    std::vector<std::size_t> before;
    std::vector<std::size_t> after;
};

/// Throws EmptyCorpus.
CompressionStats compression_stats(const std::vector<std::string>& corpus, const SvgTokenizer& tokenizer);

struct EmbeddingInit {
    TokenId id = 0;
    std::string token;
    std::vector<TokenId> subword_ids;
    std::vector<float> vector;
};

/// Mean of the base embeddings of each special token's base decomposition.
/// Throws EmptyDecomposition, or UnknownId when a subword id has no row.
std::vector<EmbeddingInit> init_embeddings(const SvgTokenizer& tokenizer, const EmbeddingMatrix& base_embedding);

/// Writes the new rows (in vocabulary order) as a float32 matrix and a JSON
/// index next to it (same stem, ".json").
void write_embedding_init(const std::filesystem::path& out_bin, const std::vector<EmbeddingInit>& rows);

} // namespace svgkit::tokenizer
