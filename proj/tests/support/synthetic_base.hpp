#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "svgkit/tokenizer/base_tokenizer.hpp"

namespace svgkit::testing {

using tokenizer::TokenId;

/// Subword vocabulary standing in for a pretrained tokenizer: 256 byte
/// fallbacks, printable characters, letter pairs, common English and SVG
/// words with and without a leading space, and markup punctuation. Digits
/// stay single characters, as in tokenizers that split numbers digit-wise.
std::unordered_map<std::string, TokenId> synthetic_base_vocab();
std::string synthetic_base_vocab_json();

/// Row-major matrix with entries uniform in [-1, 1).
tokenizer::EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t dim, std::uint64_t seed);

/// Reference longest-match encoder: tries every length from the longest
/// entry down. Slow, for checking VocabTokenizer.
std::vector<TokenId> naive_greedy_encode(const std::unordered_map<std::string, TokenId>& vocab,
                                         const std::string& text);

} // namespace svgkit::testing
