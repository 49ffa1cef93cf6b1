#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "svgkit/tokenizer/vocab.hpp"

namespace svgkit::tokenizer {

/// The pretrained tokenizer the special vocabulary is layered on.
class BaseTokenizer {
public:
    virtual ~BaseTokenizer() = default;

    virtual std::vector<TokenId> encode(std::string_view text) const = 0;
    /// Throws UnknownId for ids outside the vocabulary.
    virtual std::string decode(const std::vector<TokenId>& ids) const = 0;
    /// One past the largest id.
    virtual TokenId vocab_size() const = 0;
    /// Readable form of one id, used for --pretty output.
    virtual std::string piece(TokenId id) const = 0;
};

/// Ids 0..255 are raw bytes.
class ByteTokenizer final : public BaseTokenizer {
public:
    std::vector<TokenId> encode(std::string_view text) const override;
    std::string decode(const std::vector<TokenId>& ids) const override;
    TokenId vocab_size() const override { return 256; }
    std::string piece(TokenId id) const override;
};

/// Greedy longest-match over a string->id vocabulary with "<0xNN>"
/// byte-fallback entries. Vocabularies written in the byte-to-unicode
/// alphabet (space shown as "Ġ") are detected and mapped back to bytes.
class VocabTokenizer final : public BaseTokenizer {
public:
    /// Throws TokenizerLoadError when some byte has no encoding or ids collide.
    explicit VocabTokenizer(const std::unordered_map<std::string, TokenId>& vocab);

    static VocabTokenizer from_json_file(const std::filesystem::path& path);
    static VocabTokenizer from_json_text(std::string_view json);

    std::vector<TokenId> encode(std::string_view text) const override;
    std::string decode(const std::vector<TokenId>& ids) const override;
    TokenId vocab_size() const override { return vocab_size_; }
    std::string piece(TokenId id) const override;

private:
    struct Node {
        std::unordered_map<unsigned char, int> next;
        TokenId id = -1;
    };

    void insert(const std::string& bytes, TokenId id);

    std::vector<Node> trie_;
    std::unordered_map<TokenId, std::string> bytes_of_;
    TokenId byte_fallback_[256];
    TokenId vocab_size_ = 0;
};

/// Row-major float32 matrix, row = token id.
struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<float> data;

    const float* row(std::size_t id) const { return data.data() + id * dim; }
    float* row(std::size_t id) { return data.data() + id * dim; }
};

/// Reads little-endian float32 values; `rows` fixes the row count and the
/// dimension follows from the file size.
EmbeddingMatrix read_embeddings(const std::filesystem::path& path, std::size_t rows);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix);

} // namespace svgkit::tokenizer
