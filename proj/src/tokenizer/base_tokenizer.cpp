#include "svgkit/tokenizer/base_tokenizer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "svgkit/error.hpp"

namespace svgkit::tokenizer {

namespace {

// GPT-2 style printable alphabet for raw bytes.
std::array<std::string, 256> byte_to_unicode() {
    std::array<std::string, 256> table;
    auto utf8 = [](unsigned cp) {
        std::string s;
        if (cp < 0x80) {
            s += static_cast<char>(cp);
        } else {
            s += static_cast<char>(0xC0 | (cp >> 6));
            s += static_cast<char>(0x80 | (cp & 0x3F));
        }
        return s;
    };
    unsigned extra = 0;
    for (unsigned b = 0; b < 256; ++b) {
        const bool printable = (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
        table[b] = utf8(printable ? b : 256 + extra++);
    }
    return table;
}

std::optional<int> parse_byte_token(const std::string& s) {
    if (s.size() != 6 || s.compare(0, 3, "<0x") != 0 || s[5] != '>') return std::nullopt;
    int v = 0;
    for (int i = 3; i < 5; ++i) {
        const char c = s[static_cast<std::size_t>(i)];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else return std::nullopt;
        v = v * 16 + d;
    }
    return v;
}

// Maps a byte-level vocabulary spelling back to raw bytes; nullopt when the
// string uses characters outside the alphabet.
std::optional<std::string> decode_byte_level(const std::string& s,
                                             const std::unordered_map<std::string, unsigned char>& inverse) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char lead = static_cast<unsigned char>(s[i]);
        const std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : 0;
        if (len == 0 || i + len > s.size()) return std::nullopt;
        auto it = inverse.find(s.substr(i, len));
        if (it == inverse.end()) return std::nullopt;
        out += static_cast<char>(it->second);
        i += len;
    }
    return out;
}

std::string hex_byte(unsigned char b) {
    static const char* digits = "0123456789ABCDEF";
    std::string s = "<0x";
    s += digits[b >> 4];
    s += digits[b & 0xF];
    s += '>';
    return s;
}

} // namespace

std::vector<TokenId> ByteTokenizer::encode(std::string_view text) const {
    std::vector<TokenId> ids;
    ids.reserve(text.size());
    for (unsigned char c : text) ids.push_back(c);
    return ids;
}

std::string ByteTokenizer::decode(const std::vector<TokenId>& ids) const {
    std::string out;
    out.reserve(ids.size());
    for (TokenId id : ids) {
        if (id < 0 || id > 255) throw UnknownId("byte tokenizer has no id " + std::to_string(id));
        out += static_cast<char>(id);
    }
    return out;
}

std::string ByteTokenizer::piece(TokenId id) const {
    if (id < 0 || id > 255) throw UnknownId("byte tokenizer has no id " + std::to_string(id));
    const auto c = static_cast<unsigned char>(id);
    if (c >= 0x20 && c < 0x7F) return std::string(1, static_cast<char>(c));
    return hex_byte(c);
}

VocabTokenizer::VocabTokenizer(const std::unordered_map<std::string, TokenId>& vocab) {
    std::fill(std::begin(byte_fallback_), std::end(byte_fallback_), TokenId{-1});
    trie_.emplace_back();

    // Byte-level vocabularies spell the space as "Ġ" and never contain " ".
    const bool byte_level = vocab.count("\xC4\xA0") && !vocab.count(" ");
    std::unordered_map<std::string, unsigned char> inverse;
    if (byte_level) {
        const auto table = byte_to_unicode();
        for (unsigned b = 0; b < 256; ++b) inverse.emplace(table[b], static_cast<unsigned char>(b));
    }

    // Sorted so that collisions resolve the same way on every run.
    std::vector<std::pair<std::string, TokenId>> entries(vocab.begin(), vocab.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [text, id] : entries) {
        if (id < 0) throw TokenizerLoadError("negative token id for '" + text + "'");
        if (bytes_of_.count(id)) throw TokenizerLoadError("duplicate token id " + std::to_string(id));
        vocab_size_ = std::max(vocab_size_, id + 1);
        if (auto b = parse_byte_token(text)) {
            byte_fallback_[*b] = id;
            bytes_of_.emplace(id, std::string(1, static_cast<char>(*b)));
            continue;
        }
        std::string bytes = text;
        if (byte_level) {
            auto decoded = decode_byte_level(text, inverse);
            if (!decoded) {
                bytes_of_.emplace(id, text);  // special entries such as <|endoftext|>
                continue;
            }
            bytes = *decoded;
        }
        if (bytes.empty()) continue;
        bytes_of_.emplace(id, bytes);
        insert(bytes, id);
    }
    for (unsigned b = 0; b < 256; ++b) {
        if (byte_fallback_[b] >= 0) continue;
        const auto& root = trie_[0];
        auto it = root.next.find(static_cast<unsigned char>(b));
        if (it == root.next.end() || trie_[static_cast<std::size_t>(it->second)].id < 0) {
            throw TokenizerLoadError("vocabulary cannot encode byte " + hex_byte(static_cast<unsigned char>(b)));
        }
    }
}

void VocabTokenizer::insert(const std::string& bytes, TokenId id) {
    int node = 0;
    for (unsigned char c : bytes) {
        auto it = trie_[static_cast<std::size_t>(node)].next.find(c);
        if (it == trie_[static_cast<std::size_t>(node)].next.end()) {
            trie_.emplace_back();
            const int created = static_cast<int>(trie_.size() - 1);
            trie_[static_cast<std::size_t>(node)].next.emplace(c, created);
            node = created;
        } else {
            node = it->second;
        }
    }
    auto& slot = trie_[static_cast<std::size_t>(node)].id;
    if (slot < 0) slot = id;  // first (lowest) id wins for duplicate spellings
}

VocabTokenizer VocabTokenizer::from_json_text(std::string_view json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw TokenizerLoadError(std::string("vocabulary is not valid JSON: ") + e.what());
    }
    // Accept both a bare {token: id} map and a tokenizer.json-style {"model": {"vocab": {...}}}.
    if (doc.is_object() && doc.contains("model") && doc["model"].is_object() && doc["model"].contains("vocab")) {
        doc = doc["model"]["vocab"];
    }
    if (!doc.is_object()) throw TokenizerLoadError("vocabulary JSON must be an object of token -> id");
    std::unordered_map<std::string, TokenId> vocab;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_number_integer()) throw TokenizerLoadError("id for '" + it.key() + "' is not an integer");
        vocab.emplace(it.key(), it.value().get<TokenId>());
    }
    return VocabTokenizer(vocab);
}

VocabTokenizer VocabTokenizer::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TokenizerLoadError("cannot open vocabulary " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::vector<TokenId> VocabTokenizer::encode(std::string_view text) const {
    std::vector<TokenId> ids;
    std::size_t pos = 0;
    while (pos < text.size()) {
        int node = 0;
        TokenId best = -1;
        std::size_t best_len = 0;
        for (std::size_t i = pos; i < text.size(); ++i) {
            const auto& next = trie_[static_cast<std::size_t>(node)].next;
            auto it = next.find(static_cast<unsigned char>(text[i]));
            if (it == next.end()) break;
            node = it->second;
            if (trie_[static_cast<std::size_t>(node)].id >= 0) {
                best = trie_[static_cast<std::size_t>(node)].id;
                best_len = i - pos + 1;
            }
        }
        if (best < 0) {
            best = byte_fallback_[static_cast<unsigned char>(text[pos])];
            best_len = 1;
        }
        ids.push_back(best);
        pos += best_len;
    }
    return ids;
}

std::string VocabTokenizer::decode(const std::vector<TokenId>& ids) const {
    std::string out;
    for (TokenId id : ids) {
        auto it = bytes_of_.find(id);
        if (it == bytes_of_.end()) throw UnknownId("base vocabulary has no id " + std::to_string(id));
        out += it->second;
    }
    return out;
}

std::string VocabTokenizer::piece(TokenId id) const {
    auto it = bytes_of_.find(id);
    if (it == bytes_of_.end()) throw UnknownId("base vocabulary has no id " + std::to_string(id));
    return it->second;
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path, std::size_t rows) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw TokenizerLoadError("cannot open embedding matrix " + path.string());
    const auto size = static_cast<std::size_t>(in.tellg());
    if (rows == 0 || size % (rows * sizeof(float)) != 0 || size == 0) {
        throw TokenizerLoadError("embedding file size " + std::to_string(size) + " is not a multiple of " +
                                 std::to_string(rows) + " float32 rows");
    }
    EmbeddingMatrix m;
    m.rows = rows;
    m.dim = size / (rows * sizeof(float));
    m.data.resize(rows * m.dim);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(m.data.data()), static_cast<std::streamsize>(size));
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : m.data) {
            auto bits = std::bit_cast<std::uint32_t>(v);
            bits = __builtin_bswap32(bits);
            v = std::bit_cast<float>(bits);
        }
    }
    return m;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TokenizerLoadError("cannot write " + path.string());
    for (float v : matrix.data) {
        auto bits = std::bit_cast<std::uint32_t>(v);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
        char buf[4];
        std::memcpy(buf, &bits, 4);
        out.write(buf, 4);
    }
}

} // namespace svgkit::tokenizer
