#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace svgkit::tokenizer {

using TokenId = std::int64_t;

enum class TokenCategory { Tag, Attribute, Integer, Fraction };

std::string_view category_name(TokenCategory c);

struct SpecialToken {
    std::string text;
    TokenCategory category;
    std::string group;  // row of the inventory, e.g. "Shapes", "Styling"
};

inline constexpr std::size_t kTagTokenCount = 55;
inline constexpr std::size_t kAttributeTokenCount = 42;
inline constexpr std::size_t kIntegerTokenCount = 257;
inline constexpr std::size_t kFractionTokenCount = 110;
inline constexpr std::size_t kSpecialTokenCount =
    kTagTokenCount + kAttributeTokenCount + kIntegerTokenCount + kFractionTokenCount;

/// The fixed special-token inventory. Token k (in inventory order) gets id
/// id_offset + k, where id_offset is normally the base vocabulary size.
class SpecialVocab {
public:
    explicit SpecialVocab(TokenId id_offset = 0);

    TokenId id_offset() const { return id_offset_; }
    std::size_t size() const { return tokens_.size(); }
    const std::vector<SpecialToken>& tokens() const { return tokens_; }
    std::vector<const SpecialToken*> category(TokenCategory c) const;

    std::optional<TokenId> id_of(std::string_view text) const;
    bool contains(std::string_view text) const { return index_.count(std::string(text)) > 0; }
    bool owns(TokenId id) const { return id >= id_offset_ && id < id_offset_ + static_cast<TokenId>(size()); }
    /// Precondition: owns(id).
    const SpecialToken& token(TokenId id) const { return tokens_[static_cast<std::size_t>(id - id_offset_)]; }

    /// Manifest JSON: tokens grouped by category with their ids.
    std::string manifest_json() const;

private:
    TokenId id_offset_;
    std::vector<SpecialToken> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

SpecialVocab build_vocab(TokenId id_offset = 0);

} // namespace svgkit::tokenizer
