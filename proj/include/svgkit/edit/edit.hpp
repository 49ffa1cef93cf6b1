#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "svgkit/core/document.hpp"

namespace svgkit::edit {

enum class EditKind { ColorEdit, AddStroke, Translate, Scale, Rotate, Flip, Transparency, Crop };
inline constexpr int kEditKindCount = 8;

std::string_view kind_name(EditKind kind);
/// Throws InvalidEditOp for unknown names.
EditKind kind_from_name(std::string_view name);

enum class FlipAxis { Horizontal, Vertical };
enum class CropRegion { LeftHalf, RightHalf, TopHalf, BottomHalf };

struct ColorEditParams {
    std::string from_hex;
    std::string to_hex;
};
struct AddStrokeParams {
    std::string color;
    double width = 1;
};
struct TranslateParams {
    double dx = 0, dy = 0;
    /// Clamp the offset so the drawn content stays on the canvas.
    bool bounded = false;
};
struct ScaleParams {
    double factor = 1;
};
struct RotateParams {
    double degrees = 0;
};
struct FlipParams {
    FlipAxis axis = FlipAxis::Horizontal;
};
struct TransparencyParams {
    double opacity = 1;
};
struct CropParams {
    CropRegion region = CropRegion::LeftHalf;
};

using EditParams = std::variant<ColorEditParams, AddStrokeParams, TranslateParams, ScaleParams, RotateParams,
                                FlipParams, TransparencyParams, CropParams>;

struct EditOp {
    EditParams params;

    EditKind kind() const { return static_cast<EditKind>(params.index()); }
    /// Throws InvalidEditOp when parameters are out of their domain.
    void validate() const;
    nlohmann::ordered_json params_json() const;
    static EditOp from_json(EditKind kind, const nlohmann::json& params);
};

/// Throws ColorNotFound, NoShapes or InvalidEditOp.
core::SvgDocument apply_edit(const core::SvgDocument& doc, const EditOp& op);

/// The fifteen base phrasings for a kind (a single format for ColorEdit).
const std::vector<std::string>& instruction_templates(EditKind kind);

/// Seeded pick from the kind's template pool followed by the parameters.
std::string make_instruction(const EditOp& op, std::uint64_t seed);

struct EditSample {
    std::string id;
    core::SvgDocument original;
    std::string instruction;
    core::SvgDocument edited;
    EditOp op;
    std::uint64_t seed = 0;

    /// {id, op_kind, params, instruction, original_svg, edited_svg}
    nlohmann::ordered_json to_json() const;
};

struct CorpusEntry {
    std::string id;
    core::SvgDocument doc;
};

struct SynthesisResult {
    std::vector<EditSample> samples;
    /// One message per sample that could not be produced.
    std::vector<std::string> skipped;
};

/// Per document: ops_per_doc samples whose kinds cycle through shuffled
/// rounds of all eight kinds. Parameter ranges: translate [-32, 32] (whole
/// units, bounded), scale [0.5, 1.5], rotate {90, 180, 270} or [-45, 45],
/// opacity [0.2, 0.8], stroke width [1, 4].
SynthesisResult synthesize_pairs(const std::vector<CorpusEntry>& corpus, int ops_per_doc, std::uint64_t seed);

/// One JSON object per line.
std::string to_jsonl(const std::vector<EditSample>& samples);

} // namespace svgkit::edit
