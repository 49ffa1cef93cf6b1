#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "svgkit/raster/metrics.hpp"
#include "svgkit/tokenizer/svg_tokenizer.hpp"

namespace svgkit::bench {

enum class Task { McqUnderstanding, Description, Edit, TextToSvg, ImageToSvg, TextToSani, VideoToSani };
enum class Domain { Icon, Illustration, Chemistry, Animation };

std::string_view task_name(Task t);
std::string_view domain_name(Domain d);
/// Throws ManifestSchemaError.
Task parse_task(std::string_view name);
Domain parse_domain(std::string_view name);

/// True for tasks whose predictions are SVG code.
bool produces_svg(Task t);

struct EvalItem {
    std::string id;
    Task task = Task::Edit;
    Domain domain = Domain::Icon;
    std::string prompt;
    /// SVG text, an answer letter, a PNG path, or (animation) a list of
    /// PNG frame paths. Paths are resolved against the manifest directory.
    std::vector<std::string> reference;
    bool reference_is_list = false;
    std::vector<std::string> media_paths;
    std::filesystem::path base_dir;
    std::optional<std::string> prediction;
};

/// JSONL with fields {id, task, domain, prompt, reference, media_paths?}.
/// Throws ManifestSchemaError (bad line, unknown field, duplicate id).
std::vector<EvalItem> parse_manifest(std::string_view jsonl, const std::filesystem::path& base_dir = {});
std::vector<EvalItem> load_manifest(const std::filesystem::path& path);

/// JSONL {id, output}. Throws ManifestSchemaError.
std::map<std::string, std::string> parse_predictions(std::string_view jsonl);
std::map<std::string, std::string> load_predictions(const std::filesystem::path& path);

/// Fills item predictions; returns ids present in `predictions` but not in
/// the manifest.
std::vector<std::string> attach_predictions(std::vector<EvalItem>& items,
                                            const std::map<std::string, std::string>& predictions);

/// First standalone option letter, optionally followed by a period.
std::optional<char> extract_choice(std::string_view prediction);

/// Accuracy in [0, 100]. Throws EmptyManifest.
double score_mcq(const std::vector<EvalItem>& items);

struct TokenStats {
    double special = 0;  // mean special-augmented count
    double base = 0;     // mean base-only count
};

/// Means over the predictions; an empty list gives zeros.
TokenStats count_tokens(const std::vector<std::string>& predictions, const tokenizer::SvgTokenizer& tokenizer);

struct FrameExport {
    std::vector<std::string> ref;   // relative to the frames directory
    std::vector<std::string> pred;
};

struct ItemResult {
    std::string id;
    /// Unset for tasks without a rendered output.
    std::optional<bool> renderable;
    std::map<std::string, double> scores;
    std::optional<std::size_t> tokens_special;
    std::optional<std::size_t> tokens_base;
    std::string note;
    /// Stored for unscored tasks so predictions can be judged elsewhere.
    std::optional<std::string> output;
    FrameExport frames;
};

struct MetricReport {
    Task task = Task::Edit;
    Domain domain = Domain::Icon;
    std::vector<ItemResult> items;  // sorted by id
    std::map<std::string, double> aggregate;
    std::optional<TokenStats> tokens;
};

struct ScoreOptions {
    int size = raster::kDefaultEvalSize;
    int frames = 8;
    std::vector<raster::Metric> metrics{raster::Metric::Ssim, raster::Metric::Psnr};
    /// Token columns are skipped when null.
    const tokenizer::SvgTokenizer* tokenizer = nullptr;
    /// When set, every rendered reference/prediction pair is written here as
    /// <id>/{ref,pred}_<k>.png.
    std::optional<std::filesystem::path> frames_dir;
};

/// Dispatches on the items' task; all items must share task and domain.
/// Throws EmptyManifest, FrameCountMismatch.
MetricReport score_items(const std::vector<EvalItem>& items, const ScoreOptions& options);

MetricReport score_pixels(const std::vector<EvalItem>& items, const ScoreOptions& options);
MetricReport score_animation(const std::vector<EvalItem>& items, const ScoreOptions& options);

/// One report per domain present in `items`, in domain order.
std::vector<MetricReport> run_benchmark(const std::vector<EvalItem>& items, const ScoreOptions& options);

struct AggregateTable {
    nlohmann::ordered_json json;
    std::string text;
};

/// Rows grouped by domain (icon, illustration, chemistry, animation), then
/// task order. Throws DuplicateKey.
AggregateTable aggregate_report(const std::vector<MetricReport>& reports);

nlohmann::ordered_json item_json(const MetricReport& report, const ItemResult& item);

/// Sorts items by id and recomputes the aggregate and token means from the
/// per-item values.
void finalize_report(MetricReport& report);

/// Rebuilds reports from a report directory's items.jsonl.
std::vector<MetricReport> load_reports(const std::filesystem::path& report_dir);

/// Writes aggregate.json, aggregate.txt, items.jsonl and, when frames were
/// exported, frames/manifest.json.
void write_report(const std::filesystem::path& out_dir, const std::vector<MetricReport>& reports,
                  const std::vector<EvalItem>& items, bool frames_exported);

} // namespace svgkit::bench
