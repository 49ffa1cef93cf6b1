#include "svgkit/bench/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "svgkit/core/text_util.hpp"
#include "svgkit/error.hpp"
#include "svgkit/raster/animation.hpp"

namespace svgkit::bench {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTaskNames[] = {"mcq",         "description",  "edit",         "text_to_svg",
                                           "image_to_svg", "text_to_sani", "video_to_sani"};
constexpr std::string_view kDomainNames[] = {"icon", "illustration", "chemistry", "animation"};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestSchemaError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

template <typename Fn>
void for_each_line(std::string_view jsonl, Fn fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= jsonl.size()) {
        auto end = jsonl.find('\n', pos);
        if (end == std::string_view::npos) end = jsonl.size();
        ++line_no;
        const auto line = core::trim(jsonl.substr(pos, end - pos));
        if (!line.empty()) {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception& e) {
                throw ManifestSchemaError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
            }
            if (!j.is_object()) throw ManifestSchemaError("line " + std::to_string(line_no) + ": not a JSON object");
            fn(j, line_no);
        }
        pos = end + 1;
    }
}

std::string require_string(const json& j, const char* key, std::size_t line) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ManifestSchemaError("line " + std::to_string(line) + ": field '" + key + "' must be a string");
    }
    return j[key].get<std::string>();
}

// Directory name for an item: the id itself when it is filesystem-safe,
// otherwise a sanitized form plus a hash of the id.
std::string frame_dir_name(const std::string& id) {
    std::string safe;
    bool changed = id.empty() || id == "." || id == "..";
    for (char c : id) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
            safe += c;
        } else {
            safe += '_';
            changed = true;
        }
    }
    if (!changed) return safe;
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : id) h = (h ^ c) * 1099511628211ULL;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return safe + "-" + buf;
}

bool looks_like_svg(std::string_view text) {
    const auto t = core::trim(text);
    return !t.empty() && t.front() == '<';
}

raster::RenderOptions render_options(const ScoreOptions& o) {
    raster::RenderOptions r;
    r.size = o.size;
    return r;
}

void check_uniform(const std::vector<EvalItem>& items) {
    if (items.empty()) throw EmptyManifest("manifest has no items");
    for (const auto& it : items) {
        if (it.task != items.front().task || it.domain != items.front().domain) {
            throw ManifestSchemaError("items of one report must share task and domain");
        }
    }
}

MetricReport new_report(const std::vector<EvalItem>& items) {
    MetricReport r;
    r.task = items.front().task;
    r.domain = items.front().domain;
    return r;
}

void add_tokens(ItemResult& res, const EvalItem& item, const ScoreOptions& o) {
    if (!o.tokenizer || !produces_svg(item.task)) return;
    const std::string text = item.prediction.value_or("");
    res.tokens_special = o.tokenizer->encode(text).size();
    res.tokens_base = o.tokenizer->encode_base_only(text).size();
}

// Writes frames for one side and returns their paths relative to frames_dir.
std::vector<std::string> export_frames(const ScoreOptions& o, const std::string& id, const char* side,
                                       const std::vector<const raster::RasterImage*>& frames) {
    std::vector<std::string> paths;
    if (!o.frames_dir) return paths;
    const std::string dir = frame_dir_name(id);
    fs::create_directories(*o.frames_dir / dir);
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const std::string rel = dir + "/" + side + "_" + std::to_string(k) + ".png";
        raster::write_png(*frames[k], *o.frames_dir / rel);
        paths.push_back(rel);
    }
    return paths;
}

raster::RasterImage load_reference_image(const EvalItem& item, const std::string& path) {
    const auto img = raster::read_png(item.base_dir / path);
    if (img.width != img.height) {
        throw DimensionMismatch("reference image " + path + " for item " + item.id + " is not square");
    }
    return img;
}

// Static tasks: one frame per side. Metrics are skipped when `with_metrics`
// is false (generation tasks scored by the neural sidecar).
MetricReport score_static(const std::vector<EvalItem>& items, const ScoreOptions& o, bool with_metrics) {
    check_uniform(items);
    MetricReport report = new_report(items);
    for (const auto& item : items) {
        ItemResult res;
        res.id = item.id;
        auto opts = render_options(o);

        std::optional<raster::RasterImage> ref;
        if (item.reference_is_list) {
            if (item.reference.size() != 1) throw ManifestSchemaError("item " + item.id + ": expected one reference");
        }
        const std::string ref_text = item.reference.empty() ? std::string() : item.reference.front();
        if (looks_like_svg(ref_text)) {
            auto outcome = raster::rasterize_text(ref_text, opts);
            if (!outcome.ok()) res.note = "reference did not render: " + outcome.error;
            ref = std::move(outcome.image);
        } else if (!ref_text.empty()) {
            ref = load_reference_image(item, ref_text);
            opts.size = ref->width;
        }

        const auto pred = raster::rasterize_text(item.prediction.value_or(""), opts);
        res.renderable = pred.ok();
        if (!pred.ok() && res.note.empty()) res.note = pred.error;
        if (with_metrics) {
            if (!ref) throw ManifestSchemaError("item " + item.id + ": reference is required for scoring");
            for (auto m : o.metrics) res.scores[std::string(raster::metric_name(m))] = raster::compute_metric(m, *ref, pred.image);
        }
        add_tokens(res, item, o);
        if (ref) res.frames.ref = export_frames(o, item.id, "ref", {&*ref});
        res.frames.pred = export_frames(o, item.id, "pred", {&pred.image});
        report.items.push_back(std::move(res));
    }
    finalize_report(report);
    return report;
}

MetricReport score_video(const std::vector<EvalItem>& items, const ScoreOptions& o, bool with_metrics) {
    check_uniform(items);
    if (o.frames < 1) throw std::invalid_argument("frame count must be at least 1");
    MetricReport report = new_report(items);
    for (const auto& item : items) {
        ItemResult res;
        res.id = item.id;
        auto opts = render_options(o);

        std::vector<raster::RasterImage> ref;
        double duration = 0;
        if (item.reference_is_list) {
            if (static_cast<int>(item.reference.size()) != o.frames) {
                throw FrameCountMismatch("item " + item.id + " has " + std::to_string(item.reference.size()) +
                                         " reference frames, expected " + std::to_string(o.frames));
            }
            for (const auto& path : item.reference) {
                ref.push_back(load_reference_image(item, path));
                if (ref.back().width != ref.front().width) {
                    throw DimensionMismatch("reference frames of item " + item.id + " differ in size");
                }
            }
            opts.size = ref.front().width;
        } else if (!item.reference.empty() && looks_like_svg(item.reference.front())) {
            try {
                const auto doc = core::parse_svg(item.reference.front());
                duration = raster::resolve_duration(doc);
                for (auto& f : raster::rasterize_animation(doc, opts, o.frames, duration)) {
                    if (!f.ok() && res.note.empty()) res.note = "reference frame did not render: " + f.error;
                    ref.push_back(std::move(f.image));
                }
            } catch (const ParseError& e) {
                res.note = std::string("reference did not parse: ") + e.what();
                ref.assign(static_cast<std::size_t>(o.frames), raster::black_image(opts.size, opts.size));
            }
        } else if (with_metrics) {
            throw ManifestSchemaError("item " + item.id + ": reference must be SVG text or a frame list");
        }

        // A static reference (duration 0) lets the prediction use its own timeline.
        const auto pred = raster::rasterize_animation_text(item.prediction.value_or(""), opts, o.frames, duration);
        res.renderable = std::all_of(pred.begin(), pred.end(), [](const auto& f) { return f.ok(); });
        if (!*res.renderable && res.note.empty()) {
            for (const auto& f : pred) {
                if (!f.ok()) {
                    res.note = f.error;
                    break;
                }
            }
        }
        if (with_metrics) {
            for (auto m : o.metrics) {
                double sum = 0;
                for (std::size_t k = 0; k < pred.size(); ++k) sum += raster::compute_metric(m, ref[k], pred[k].image);
                res.scores[std::string(raster::metric_name(m))] = sum / static_cast<double>(pred.size());
            }
        }
        add_tokens(res, item, o);
        std::vector<const raster::RasterImage*> ref_ptrs, pred_ptrs;
        for (const auto& f : ref) ref_ptrs.push_back(&f);
        for (const auto& f : pred) pred_ptrs.push_back(&f.image);
        res.frames.ref = export_frames(o, item.id, "ref", ref_ptrs);
        res.frames.pred = export_frames(o, item.id, "pred", pred_ptrs);
        report.items.push_back(std::move(res));
    }
    finalize_report(report);
    return report;
}

MetricReport score_mcq_report(const std::vector<EvalItem>& items) {
    check_uniform(items);
    MetricReport report = new_report(items);
    for (const auto& item : items) {
        ItemResult res;
        res.id = item.id;
        const auto choice = extract_choice(item.prediction.value_or(""));
        const bool correct = choice && std::string(1, *choice) == item.reference.front();
        res.scores["accuracy"] = correct ? 100.0 : 0.0;
        if (!choice) res.note = "no option letter found";
        report.items.push_back(std::move(res));
    }
    finalize_report(report);
    return report;
}

MetricReport record_only(const std::vector<EvalItem>& items, const ScoreOptions& o) {
    check_uniform(items);
    MetricReport report = new_report(items);
    for (const auto& item : items) {
        ItemResult res;
        res.id = item.id;
        res.output = item.prediction.value_or("");
        res.note = "unscored";
        add_tokens(res, item, o);
        report.items.push_back(std::move(res));
    }
    finalize_report(report);
    return report;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::string_view task_name(Task t) { return kTaskNames[static_cast<int>(t)]; }
std::string_view domain_name(Domain d) { return kDomainNames[static_cast<int>(d)]; }

Task parse_task(std::string_view name) {
    for (int i = 0; i < 7; ++i) {
        if (kTaskNames[i] == name) return static_cast<Task>(i);
    }
    if (name == "mcq_understanding") return Task::McqUnderstanding;
    throw ManifestSchemaError("unknown task '" + std::string(name) + "'");
}

Domain parse_domain(std::string_view name) {
    for (int i = 0; i < 4; ++i) {
        if (kDomainNames[i] == name) return static_cast<Domain>(i);
    }
    throw ManifestSchemaError("unknown domain '" + std::string(name) + "'");
}

bool produces_svg(Task t) { return t != Task::McqUnderstanding && t != Task::Description; }

std::vector<EvalItem> parse_manifest(std::string_view jsonl, const fs::path& base_dir) {
    static const std::set<std::string> allowed{"id", "task", "domain", "prompt", "reference", "media_paths"};
    std::vector<EvalItem> items;
    std::set<std::string> seen;
    for_each_line(jsonl, [&](const json& j, std::size_t line) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!allowed.count(it.key())) {
                throw ManifestSchemaError("line " + std::to_string(line) + ": unknown field '" + it.key() + "'");
            }
        }
        EvalItem item;
        item.base_dir = base_dir;
        item.id = require_string(j, "id", line);
        if (item.id.empty()) throw ManifestSchemaError("line " + std::to_string(line) + ": empty id");
        if (!seen.insert(item.id).second) {
            throw ManifestSchemaError("line " + std::to_string(line) + ": duplicate id '" + item.id + "'");
        }
        item.task = parse_task(require_string(j, "task", line));
        item.domain = parse_domain(require_string(j, "domain", line));
        item.prompt = require_string(j, "prompt", line);
        if (!j.contains("reference")) throw ManifestSchemaError("line " + std::to_string(line) + ": missing reference");
        const auto& ref = j["reference"];
        if (ref.is_string()) {
            item.reference.push_back(ref.get<std::string>());
        } else if (ref.is_array() && !ref.empty() &&
                   std::all_of(ref.begin(), ref.end(), [](const json& v) { return v.is_string(); })) {
            item.reference_is_list = true;
            for (const auto& v : ref) item.reference.push_back(v.get<std::string>());
        } else if (!(ref.is_null() && item.task == Task::Description)) {
            throw ManifestSchemaError("line " + std::to_string(line) + ": reference must be a string or list of paths");
        }
        if (item.task == Task::McqUnderstanding) {
            static const std::set<std::string> letters{"A", "B", "C", "D"};
            if (item.reference_is_list || item.reference.empty() || !letters.count(item.reference.front())) {
                throw ManifestSchemaError("line " + std::to_string(line) + ": MCQ reference must be A, B, C or D");
            }
        }
        if (j.contains("media_paths")) {
            const auto& m = j["media_paths"];
            if (!m.is_array() || !std::all_of(m.begin(), m.end(), [](const json& v) { return v.is_string(); })) {
                throw ManifestSchemaError("line " + std::to_string(line) + ": media_paths must be a list of strings");
            }
            for (const auto& v : m) item.media_paths.push_back(v.get<std::string>());
        }
        items.push_back(std::move(item));
    });
    return items;
}

std::vector<EvalItem> load_manifest(const fs::path& path) {
    return parse_manifest(read_file(path), path.parent_path());
}

std::map<std::string, std::string> parse_predictions(std::string_view jsonl) {
    std::map<std::string, std::string> out;
    for_each_line(jsonl, [&](const json& j, std::size_t line) {
        const std::string id = require_string(j, "id", line);
        const std::string output = require_string(j, "output", line);
        if (!out.emplace(id, output).second) {
            throw ManifestSchemaError("line " + std::to_string(line) + ": duplicate prediction id '" + id + "'");
        }
    });
    return out;
}

std::map<std::string, std::string> load_predictions(const fs::path& path) { return parse_predictions(read_file(path)); }

std::vector<std::string> attach_predictions(std::vector<EvalItem>& items,
                                            const std::map<std::string, std::string>& predictions) {
    std::set<std::string> used;
    for (auto& item : items) {
        auto it = predictions.find(item.id);
        if (it != predictions.end()) {
            item.prediction = it->second;
            used.insert(item.id);
        }
    }
    std::vector<std::string> unknown;
    for (const auto& [id, _] : predictions) {
        if (!used.count(id)) unknown.push_back(id);
    }
    return unknown;
}

std::optional<char> extract_choice(std::string_view prediction) {
    // The trailing \b keeps capitals that start words ("Certainly") from counting.
    static const std::regex pattern(R"(\b([ABCD])\b\.?)");
    const std::string text(core::trim(prediction));
    std::smatch m;
    if (!std::regex_search(text, m, pattern)) return std::nullopt;
    return m[1].str().front();
}

double score_mcq(const std::vector<EvalItem>& items) {
    if (items.empty()) throw EmptyManifest("manifest has no items");
    std::size_t correct = 0;
    for (const auto& item : items) {
        const auto choice = extract_choice(item.prediction.value_or(""));
        if (choice && !item.reference.empty() && std::string(1, *choice) == item.reference.front()) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(items.size());
}

TokenStats count_tokens(const std::vector<std::string>& predictions, const tokenizer::SvgTokenizer& tokenizer) {
    TokenStats stats;
    if (predictions.empty()) return stats;
    double special = 0, base = 0;
    for (const auto& p : predictions) {
        special += static_cast<double>(tokenizer.encode(p).size());
        base += static_cast<double>(tokenizer.encode_base_only(p).size());
    }
    stats.special = special / static_cast<double>(predictions.size());
    stats.base = base / static_cast<double>(predictions.size());
    return stats;
}

MetricReport score_pixels(const std::vector<EvalItem>& items, const ScoreOptions& options) {
    return score_static(items, options, true);
}

MetricReport score_animation(const std::vector<EvalItem>& items, const ScoreOptions& options) {
    return score_video(items, options, true);
}

MetricReport score_items(const std::vector<EvalItem>& items, const ScoreOptions& options) {
    check_uniform(items);
    switch (items.front().task) {
    case Task::McqUnderstanding: return score_mcq_report(items);
    case Task::Description: return record_only(items, options);
    case Task::Edit:
    case Task::ImageToSvg: return score_static(items, options, true);
    case Task::TextToSvg: return score_static(items, options, false);
    case Task::VideoToSani: return score_video(items, options, true);
    case Task::TextToSani: return score_video(items, options, false);
    }
    throw ManifestSchemaError("unknown task");
}

std::vector<MetricReport> run_benchmark(const std::vector<EvalItem>& items, const ScoreOptions& options) {
    if (items.empty()) throw EmptyManifest("manifest has no items");
    std::map<std::pair<int, int>, std::vector<EvalItem>> groups;
    for (const auto& item : items) {
        groups[{static_cast<int>(item.domain), static_cast<int>(item.task)}].push_back(item);
    }
    std::vector<MetricReport> reports;
    for (const auto& [_, group] : groups) reports.push_back(score_items(group, options));
    return reports;
}

void finalize_report(MetricReport& report) {
    std::sort(report.items.begin(), report.items.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    report.aggregate.clear();
    std::map<std::string, double> sums;
    std::map<std::string, std::size_t> counts;
    double special = 0, base = 0;
    std::size_t token_items = 0;
    for (const auto& item : report.items) {
        for (const auto& [name, v] : item.scores) {
            sums[name] += v;
            ++counts[name];
        }
        if (item.tokens_special && item.tokens_base) {
            special += static_cast<double>(*item.tokens_special);
            base += static_cast<double>(*item.tokens_base);
            ++token_items;
        }
    }
    for (const auto& [name, sum] : sums) report.aggregate[name] = sum / static_cast<double>(counts[name]);
    if (token_items > 0) {
        report.tokens = TokenStats{special / static_cast<double>(token_items), base / static_cast<double>(token_items)};
    } else {
        report.tokens.reset();
    }
}

AggregateTable aggregate_report(const std::vector<MetricReport>& reports) {
    std::vector<const MetricReport*> sorted;
    std::set<std::pair<int, int>> keys;
    for (const auto& r : reports) {
        if (!keys.insert({static_cast<int>(r.domain), static_cast<int>(r.task)}).second) {
            throw DuplicateKey("two reports for task " + std::string(task_name(r.task)) + " in domain " +
                               std::string(domain_name(r.domain)));
        }
        sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(), [](const MetricReport* a, const MetricReport* b) {
        return std::pair(a->domain, a->task) < std::pair(b->domain, b->task);
    });

    AggregateTable table;
    table.json["domains"] = ojson::array();
    std::set<std::string> metric_names;
    for (const auto* r : sorted) {
        for (const auto& [name, _] : r->aggregate) metric_names.insert(name);
    }
    // Fixed column order for known metrics, then anything else alphabetically.
    std::vector<std::string> columns;
    for (const char* known : {"accuracy", "ssim", "psnr", "mse"}) {
        if (metric_names.erase(known)) columns.emplace_back(known);
    }
    columns.insert(columns.end(), metric_names.begin(), metric_names.end());

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"domain", "task", "items", "renderable"});
    for (const auto& c : columns) rows.front().push_back(c);
    rows.front().push_back("tokens");
    rows.front().push_back("tokens_base");

    ojson* domain_entry = nullptr;
    std::optional<Domain> current;
    for (const auto* r : sorted) {
        if (!current || *current != r->domain) {
            current = r->domain;
            ojson d;
            d["domain"] = domain_name(r->domain);
            d["tasks"] = ojson::array();
            table.json["domains"].push_back(std::move(d));
            domain_entry = &table.json["domains"].back();
        }
        ojson t;
        t["task"] = task_name(r->task);
        t["items"] = r->items.size();
        std::size_t renderable = 0;
        bool has_render = false;
        for (const auto& item : r->items) {
            if (item.renderable) {
                has_render = true;
                renderable += *item.renderable ? 1 : 0;
            }
        }
        if (has_render) t["renderable"] = renderable;
        t["metrics"] = ojson::object();
        for (const auto& c : columns) {
            if (auto it = r->aggregate.find(c); it != r->aggregate.end()) t["metrics"][c] = it->second;
        }
        if (r->tokens) t["tokens"] = {{"special", r->tokens->special}, {"base", r->tokens->base}};
        (*domain_entry)["tasks"].push_back(std::move(t));

        std::vector<std::string> row{std::string(domain_name(r->domain)), std::string(task_name(r->task)),
                                     std::to_string(r->items.size()), has_render ? std::to_string(renderable) : "-"};
        for (const auto& c : columns) {
            auto it = r->aggregate.find(c);
            row.push_back(it == r->aggregate.end() ? "-" : fixed3(it->second));
        }
        row.push_back(r->tokens ? fixed3(r->tokens->special) : "-");
        row.push_back(r->tokens ? fixed3(r->tokens->base) : "-");
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(rows.front().size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string line;
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            const auto& cell = rows[r][i];
            const std::string pad(widths[i] - cell.size(), ' ');
            if (i > 0) line += "  ";
            line += i < 2 ? cell + pad : pad + cell;  // names left, numbers right
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        table.text += line + "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : widths) total += w;
            table.text += std::string(total + 2 * (widths.size() - 1), '-') + "\n";
        }
    }
    return table;
}

ojson item_json(const MetricReport& report, const ItemResult& item) {
    ojson j;
    j["id"] = item.id;
    j["task"] = task_name(report.task);
    j["domain"] = domain_name(report.domain);
    j["renderable"] = item.renderable ? ojson(*item.renderable) : ojson(nullptr);
    j["scores"] = ojson::object();
    for (const auto& [name, v] : item.scores) j["scores"][name] = v;
    if (item.tokens_special) j["tokens_special"] = *item.tokens_special;
    if (item.tokens_base) j["tokens_base"] = *item.tokens_base;
    if (!item.note.empty()) j["note"] = item.note;
    if (item.output) j["output"] = *item.output;
    return j;
}

void write_report(const fs::path& out_dir, const std::vector<MetricReport>& reports, const std::vector<EvalItem>& items,
                  bool frames_exported) {
    fs::create_directories(out_dir);
    const auto table = aggregate_report(reports);
    write_file(out_dir / "aggregate.json", table.json.dump(2) + "\n");
    write_file(out_dir / "aggregate.txt", table.text);

    std::map<std::string, const EvalItem*> by_id;
    for (const auto& item : items) by_id[item.id] = &item;

    std::string lines;
    ojson frame_manifest;
    frame_manifest["items"] = ojson::array();
    std::vector<const MetricReport*> sorted;
    for (const auto& r : reports) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const MetricReport* a, const MetricReport* b) {
        return std::pair(a->domain, a->task) < std::pair(b->domain, b->task);
    });
    for (const auto* r : sorted) {
        for (const auto& item : r->items) {
            lines += item_json(*r, item).dump() + "\n";
            if (!frames_exported || (item.frames.ref.empty() && item.frames.pred.empty())) continue;
            ojson f;
            f["id"] = item.id;
            f["task"] = task_name(r->task);
            f["domain"] = domain_name(r->domain);
            if (auto it = by_id.find(item.id); it != by_id.end()) f["prompt"] = it->second->prompt;
            f["ref"] = item.frames.ref;
            f["pred"] = item.frames.pred;
            frame_manifest["items"].push_back(std::move(f));
        }
    }
    write_file(out_dir / "items.jsonl", lines);
    if (frames_exported) {
        fs::create_directories(out_dir / "frames");
        write_file(out_dir / "frames" / "manifest.json", frame_manifest.dump(2) + "\n");
    }
}

std::vector<MetricReport> load_reports(const fs::path& report_dir) {
    std::map<std::pair<int, int>, MetricReport> grouped;
    for_each_line(read_file(report_dir / "items.jsonl"), [&](const json& j, std::size_t line) {
        const Task task = parse_task(require_string(j, "task", line));
        const Domain domain = parse_domain(require_string(j, "domain", line));
        auto& report = grouped[{static_cast<int>(domain), static_cast<int>(task)}];
        report.task = task;
        report.domain = domain;
        ItemResult item;
        item.id = require_string(j, "id", line);
        if (j.contains("renderable") && j["renderable"].is_boolean()) item.renderable = j["renderable"].get<bool>();
        if (j.contains("scores") && j["scores"].is_object()) {
            for (auto it = j["scores"].begin(); it != j["scores"].end(); ++it) {
                if (!it.value().is_number()) throw ManifestSchemaError("line " + std::to_string(line) + ": non-numeric score");
                item.scores[it.key()] = it.value().get<double>();
            }
        }
        if (j.contains("tokens_special")) item.tokens_special = j["tokens_special"].get<std::size_t>();
        if (j.contains("tokens_base")) item.tokens_base = j["tokens_base"].get<std::size_t>();
        if (j.contains("note")) item.note = j["note"].get<std::string>();
        if (j.contains("output")) item.output = j["output"].get<std::string>();
        report.items.push_back(std::move(item));
    });
    std::vector<MetricReport> out;
    for (auto& [_, r] : grouped) {
        finalize_report(r);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace svgkit::bench
