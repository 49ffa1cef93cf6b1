#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "svgkit/bench/bench.hpp"
#include "svgkit/core/document.hpp"
#include "svgkit/edit/edit.hpp"
#include "svgkit/error.hpp"
#include "svgkit/normalize/normalizer.hpp"
#include "svgkit/raster/animation.hpp"
#include "svgkit/raster/metrics.hpp"
#include "svgkit/tokenizer/svg_tokenizer.hpp"

namespace fs = std::filesystem;
using namespace svgkit;

namespace {

constexpr int kExitSchema = 2;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::vector<fs::path> svg_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".svg") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::unique_ptr<tokenizer::BaseTokenizer> load_base(const std::string& vocab_path) {
    if (vocab_path.empty()) return std::make_unique<tokenizer::ByteTokenizer>();
    return std::make_unique<tokenizer::VocabTokenizer>(tokenizer::VocabTokenizer::from_json_file(vocab_path));
}

// Control bytes and non-ASCII shown as escapes so --pretty stays one line per token.
std::string printable(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
        if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else if (c == '\\') out += "\\\\";
        else if (c < 0x20 || c == 0x7F) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02x", c);
            out += buf;
        } else out += static_cast<char>(c);
    }
    return out;
}

struct NormalizeArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string out_dir;
    double canvas = 128;
    int precision = 2;
    bool no_simplify = false;
};

int run_normalize(const NormalizeArgs& a) {
    normalize::NormalizeConfig cfg;
    cfg.canvas_width = cfg.canvas_height = a.canvas;
    cfg.precision = a.precision;
    cfg.validate();
    std::vector<fs::path> files;
    for (const auto& in : a.inputs) {
        if (fs::is_directory(in)) {
            for (auto& f : svg_files(in)) files.push_back(f);
        } else {
            files.emplace_back(in);
        }
    }
    if (files.size() > 1 && a.out_dir.empty()) throw std::invalid_argument("several inputs need --out-dir");
    int failures = 0;
    std::string log;
    for (const auto& f : files) {
        nlohmann::ordered_json entry;
        entry["file"] = f.filename().string();
        try {
            const std::string src = read_text(f);
            entry["bytes_before"] = src.size();
            const auto doc = normalize::pipeline(core::parse_svg(src), cfg, !a.no_simplify);
            const std::string text = core::serialize_svg(doc, {a.precision}) + "\n";
            entry["bytes_after"] = text.size();
            entry["renderable"] = core::validate_renderable(doc);
            if (!a.out_dir.empty()) write_text(fs::path(a.out_dir) / f.filename(), text);
            else if (!a.out.empty()) write_text(a.out, text);
            else std::cout << text;
        } catch (const Error& e) {
            std::cerr << f.string() << ": " << e.what() << "\n";
            entry["error"] = e.what();
            ++failures;
        }
        log += entry.dump() + "\n";
    }
    if (!a.out_dir.empty()) write_text(fs::path(a.out_dir) / "normalize_log.jsonl", log);
    return failures == 0 ? 0 : 1;
}

struct TokenizeArgs {
    std::string input;
    std::string base_vocab;
    bool stats = false;
    bool ids = false;
    bool pretty = false;
};

int run_tokenize(const TokenizeArgs& a) {
    const auto base = load_base(a.base_vocab);
    const tokenizer::SvgTokenizer tok(*base);
    if (a.stats) {
        std::vector<std::string> corpus;
        if (fs::is_directory(a.input)) {
            for (const auto& f : svg_files(a.input)) corpus.push_back(read_text(f));
        } else {
            corpus.push_back(read_text(a.input));
        }
        const auto s = tokenizer::compression_stats(corpus, tok);
        nlohmann::ordered_json j;
        j["files"] = s.files;
        j["mean_before"] = s.mean_before;
        j["mean_after"] = s.mean_after;
        j["ratio_of_means"] = s.mean_before > 0 ? s.mean_after / s.mean_before : 1.0;
        j["mean_ratio"] = s.mean_ratio;
        auto& h = j["ratio_histogram"] = nlohmann::ordered_json::array();
        for (std::size_t b = 0; b < s.ratio_histogram.size(); ++b) {
            char label[32];
            if (b < 10) std::snprintf(label, sizeof label, "[%.1f,%.1f)", b / 10.0, (b + 1) / 10.0);
            else std::snprintf(label, sizeof label, "[1.0,inf)");
            h.push_back({{"bin", label}, {"count", s.ratio_histogram[b]}});
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    const auto ids = tok.encode(read_text(a.input));
    if (a.pretty) {
        const auto pieces = tok.pieces(ids);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            std::cout << ids[i] << '\t' << (tok.vocab().owns(ids[i]) ? "S" : "B") << '\t' << printable(pieces[i]) << "\n";
        }
    } else {
        for (std::size_t i = 0; i < ids.size(); ++i) std::cout << (i ? " " : "") << ids[i];
        std::cout << "\n";
    }
    return 0;
}

struct InitEmbedArgs {
    std::string base_vocab, base_emb, out;
};

int run_init_embed(const InitEmbedArgs& a) {
    const auto base = tokenizer::VocabTokenizer::from_json_file(a.base_vocab);
    const tokenizer::SvgTokenizer tok(base);
    const auto emb = tokenizer::read_embeddings(a.base_emb, static_cast<std::size_t>(base.vocab_size()));
    const auto rows = tokenizer::init_embeddings(tok, emb);
    tokenizer::write_embedding_init(a.out, rows);
    std::cerr << "wrote " << rows.size() << " rows of dimension " << emb.dim << " to " << a.out << "\n";
    return 0;
}

struct EditSynthArgs {
    std::string corpus_dir, out;
    int ops_per_doc = 8;
    std::uint64_t seed = 0;
};

int run_edit_synth(const EditSynthArgs& a) {
    std::vector<edit::CorpusEntry> corpus;
    for (const auto& f : svg_files(a.corpus_dir)) {
        try {
            corpus.push_back({f.stem().string(), core::parse_svg(read_text(f))});
        } catch (const Error& e) {
            std::cerr << "skip " << f.string() << ": " << e.what() << "\n";
        }
    }
    const auto result = edit::synthesize_pairs(corpus, a.ops_per_doc, a.seed);
    for (const auto& msg : result.skipped) std::cerr << "skip " << msg << "\n";
    write_text(a.out, edit::to_jsonl(result.samples));
    std::cerr << result.samples.size() << " samples from " << corpus.size() << " documents\n";
    return 0;
}

struct RenderArgs {
    std::string input, out, out_dir;
    int size = raster::kDefaultEvalSize;
    int frames = 0;
    double duration = 0;
};

int run_render(const RenderArgs& a) {
    raster::RenderOptions opts;
    opts.size = a.size;
    const std::string text = read_text(a.input);
    if (a.frames > 0) {
        if (a.out_dir.empty()) throw std::invalid_argument("--frames needs --out-dir");
        fs::create_directories(a.out_dir);
        const auto frames = raster::rasterize_animation_text(text, opts, a.frames, a.duration);
        int penalized = 0;
        for (std::size_t k = 0; k < frames.size(); ++k) {
            raster::write_png(frames[k].image, fs::path(a.out_dir) / ("frame_" + std::to_string(k) + ".png"));
            if (!frames[k].ok()) {
                std::cerr << "frame " << k << " penalized: " << frames[k].error << "\n";
                ++penalized;
            }
        }
        return penalized == 0 ? 0 : 1;
    }
    if (a.out.empty()) throw std::invalid_argument("--out is required");
    const auto outcome = raster::rasterize_text(text, opts);
    raster::write_png(outcome.image, a.out);
    if (!outcome.ok()) {
        std::cerr << "penalized: " << outcome.error << "\n";
        return 1;
    }
    return 0;
}

struct MetricArgs {
    std::string ref, pred;
    bool ssim = false, psnr = false, mse = false;
};

int run_metric(const MetricArgs& a) {
    const auto ref = raster::read_png(a.ref);
    const auto pred = raster::read_png(a.pred);
    nlohmann::ordered_json j;
    const bool all = !a.ssim && !a.psnr && !a.mse;
    if (a.ssim || all) j["ssim"] = raster::ssim(ref, pred);
    if (a.psnr || all) j["psnr"] = raster::psnr(ref, pred);
    if (a.mse || all) j["mse"] = raster::mse(ref, pred);
    std::cout << j.dump() << "\n";
    return 0;
}

struct BenchRunArgs {
    std::string manifest, pred, task, out, base_vocab;
    int frames = 8;
    int size = raster::kDefaultEvalSize;
    bool no_frames = false;
};

int run_bench(const BenchRunArgs& a) {
    auto items = bench::load_manifest(a.manifest);
    const bench::Task task = bench::parse_task(a.task);
    for (const auto& item : items) {
        if (item.task != task) {
            throw ManifestSchemaError("item " + item.id + " has task " + std::string(bench::task_name(item.task)) +
                                      ", expected " + a.task);
        }
    }
    for (const auto& id : bench::attach_predictions(items, bench::load_predictions(a.pred))) {
        std::cerr << "warning: prediction for unknown id '" << id << "' ignored\n";
    }
    for (const auto& item : items) {
        if (!item.prediction) std::cerr << "warning: no prediction for '" << item.id << "', scored as empty\n";
    }
    const auto base = load_base(a.base_vocab);
    const tokenizer::SvgTokenizer tok(*base);
    bench::ScoreOptions opts;
    opts.size = a.size;
    opts.frames = a.frames;
    opts.tokenizer = &tok;
    const fs::path out(a.out);
    if (!a.no_frames) {
        fs::remove_all(out / "frames");
        opts.frames_dir = out / "frames";
    }
    const auto reports = bench::run_benchmark(items, opts);
    bench::write_report(out, reports, items, !a.no_frames);
    std::cout << bench::aggregate_report(reports).text;
    return 0;
}

struct BenchAggregateArgs {
    std::vector<std::string> dirs;
    std::string out;
};

int run_bench_aggregate(const BenchAggregateArgs& a) {
    std::vector<bench::MetricReport> reports;
    for (const auto& d : a.dirs) {
        for (auto& r : bench::load_reports(d)) reports.push_back(std::move(r));
    }
    const auto table = bench::aggregate_report(reports);
    if (!a.out.empty()) {
        write_text(fs::path(a.out) / "aggregate.json", table.json.dump(2) + "\n");
        write_text(fs::path(a.out) / "aggregate.txt", table.text);
    }
    std::cout << table.text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVG normalization, tokenization, edit synthesis, rendering and benchmark scoring"};
    app.require_subcommand(1);

    NormalizeArgs norm;
    auto* c_norm = app.add_subcommand("normalize", "Canonicalize SVG files to the fixed canvas and simplify them");
    c_norm->add_option("inputs", norm.inputs, "SVG files or directories")->required();
    c_norm->add_option("--out", norm.out, "Output file (single input)");
    c_norm->add_option("--out-dir", norm.out_dir, "Output directory; also receives normalize_log.jsonl");
    c_norm->add_option("--canvas", norm.canvas, "Canvas side in user units")->capture_default_str();
    c_norm->add_option("--precision", norm.precision, "Decimal places kept")->capture_default_str();
    c_norm->add_flag("--no-simplify", norm.no_simplify, "Only rescale and quantize");

    TokenizeArgs tok;
    auto* c_tok = app.add_subcommand("tokenize", "Encode an SVG file with the special vocabulary");
    c_tok->add_option("file", tok.input, "SVG file (or directory with --stats)")->required();
    c_tok->add_option("--base-vocab", tok.base_vocab, "Base vocabulary JSON (default: byte tokenizer)");
    c_tok->add_flag("--stats", tok.stats, "Print compression statistics");
    auto* f_ids = c_tok->add_flag("--ids", tok.ids, "Print token ids (default)");
    auto* f_pretty = c_tok->add_flag("--pretty", tok.pretty, "Print one id, kind and piece per line");
    f_ids->excludes(f_pretty);

    InitEmbedArgs emb;
    auto* c_emb = app.add_subcommand("init-embed", "Initialize special-token embeddings from subword means");
    c_emb->add_option("--base-vocab", emb.base_vocab, "Base vocabulary JSON")->required();
    c_emb->add_option("--base-emb", emb.base_emb, "Base embedding matrix (float32, row = id)")->required();
    c_emb->add_option("--out", emb.out, "Output matrix; an index is written next to it as .json")->required();

    std::string vocab_out;
    std::int64_t vocab_offset = 0;
    auto* c_vocab = app.add_subcommand("vocab", "Print the special-token manifest");
    c_vocab->add_option("--out", vocab_out, "Write to a file instead of stdout");
    c_vocab->add_option("--id-offset", vocab_offset, "Id of the first special token")->capture_default_str();

    EditSynthArgs es;
    auto* c_es = app.add_subcommand("edit-synth", "Generate paired editing samples");
    c_es->add_option("corpus_dir", es.corpus_dir, "Directory of canonical SVG files")->required();
    c_es->add_option("--out", es.out, "Output JSONL")->required();
    c_es->add_option("--ops-per-doc", es.ops_per_doc, "Samples per document")->capture_default_str();
    c_es->add_option("--seed", es.seed, "Random seed")->capture_default_str();

    RenderArgs ren;
    auto* c_ren = app.add_subcommand("render", "Rasterize an SVG file to PNG");
    c_ren->add_option("input", ren.input, "SVG file")->required();
    c_ren->add_option("--size", ren.size, "Output side in pixels")->capture_default_str();
    c_ren->add_option("--out", ren.out, "Output PNG");
    c_ren->add_option("--frames", ren.frames, "Sample this many animation frames");
    c_ren->add_option("--duration", ren.duration, "Sampled duration in seconds (default: from the document)");
    c_ren->add_option("--out-dir", ren.out_dir, "Frame output directory");

    MetricArgs met;
    auto* c_met = app.add_subcommand("metric", "Compare two PNG images");
    c_met->add_option("--ref", met.ref, "Reference PNG")->required();
    c_met->add_option("--pred", met.pred, "Predicted PNG")->required();
    c_met->add_flag("--ssim", met.ssim, "Report SSIM");
    c_met->add_flag("--psnr", met.psnr, "Report PSNR");
    c_met->add_flag("--mse", met.mse, "Report MSE");

    auto* c_bench = app.add_subcommand("bench", "Benchmark scoring");
    c_bench->require_subcommand(1);
    BenchRunArgs br;
    auto* c_run = c_bench->add_subcommand("run", "Score predictions against a manifest");
    c_run->add_option("--manifest", br.manifest, "Manifest JSONL")->required();
    c_run->add_option("--pred", br.pred, "Predictions JSONL")->required();
    c_run->add_option("--task", br.task, "mcq, description, edit, text_to_svg, image_to_svg, text_to_sani, video_to_sani")
        ->required();
    c_run->add_option("--out", br.out, "Report directory")->required();
    c_run->add_option("--frames", br.frames, "Frames sampled per animation")->capture_default_str();
    c_run->add_option("--size", br.size, "Render size in pixels")->capture_default_str();
    c_run->add_option("--base-vocab", br.base_vocab, "Base vocabulary JSON for token counts");
    c_run->add_flag("--no-frames", br.no_frames, "Skip PNG export");
    BenchAggregateArgs ba;
    auto* c_agg = c_bench->add_subcommand("aggregate", "Merge report directories into one table");
    c_agg->add_option("reports", ba.dirs, "Report directories")->required();
    c_agg->add_option("--out", ba.out, "Directory for the merged aggregate.json/.txt");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_norm->parsed()) return run_normalize(norm);
        if (c_tok->parsed()) return run_tokenize(tok);
        if (c_emb->parsed()) return run_init_embed(emb);
        if (c_vocab->parsed()) {
            const auto text = tokenizer::build_vocab(vocab_offset).manifest_json();
            if (vocab_out.empty()) std::cout << text;
            else write_text(vocab_out, text);
            return 0;
        }
        if (c_es->parsed()) return run_edit_synth(es);
        if (c_ren->parsed()) return run_render(ren);
        if (c_met->parsed()) return run_metric(met);
        if (c_run->parsed()) return run_bench(br);
        if (c_agg->parsed()) return run_bench_aggregate(ba);
    } catch (const ManifestSchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
