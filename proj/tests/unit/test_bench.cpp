#include <gtest/gtest.h>

#include <filesystem>

#include "corpus.hpp"
#include "svgkit/bench/bench.hpp"
#include "svgkit/error.hpp"
#include "svgkit/raster/image.hpp"
#include "svgkit/tokenizer/svg_tokenizer.hpp"
#include "synthetic_base.hpp"

using namespace svgkit;
using namespace svgkit::bench;
namespace fs = std::filesystem;

namespace {

const char* kMcq =
    R"({"id":"q1","task":"mcq","domain":"icon","prompt":"Which shape?","reference":"A"})"
    "\n"
    R"({"id":"q2","task":"mcq","domain":"icon","prompt":"Which color?","reference":"B"})"
    "\n"
    R"({"id":"q3","task":"mcq","domain":"icon","prompt":"How many?","reference":"C"})"
    "\n"
    R"({"id":"q4","task":"mcq","domain":"icon","prompt":"Where?","reference":"D"})"
    "\n";

const std::string kRef = R"(<svg viewBox="0 0 128 128"><rect x="20" y="20" width="60" height="40" fill="#336699"/></svg>)";
const std::string kWhite = R"(<svg viewBox="0 0 128 128"/>)";

std::string edit_line(const std::string& id, const std::string& ref) {
    nlohmann::json j{{"id", id}, {"task", "edit"}, {"domain", "icon"}, {"prompt", "Flip this SVG graphic."},
                     {"reference", ref}};
    return j.dump() + "\n";
}

ScoreOptions small() {
    ScoreOptions o;
    o.size = 64;
    return o;
}

} // namespace

TEST(Mcq, ExtractChoice) {
    EXPECT_EQ(extract_choice("The answer is B."), 'B');
    EXPECT_EQ(extract_choice("C"), 'C');
    EXPECT_EQ(extract_choice("Certainly! It is D"), 'D');
    EXPECT_EQ(extract_choice("A. a circle"), 'A');
    EXPECT_FALSE(extract_choice("none of these").has_value());
    EXPECT_FALSE(extract_choice("").has_value());
}

TEST(Mcq, ControlledCorruption) {
    const std::string right = "ABCD", wrong = "BCDA";
    const double expected[] = {100, 75, 50, 25, 0};
    for (int broken = 0; broken <= 4; ++broken) {
        auto items = parse_manifest(kMcq);
        for (int i = 0; i < 4; ++i) items[i].prediction = std::string(1, (i < broken ? wrong : right)[i]);
        EXPECT_EQ(score_mcq(items), expected[broken]);
    }
    auto items = parse_manifest(kMcq);
    items[0].prediction = "The answer is A.";
    EXPECT_EQ(score_mcq(items), 25.0);
    EXPECT_THROW(score_mcq({}), EmptyManifest);
}

TEST(Manifest, SchemaErrors) {
    EXPECT_THROW(parse_manifest(R"({"id":"a","task":"mcq","domain":"icon","prompt":"p","reference":"E"})"),
                 ManifestSchemaError);
    EXPECT_THROW(parse_manifest(R"({"id":"a","task":"mcq","domain":"icon","prompt":"p","reference":"A","x":1})"),
                 ManifestSchemaError);
    EXPECT_THROW(parse_manifest(R"({"id":"a","task":"paint","domain":"icon","prompt":"p","reference":"A"})"),
                 ManifestSchemaError);
    EXPECT_THROW(parse_manifest(std::string(kMcq) + R"({"id":"q1","task":"mcq","domain":"icon","prompt":"p","reference":"A"})"),
                 ManifestSchemaError);
    EXPECT_THROW(parse_manifest("{not json"), ManifestSchemaError);
    EXPECT_THROW(parse_predictions(R"({"id":"a"})"), ManifestSchemaError);
}

TEST(Manifest, AttachPredictions) {
    auto items = parse_manifest(kMcq);
    const auto extra = attach_predictions(items, parse_predictions(R"({"id":"q2","output":"B"})"
                                                                   "\n"
                                                                   R"({"id":"zz","output":"A"})"));
    EXPECT_EQ(extra, std::vector<std::string>{"zz"});
    EXPECT_EQ(items[1].prediction, "B");
    EXPECT_FALSE(items[0].prediction.has_value());
}

TEST(Pixels, PerfectEditCeiling) {
    auto items = parse_manifest(edit_line("e1", kRef) + edit_line("e2", kWhite));
    for (auto& it : items) it.prediction = it.reference.front();
    const auto report = score_items(items, small());
    EXPECT_EQ(report.aggregate.at("ssim"), 1.0);
    EXPECT_EQ(report.aggregate.at("psnr"), 100.0);
}

TEST(Pixels, PenaltyAgainstWhite) {
    auto items = parse_manifest(edit_line("e1", kWhite) + edit_line("e2", kWhite));
    items[0].prediction = "<svg><g></svg>";
    items[1].prediction = R"(<svg viewBox="0 0 128 128"><path d="M0 0L"/></svg>)";
    const auto report = score_items(items, small());
    for (const auto& r : report.items) {
        EXPECT_EQ(r.scores.at("psnr"), 0.0);
        EXPECT_EQ(r.renderable, false);
    }
    EXPECT_EQ(report.aggregate.at("psnr"), 0.0);
}

TEST(Pixels, MissingPredictionIsPenalized) {
    auto items = parse_manifest(edit_line("e1", kWhite));
    const auto report = score_items(items, small());
    EXPECT_EQ(report.items[0].scores.at("psnr"), 0.0);
}

TEST(Pixels, AggregateIsMeanIncludingPenalties) {
    auto items = parse_manifest(edit_line("a", kRef) + edit_line("b", kWhite));
    items[0].prediction = kRef;
    items[1].prediction = "garbage";
    const auto report = score_items(items, small());
    EXPECT_DOUBLE_EQ(report.aggregate.at("psnr"), (100.0 + 0.0) / 2);
}

TEST(Animation, IdenticalAndStaticPredictions) {
    const std::string anim =
        R"(<svg viewBox="0 0 128 128"><circle cx="0" cy="64" r="10"><animate attributeName="cx" from="0" to="128" dur="2s"/></circle></svg>)";
    nlohmann::json j{{"id", "v1"}, {"task", "video_to_sani"}, {"domain", "animation"}, {"prompt", "p"}, {"reference", anim}};
    auto items = parse_manifest(j.dump());
    items[0].prediction = anim;
    auto o = small();
    EXPECT_EQ(score_items(items, o).aggregate.at("psnr"), 100.0);
    items[0].prediction = R"(<svg viewBox="0 0 128 128"><circle cx="0" cy="64" r="10"/></svg>)";
    EXPECT_LT(score_items(items, o).aggregate.at("psnr"), 100.0);
    items[0].prediction = "nope";
    const auto bad = score_items(items, o);
    EXPECT_EQ(bad.items[0].renderable, false);
}

TEST(Animation, FrameListMustMatchCount) {
    const auto dir = fs::temp_directory_path() / "svgkit_frames_test";
    fs::create_directories(dir);
    raster::write_png(raster::RasterImage(64, 64), dir / "f0.png");
    nlohmann::json j{{"id", "v1"}, {"task", "video_to_sani"}, {"domain", "animation"}, {"prompt", "p"},
                     {"reference", {"f0.png", "f0.png"}}};
    auto items = parse_manifest(j.dump(), dir);
    items[0].prediction = kWhite;
    EXPECT_THROW(score_items(items, small()), FrameCountMismatch);
    auto o = small();
    o.frames = 2;
    EXPECT_EQ(score_items(items, o).aggregate.at("psnr"), 100.0);
    fs::remove_all(dir);
}

TEST(Tokens, CountsAgreeWithCompressionStats) {
    const tokenizer::VocabTokenizer base(svgkit::testing::synthetic_base_vocab());
    const tokenizer::SvgTokenizer tok(base);
    const auto corpus = svgkit::testing::canonical_corpus(20, 71);
    const auto counts = count_tokens(corpus, tok);
    const auto stats = tokenizer::compression_stats(corpus, tok);
    EXPECT_DOUBLE_EQ(counts.special, stats.mean_after);
    EXPECT_DOUBLE_EQ(counts.base, stats.mean_before);
    EXPECT_EQ(count_tokens({}, tok).special, 0.0);
    EXPECT_EQ(count_tokens({"<svg"}, tok).special, 1.0);
}

TEST(Aggregate, DomainOrderAndDuplicates) {
    auto mcq = parse_manifest(kMcq);
    for (auto& it : mcq) it.prediction = it.reference.front();
    nlohmann::json j{{"id", "x1"}, {"task", "edit"}, {"domain", "chemistry"}, {"prompt", "p"}, {"reference", kWhite}};
    auto chem = parse_manifest(j.dump());
    chem[0].prediction = kWhite;
    const auto r1 = score_items(chem, small());
    const auto r2 = score_items(mcq, small());
    const auto table = aggregate_report({r1, r2});
    ASSERT_EQ(table.json["domains"].size(), 2u);
    EXPECT_EQ(table.json["domains"][0]["domain"], "icon");
    EXPECT_EQ(table.json["domains"][1]["domain"], "chemistry");
    EXPECT_EQ(table.json["domains"][0]["tasks"][0]["metrics"]["accuracy"], 100.0);
    EXPECT_NE(table.text.find("100.000"), std::string::npos);
    EXPECT_THROW(aggregate_report({r2, r2}), DuplicateKey);
    EXPECT_EQ(aggregate_report({r2}).json["domains"].size(), 1u);
}

TEST(Report, WriteAndReload) {
    const auto dir = fs::temp_directory_path() / "svgkit_report_test";
    fs::remove_all(dir);
    auto items = parse_manifest(edit_line("e2", kRef) + edit_line("e1", kWhite));
    items[0].prediction = kRef;
    items[1].prediction = "broken";
    auto o = small();
    o.frames_dir = dir / "frames";
    const auto reports = run_benchmark(items, o);
    write_report(dir, reports, items, true);
    EXPECT_TRUE(fs::exists(dir / "aggregate.json"));
    EXPECT_TRUE(fs::exists(dir / "aggregate.txt"));
    EXPECT_TRUE(fs::exists(dir / "frames" / "manifest.json"));
    const auto back = load_reports(dir);
    ASSERT_EQ(back.size(), 1u);
    ASSERT_EQ(back[0].items.size(), 2u);
    EXPECT_EQ(back[0].items[0].id, "e1");
    EXPECT_EQ(aggregate_report(back).json.dump(), aggregate_report(reports).json.dump());
    fs::remove_all(dir);
}
