#include <gtest/gtest.h>

#include <set>

#include "corpus.hpp"
#include "raster_oracle.hpp"
#include "svgkit/core/document.hpp"
#include "svgkit/edit/edit.hpp"
#include "svgkit/error.hpp"
#include "svgkit/raster/render.hpp"

using namespace svgkit;
using namespace svgkit::edit;
using core::parse_svg;
using core::serialize_svg;

namespace {

const char* kIcon =
    R"(<svg viewBox="0 0 128 128"><rect x="20" y="30" width="40" height="20" fill="#00abff"/>)"
    R"(<circle cx="80" cy="70" r="15" fill="#ff0000" stroke="#000000"/></svg>)";

std::vector<core::SvgDocument> simple_icons(std::size_t n, std::uint64_t seed) {
    svgkit::testing::IconGenerator gen(seed);
    std::vector<core::SvgDocument> docs;
    for (std::size_t i = 0; i < n; ++i) docs.push_back(parse_svg(gen.simple_icon()));
    return docs;
}

void expect_oracle(const raster::RasterImage& edited, const raster::RasterImage& expected) {
    const auto agree = svgkit::testing::compare_pixels(edited, expected);
    EXPECT_GE(agree.exact, 0.995);
    EXPECT_EQ(agree.within_one, 1.0) << "max diff " << agree.max_diff;
}

} // namespace

TEST(ColorEdit, ReplacesOnlyThatColor) {
    const auto doc = parse_svg(kIcon);
    const auto out = serialize_svg(apply_edit(doc, EditOp{ColorEditParams{"#00abff", "#D8BFD8"}}));
    std::string expected = serialize_svg(doc);
    expected.replace(expected.find("#00abff"), 7, "#D8BFD8");
    EXPECT_EQ(out, expected);
}

TEST(ColorEdit, MatchesEquivalentSpellings) {
    const auto doc = parse_svg(R"(<svg viewBox="0 0 128 128"><rect width="5" height="5" style="fill:#F00"/><circle r="3" fill="red"/></svg>)");
    const auto out = serialize_svg(apply_edit(doc, EditOp{ColorEditParams{"#ff0000", "#00ff00"}}));
    EXPECT_EQ(out.find("#F00"), std::string::npos) << out;
    EXPECT_EQ(out.find("\"red\""), std::string::npos) << out;
}

TEST(ColorEdit, MissingColor) {
    EXPECT_THROW(apply_edit(parse_svg(kIcon), EditOp{ColorEditParams{"#123456", "#000000"}}), ColorNotFound);
    EXPECT_THROW(apply_edit(parse_svg(kIcon), EditOp{ColorEditParams{"blue", "#000000"}}), InvalidEditOp);
}

TEST(AddStroke, StrokesUnstrokedShapes) {
    const auto out = apply_edit(parse_svg(kIcon), EditOp{AddStrokeParams{"#000000", 2}});
    const auto& rect = out.root.children()[0];
    ASSERT_TRUE(rect.has("stroke"));
    EXPECT_EQ(*rect.attr_text("stroke-width"), "2");
    EXPECT_THROW(apply_edit(parse_svg(R"(<svg viewBox="0 0 128 128"/>)"), EditOp{AddStrokeParams{"#000000", 2}}),
                 NoShapes);
}

TEST(Translate, ZeroIsIdentity) {
    const auto doc = parse_svg(kIcon);
    EXPECT_EQ(raster::render(apply_edit(doc, EditOp{TranslateParams{0, 0}})), raster::render(doc));
}

TEST(Translate, MatchesPixelShift) {
    for (const auto& doc : simple_icons(6, 51)) {
        const auto before = raster::render(doc);
        const auto after = raster::render(apply_edit(doc, EditOp{TranslateParams{7, -5}}));
        expect_oracle(after, svgkit::testing::shift_image(before, 28, -20));
    }
}

TEST(Translate, BoundedKeepsContentOnCanvas) {
    const auto doc = parse_svg(R"(<svg viewBox="0 0 128 128"><rect x="100" y="10" width="20" height="20"/></svg>)");
    const auto out = apply_edit(doc, EditOp{TranslateParams{30, -30, true}});
    const auto b = raster::content_bounds(out);
    ASSERT_TRUE(b.has_value());
    EXPECT_LE(b->x1, 128.0);
    EXPECT_GE(b->y0, 0.0);
}

TEST(Flip, MatchesMirror) {
    for (const auto& doc : simple_icons(6, 52)) {
        const auto before = raster::render(doc);
        expect_oracle(raster::render(apply_edit(doc, EditOp{FlipParams{FlipAxis::Horizontal}})),
                      svgkit::testing::mirror_horizontal(before));
        expect_oracle(raster::render(apply_edit(doc, EditOp{FlipParams{FlipAxis::Vertical}})),
                      svgkit::testing::mirror_vertical(before));
    }
}

TEST(Rotate, QuarterTurnsMatchRasterRotation) {
    for (const auto& doc : simple_icons(4, 53)) {
        const auto before = raster::render(doc);
        for (int q = 1; q <= 3; ++q) {
            const auto after = raster::render(apply_edit(doc, EditOp{RotateParams{90.0 * q}}));
            expect_oracle(after, svgkit::testing::rotate_quarter(before, q));
        }
    }
}

TEST(Transparency, BlendsTowardWhite) {
    const auto doc = parse_svg(kIcon);
    const auto before = raster::render(doc);
    const auto after = raster::render(apply_edit(doc, EditOp{TransparencyParams{0.4}}));
    int worst = 0;
    for (std::size_t i = 0; i < before.data.size(); ++i) {
        const double expect = 0.4 * before.data[i] + 0.6 * 255;
        worst = std::max(worst, int(std::lround(std::abs(after.data[i] - expect))));
    }
    EXPECT_LE(worst, 1);
    EXPECT_EQ(raster::render(apply_edit(doc, EditOp{TransparencyParams{1}})), before);
}

TEST(Scale, UnitFactorIsIdentity) {
    const auto doc = parse_svg(kIcon);
    EXPECT_EQ(raster::render(apply_edit(doc, EditOp{ScaleParams{1}})), raster::render(doc));
    const auto half = apply_edit(doc, EditOp{ScaleParams{0.5}});
    const auto b = raster::content_bounds(half);
    const auto b0 = raster::content_bounds(doc);
    // bounds come from flattened outlines
    EXPECT_NEAR(b->x1 - b->x0, (b0->x1 - b0->x0) / 2, 0.01);
}

TEST(Crop, SetsHalfWindow) {
    const auto doc = parse_svg(kIcon);
    const auto left = apply_edit(doc, EditOp{CropParams{CropRegion::LeftHalf}});
    EXPECT_EQ(*left.root.attr_text("viewBox"), "0 0 64 128");
    const auto bottom = apply_edit(doc, EditOp{CropParams{CropRegion::BottomHalf}});
    EXPECT_EQ(*bottom.root.attr_text("viewBox"), "0 64 128 64");
}

TEST(Validate, OutOfDomain) {
    EXPECT_THROW(EditOp{ScaleParams{0}}.validate(), InvalidEditOp);
    EXPECT_THROW(EditOp{TransparencyParams{1.5}}.validate(), InvalidEditOp);
    EXPECT_THROW((EditOp{AddStrokeParams{"#000000", -1}}.validate()), InvalidEditOp);
    EXPECT_THROW(kind_from_name("blur"), InvalidEditOp);
}

TEST(Instruction, ColorFormat) {
    EXPECT_EQ(make_instruction(EditOp{ColorEditParams{"#00abff", "#D8BFD8"}}, 1), "Change color #00abff to #D8BFD8");
}

TEST(Instruction, SeededTemplatePick) {
    const EditOp flip{FlipParams{FlipAxis::Horizontal}};
    const auto& pool = instruction_templates(EditKind::Flip);
    EXPECT_EQ(pool.size(), 15u);
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto text = make_instruction(flip, seed);
        EXPECT_EQ(text, make_instruction(flip, seed));
        bool from_pool = false;
        for (const auto& t : pool) from_pool |= text.rfind(t, 0) == 0;
        EXPECT_TRUE(from_pool) << text;
        seen.insert(text);
    }
    EXPECT_GT(seen.size(), 5u);
}

TEST(Params, JsonRoundTrip) {
    const std::vector<EditOp> ops{EditOp{ColorEditParams{"#00abff", "#d8bfd8"}}, EditOp{AddStrokeParams{"#000000", 1.5}},
                                  EditOp{TranslateParams{3, -4, true}},          EditOp{ScaleParams{0.75}},
                                  EditOp{RotateParams{-30}},                     EditOp{FlipParams{FlipAxis::Vertical}},
                                  EditOp{TransparencyParams{0.25}},              EditOp{CropParams{CropRegion::TopHalf}}};
    for (const auto& op : ops) {
        const auto back = EditOp::from_json(op.kind(), nlohmann::json::parse(op.params_json().dump()));
        EXPECT_EQ(back.params_json().dump(), op.params_json().dump());
        EXPECT_EQ(kind_from_name(kind_name(op.kind())), op.kind());
    }
}

TEST(Synthesis, EightDistinctKinds) {
    std::vector<CorpusEntry> corpus{{"icon", parse_svg(kIcon)}};
    const auto result = synthesize_pairs(corpus, 8, 99);
    ASSERT_EQ(result.samples.size(), 8u) << (result.skipped.empty() ? "" : result.skipped[0]);
    std::set<EditKind> kinds;
    for (const auto& s : result.samples) kinds.insert(s.op.kind());
    EXPECT_EQ(kinds.size(), 8u);
}

TEST(Synthesis, RenderableAndDeterministic) {
    std::vector<CorpusEntry> corpus;
    int i = 0;
    for (const auto& src : svgkit::testing::canonical_corpus(12, 61)) corpus.push_back({"d" + std::to_string(i++), parse_svg(src)});
    const auto a = synthesize_pairs(corpus, 5, 7);
    const auto b = synthesize_pairs(corpus, 5, 7);
    EXPECT_EQ(to_jsonl(a.samples), to_jsonl(b.samples));
    EXPECT_EQ(a.samples.size() + a.skipped.size(), 60u);
    for (const auto& s : a.samples) EXPECT_TRUE(core::validate_renderable(s.edited)) << s.id;
    EXPECT_NE(to_jsonl(a.samples), to_jsonl(synthesize_pairs(corpus, 5, 8).samples));
}

TEST(Synthesis, SkipsInsteadOfAborting) {
    std::vector<CorpusEntry> corpus{{"empty", parse_svg(R"(<svg viewBox="0 0 128 128"/>)")}, {"icon", parse_svg(kIcon)}};
    const auto result = synthesize_pairs(corpus, 8, 3);
    EXPECT_FALSE(result.skipped.empty());
    std::size_t from_icon = 0;
    for (const auto& s : result.samples) from_icon += s.id.rfind("icon", 0) == 0;
    EXPECT_EQ(from_icon, 8u);
}
