#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "corpus.hpp"
#include "raster_oracle.hpp"
#include "svgkit/core/document.hpp"
#include "svgkit/error.hpp"
#include "svgkit/raster/animation.hpp"
#include "svgkit/raster/image.hpp"
#include "svgkit/raster/metrics.hpp"
#include "svgkit/raster/render.hpp"

using namespace svgkit;
using namespace svgkit::raster;
using core::parse_svg;

namespace {

RasterImage random_image(std::mt19937_64& rng, int w, int h) {
    RasterImage img(w, h);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

// smoother than uniform noise so SSIM lands away from zero
RasterImage random_blobs(std::mt19937_64& rng, int size) {
    std::string svg = "<svg viewBox=\"0 0 64 64\">";
    for (int i = 0; i < 6; ++i) {
        char color[8];
        std::snprintf(color, sizeof color, "#%06x", static_cast<unsigned>(rng() & 0xFFFFFF));
        svg += "<circle cx=\"" + std::to_string(rng() % 64) + "\" cy=\"" + std::to_string(rng() % 64) + "\" r=\"" +
               std::to_string(4 + rng() % 20) + "\" fill=\"" + color + "\"/>";
    }
    return render(parse_svg(svg + "</svg>"), RenderOptions{size});
}

} // namespace

TEST(Mse, Examples) {
    const RasterImage white(8, 8), black = black_image(8, 8);
    EXPECT_EQ(mse(white, white), 0.0);
    EXPECT_EQ(mse(black, white), 255.0 * 255.0);
    RasterImage a(2, 2, {0, 0, 0}), b = a;
    b.data[0] = 255;
    EXPECT_DOUBLE_EQ(mse(a, b), 255.0 * 255.0 / 12.0);
    EXPECT_THROW(mse(RasterImage(2, 2), RasterImage(3, 2)), DimensionMismatch);
}

TEST(Psnr, Examples) {
    const RasterImage white(16, 16), black = black_image(16, 16);
    EXPECT_EQ(psnr(black, white), 0.0);
    EXPECT_EQ(psnr(white, white), 100.0);
    EXPECT_NEAR(psnr_from_mse(255.0 * 255.0 / 100.0), 20.0, 1e-12);
    EXPECT_EQ(psnr_from_mse(1e-30), 100.0);
}

TEST(Ssim, Examples) {
    std::mt19937_64 rng(1);
    const auto x = random_blobs(rng, 64);
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
    const RasterImage gray(32, 32, {128, 128, 128});
    EXPECT_NEAR(ssim(gray, gray), 1.0, 1e-12);
    EXPECT_LT(ssim(black_image(32, 32), RasterImage(32, 32)), 0.01);
    EXPECT_THROW(ssim(RasterImage(8, 8), RasterImage(8, 8)), TooSmall);
}

TEST(Ssim, KnownValueOnConstants) {
    // constant images: only the luminance term is left
    const RasterImage a(16, 16, {100, 100, 100}), b(16, 16, {150, 150, 150});
    const double c1 = (0.01 * 255) * (0.01 * 255);
    const double expect = (2 * 100.0 * 150.0 + c1) / (100.0 * 100.0 + 150.0 * 150.0 + c1);
    EXPECT_NEAR(ssim(a, b), expect, 1e-9);
}

TEST(Metrics, Symmetry) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto a = i % 2 ? random_image(rng, 24, 20) : random_blobs(rng, 32);
        const auto b = i % 2 ? random_image(rng, 24, 20) : random_blobs(rng, 32);
        EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-9);
        EXPECT_EQ(mse(a, b), mse(b, a));
        const double s = ssim(a, b);
        EXPECT_GE(s, -1.0);
        EXPECT_LE(s, 1.0);
    }
}

TEST(Video, Averages) {
    std::vector<RenderOutcome> same(4), mixed(4);
    for (int k = 0; k < 4; ++k) {
        same[k].image = RasterImage(16, 16);
        mixed[k].image = k < 2 ? RasterImage(16, 16) : black_image(16, 16);
    }
    EXPECT_EQ(video_metric(same, same, Metric::Psnr), 100.0);
    EXPECT_EQ(video_metric(same, mixed, Metric::Psnr), 50.0);
    EXPECT_NEAR(video_metric(same, same, Metric::Ssim), 1.0, 1e-12);
    EXPECT_THROW(video_metric(same, std::vector<RenderOutcome>(3), Metric::Mse), LengthMismatch);
}

TEST(Rasterize, Outcomes) {
    const auto blank = rasterize(parse_svg(R"(<svg viewBox="0 0 128 128"/>)"), 64);
    EXPECT_TRUE(blank.ok());
    EXPECT_EQ(blank.image, RasterImage(64, 64));

    RenderOptions opts;
    opts.size = 64;
    const auto broken = rasterize_text(R"(<svg viewBox="0 0 128 128"><path d="M0 0L"/></svg>)", opts);
    EXPECT_FALSE(broken.ok());
    EXPECT_EQ(broken.image, black_image(64, 64));

    const auto rect = rasterize(parse_svg(R"(<svg viewBox="0 0 128 128"><rect width="128" height="128"/></svg>)"), 64);
    EXPECT_TRUE(rect.ok());
    EXPECT_EQ(rect.image, black_image(64, 64));
    EXPECT_THROW(rasterize(parse_svg(R"(<svg viewBox="0 0 128 128"/>)"), 4), TooSmall);
}

TEST(Render, HalfCoverageIsMidGray) {
    const auto img = render(parse_svg(R"(<svg viewBox="0 0 2 1"><rect width="1" height="1"/></svg>)"), RenderOptions{16});
    // letterboxed: left half of the middle band black, right half white
    EXPECT_EQ(img.rgb(2, 8), (core::Rgb{0, 0, 0}));
    EXPECT_EQ(img.rgb(13, 8), (core::Rgb{255, 255, 255}));
    EXPECT_EQ(img.rgb(2, 1), (core::Rgb{255, 255, 255}));
    const auto edge = render(parse_svg(R"(<svg viewBox="0 0 16 16"><rect width="8.5" height="16"/></svg>)"), RenderOptions{16});
    EXPECT_NEAR(edge.rgb(8, 4).r, 128, 1);
}

TEST(Png, RoundTrip) {
    std::mt19937_64 rng(3);
    const auto img = random_image(rng, 17, 9);
    const auto path = std::filesystem::temp_directory_path() / "svgkit_png_test.png";
    write_png(img, path);
    EXPECT_EQ(read_png(path), img);
    std::filesystem::remove(path);
    EXPECT_THROW(read_png(path), ImageIoError);
}

TEST(Animation, ClockValues) {
    EXPECT_EQ(parse_clock_value("2s"), 2.0);
    EXPECT_EQ(parse_clock_value("150ms"), 0.15);
    EXPECT_EQ(parse_clock_value("1.5"), 1.5);
    EXPECT_EQ(parse_clock_value("00:01:02.5"), 62.5);
    EXPECT_EQ(parse_clock_value("1min"), 60.0);
    EXPECT_FALSE(parse_clock_value("soon").has_value());
}

TEST(Animation, FrameTimes) {
    EXPECT_EQ(frame_times(1, 5), std::vector<double>{0});
    const auto t = frame_times(8, 7);
    ASSERT_EQ(t.size(), 8u);
    for (int k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(t[k], k);
}

TEST(Animation, StaticDocumentGivesIdenticalFrames) {
    const auto doc = parse_svg(R"(<svg viewBox="0 0 128 128"><circle cx="40" cy="40" r="20"/></svg>)");
    const auto frames = rasterize_animation(doc, 64, 8);
    ASSERT_EQ(frames.size(), 8u);
    for (const auto& f : frames) EXPECT_EQ(f.image, frames[0].image);
    EXPECT_EQ(resolve_duration(doc), 0.0);
}

TEST(Animation, LinearMotionCentroid) {
    // the window is padded by 16 units so the circle is never clipped
    const auto doc = parse_svg(
        R"(<svg viewBox="-16 -16 160 160"><circle cx="0" cy="64" r="8" fill="#000000">)"
        R"(<animate attributeName="cx" from="0" to="128" dur="3.5s"/></circle></svg>)");
    EXPECT_EQ(resolve_duration(doc), 3.5);
    const auto frames = rasterize_animation(doc, 160, 8);
    ASSERT_EQ(frames.size(), 8u);
    for (int k = 0; k < 8; ++k) {
        ASSERT_TRUE(frames[k].ok());
        const auto c = svgkit::testing::ink_centroid(frames[k].image);
        EXPECT_NEAR(c.x - 16, 128.0 * k / 7, 1.0) << "frame " << k;
        EXPECT_NEAR(c.y - 16, 64, 1.0);
    }
}

TEST(Animation, TransformAndSet) {
    const auto doc = parse_svg(
        R"(<svg viewBox="0 0 128 128"><rect width="10" height="10"><animateTransform attributeName="transform" )"
        R"(type="translate" from="0 0" to="100 0" dur="2s"/><set attributeName="fill" to="#ff0000" begin="1s"/></rect></svg>)");
    const auto mid = sample_document(doc, 1.0);
    const auto out = core::serialize_svg(mid);
    EXPECT_NE(out.find("translate(50"), std::string::npos) << out;
    EXPECT_NE(out.find("#ff0000"), std::string::npos) << out;
    EXPECT_EQ(out.find("animate"), std::string::npos) << out;
    const auto start = core::serialize_svg(sample_document(doc, 0.5));
    EXPECT_EQ(start.find("#ff0000"), std::string::npos) << start;
}

TEST(Animation, BrokenDocumentPenalizesEveryFrame) {
    RenderOptions opts;
    opts.size = 32;
    const auto frames = rasterize_animation_text("<svg><g></svg>", opts, 8);
    ASSERT_EQ(frames.size(), 8u);
    for (const auto& f : frames) {
        EXPECT_FALSE(f.ok());
        EXPECT_EQ(f.image, black_image(32, 32));
    }
}

TEST(Bounds, IncludeStroke) {
    const auto b = content_bounds(parse_svg(
        R"(<svg viewBox="0 0 128 128"><rect x="10" y="10" width="20" height="20" stroke="#000000" stroke-width="4"/></svg>)"));
    ASSERT_TRUE(b.has_value());
    EXPECT_NEAR(b->x0, 8, 1e-9);
    EXPECT_NEAR(b->x1, 32, 1e-9);
    EXPECT_FALSE(content_bounds(parse_svg(R"(<svg viewBox="0 0 128 128"/>)")).has_value());
}
