#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("svgkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) {
        const std::string cmd = std::string(SVGKIT_CLI_PATH) + " " + args + " >" + (dir_ / "stdout").string() +
                                " 2>" + (dir_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name, std::ios::binary) << text; }

    std::string read(const fs::path& p) {
        std::ifstream in(p.is_absolute() ? p : dir_ / p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string path(const std::string& name) { return (dir_ / name).string(); }

    fs::path dir_;
};

const char* kMcqManifest = R"({"id":"q1","task":"mcq","domain":"icon","prompt":"p","reference":"A"})";

} // namespace

TEST_F(Cli, VocabMatchesCheckedInManifest) {
    ASSERT_EQ(run("vocab"), 0);
    EXPECT_EQ(read("stdout"), read(fs::path(SVGKIT_DATA_DIR) / "special_vocab.json"));
}

TEST_F(Cli, NormalizeAndTokenize) {
    write("in.svg", R"(<svg viewBox="0 0 256 256"><!-- x --><circle cx="128" cy="128" r="64" fill-rule="nonzero"/></svg>)");
    ASSERT_EQ(run("normalize " + path("in.svg") + " --out " + path("out.svg")), 0);
    const auto out = read("out.svg");
    EXPECT_NE(out.find(R"(<circle cx="64" cy="64" r="32"/>)"), std::string::npos) << out;
    ASSERT_EQ(run("tokenize " + path("out.svg") + " --stats"), 0);
    const auto stats = nlohmann::json::parse(read("stdout"));
    EXPECT_LT(stats["mean_after"].get<double>(), stats["mean_before"].get<double>());
    ASSERT_EQ(run("tokenize " + path("out.svg") + " --pretty"), 0);
    EXPECT_NE(read("stdout").find("<circle"), std::string::npos);
}

TEST_F(Cli, NormalizeBatchLog) {
    fs::create_directories(dir_ / "in");
    write("in/a.svg", R"(<svg width="64" height="64"><metadata/><rect width="10" height="10"/></svg>)");
    write("in/b.svg", "<svg><g></svg>");
    EXPECT_EQ(run("normalize " + path("in") + " --out-dir " + path("out")), 1);
    std::istringstream log(read(dir_ / "out" / "normalize_log.jsonl"));
    std::string line;
    std::vector<nlohmann::json> rows;
    while (std::getline(log, line)) rows.push_back(nlohmann::json::parse(line));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0]["file"], "a.svg");
    EXPECT_LT(rows[0]["bytes_after"].get<int>(), rows[0]["bytes_before"].get<int>());
    EXPECT_EQ(rows[0]["renderable"], true);
    EXPECT_TRUE(rows[1].contains("error"));
}

TEST_F(Cli, RenderAndMetric) {
    write("a.svg", R"(<svg viewBox="0 0 128 128"><rect width="64" height="64"/></svg>)");
    ASSERT_EQ(run("render " + path("a.svg") + " --size 64 --out " + path("a.png")), 0);
    ASSERT_EQ(run("metric --ref " + path("a.png") + " --pred " + path("a.png")), 0);
    const auto j = nlohmann::json::parse(read("stdout"));
    EXPECT_EQ(j["psnr"].get<double>(), 100.0);
    EXPECT_EQ(j["ssim"].get<double>(), 1.0);
}

TEST_F(Cli, SchemaViolationExitsWithTwo) {
    write("m.jsonl", R"({"id":"q1","task":"mcq","domain":"icon","prompt":"p","reference":"A","extra":1})");
    write("p.jsonl", R"({"id":"q1","output":"A"})");
    EXPECT_EQ(run("bench run --manifest " + path("m.jsonl") + " --pred " + path("p.jsonl") + " --task mcq --out " +
                  path("out")),
              2);
    write("m2.jsonl", kMcqManifest);
    EXPECT_EQ(run("bench run --manifest " + path("m2.jsonl") + " --pred " + path("p.jsonl") + " --task edit --out " +
                  path("out")),
              2);
}

TEST_F(Cli, BenchRunAndAggregate) {
    write("m.jsonl", kMcqManifest);
    write("p.jsonl", R"({"id":"q1","output":"The answer is A."})");
    ASSERT_EQ(run("bench run --manifest " + path("m.jsonl") + " --pred " + path("p.jsonl") + " --task mcq --out " +
                  path("out")),
              0);
    const auto agg = nlohmann::json::parse(read(dir_ / "out" / "aggregate.json"));
    EXPECT_EQ(agg["domains"][0]["tasks"][0]["metrics"]["accuracy"].get<double>(), 100.0);
    ASSERT_EQ(run("bench aggregate " + path("out") + " --out " + path("merged")), 0);
    EXPECT_EQ(read(dir_ / "merged" / "aggregate.json"), read(dir_ / "out" / "aggregate.json"));
}

TEST_F(Cli, EditSynthIsDeterministic) {
    fs::create_directories(dir_ / "corpus");
    write("corpus/a.svg", R"(<svg viewBox="0 0 128 128"><rect x="30" y="30" width="40" height="40" fill="#ff0000"/></svg>)");
    ASSERT_EQ(run("edit-synth " + path("corpus") + " --out " + path("a.jsonl") + " --ops-per-doc 8 --seed 5"), 0);
    ASSERT_EQ(run("edit-synth " + path("corpus") + " --out " + path("b.jsonl") + " --ops-per-doc 8 --seed 5"), 0);
    const auto a = read("a.jsonl");
    EXPECT_EQ(a, read("b.jsonl"));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 8);
}

TEST_F(Cli, BadArguments) {
    EXPECT_NE(run(""), 0);
    EXPECT_NE(run("render " + path("missing.svg") + " --out " + path("x.png")), 0);
}
