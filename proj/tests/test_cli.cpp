#include "rgg/cli.hpp"
#include "rgg/graph_io.hpp"
#include "rgg/mc.hpp"
#include "rgg/model.hpp"
#include "rgg/stats.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = rgg::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rgg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

void expect_single_line_error(const Result& r, const std::string& category) {
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
    const json j = json::parse(r.err);
    EXPECT_EQ(j.at("error"), category);
    EXPECT_TRUE(j.contains("message"));
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, PhaseExample) {
    const auto r = run({"theory", "--quantity", "phase", "--alpha", "4", "--beta", "0.1"});
    EXPECT_EQ(r.code, rgg::cli::kExitOk);
    EXPECT_EQ(r.out, "{\"label\":\"Impossible\"}\n");
}

TEST_F(CliTest, StoredFourCycle) {
    const auto r = run({"stat", "--in", RGG_TEST_DATA_DIR "/c4.json", "--stat", "cycle", "--k", "4", "--p", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("value").get<double>(), 0.1875);
    EXPECT_EQ(j.at("kind"), "signed-cycle");
    EXPECT_EQ(j.at("method"), "enumeration");
}

TEST_F(CliTest, EmptyGraphAtZeroDensity) {
    const auto r = run({"sample", "--n", "5", "--p", "0", "--mode", "er", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j.at("edges").empty());
    EXPECT_EQ(j.at("n"), 5);
}

TEST_F(CliTest, SampleStatRoundTrip) {
    const std::string file = path("g.json");
    ASSERT_EQ(run({"sample", "--n", "30", "--p", "0.4", "--d", "12", "--q", "0.8", "--mode", "soft-sphere", "--seed",
                   "77", "--out", file})
                  .code,
              0);
    const auto in_process = rgg::sample_graph({30, 0.4, 12, 0.8}, rgg::SampleMode::kSoftSphere, 77).graph;
    EXPECT_EQ(rgg::graph_from_json(rgg::read_text_file(file)).graph.bits(), in_process.bits());

    for (const std::string stat : {"triangle", "clique", "cycle"}) {
        const std::string k = stat == "triangle" ? "3" : "4";
        const auto r = run({"stat", "--in", file, "--stat", stat, "--k", k});
        ASSERT_EQ(r.code, 0) << r.err;
        const double expected = stat == "triangle" ? rgg::signed_triangle_stat(in_process, 0.4).value
                                : stat == "clique" ? rgg::signed_clique_stat(in_process, 0.4, 4).value
                                                   : rgg::signed_cycle_stat(in_process, 0.4, 4).value;
        EXPECT_EQ(json::parse(r.out).at("value").get<double>(), expected) << stat;
    }
}

TEST_F(CliTest, LatentOutput) {
    const std::string latent = path("x.json");
    ASSERT_EQ(run({"sample", "--n", "6", "--p", "0.3", "--d", "5", "--mode", "hard-sphere", "--seed", "2",
                   "--latent-out", latent})
                  .code,
              0);
    const auto x = rgg::latent_from_json(rgg::read_text_file(latent));
    EXPECT_EQ(x.rows(), 6);
}

TEST_F(CliTest, RepeatedInvocationsAreByteIdentical) {
    const std::vector<std::vector<std::string>> commands = {
        {"sample", "--n", "20", "--p", "0.5", "--d", "8", "--q", "0.5", "--mode", "soft-sphere-resample", "--seed", "3"},
        {"detect", "--n", "20", "--p", "0.5", "--d", "10", "--q", "1", "--reps", "100", "--seed", "4"},
        {"--workers", "3", "detect", "--n", "20", "--p", "0.5", "--d", "10", "--q", "1", "--reps", "100", "--seed", "4",
         "--test", "calibrated-quantile"},
        {"theory", "--quantity", "half-moments", "--d", "32"},
        {"theory", "--quantity", "logdet", "--n", "4", "--d", "32"},
        {"theory", "--quantity", "tv-bounds", "--n", "100", "--d", "1000", "--q", "0.001"},
        {"theory", "--quantity", "thresholds", "--p", "0.3", "--d", "64"},
    };
    for (const auto& c : commands) {
        const auto a = run(c);
        const auto b = run(c);
        ASSERT_EQ(a.code, 0) << c.front() << ": " << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_TRUE(json::accept(a.out));
    }
}

TEST_F(CliTest, DetectWorkersDoNotChangeOutput) {
    const std::vector<std::string> base{"detect", "--n", "20", "--p", "0.5", "--d", "10", "--q", "1", "--reps", "200",
                                        "--seed", "4"};
    auto with_workers = base;
    with_workers.insert(with_workers.begin(), {"--workers", "4"});
    EXPECT_EQ(run(base).out, run(with_workers).out);
}

TEST_F(CliTest, TheoryValues) {
    const json g = json::parse(run({"theory", "--quantity", "gamma", "--d", "2"}).out);
    EXPECT_NEAR(g.at("value").get<double>(), 1.0 / 16, 1e-10);
    const json e = json::parse(run({"theory", "--quantity", "eta", "--d", "2"}).out);
    EXPECT_NEAR(e.at("value").get<double>(), 1.0 / 48, 1e-10);
    const json tv = json::parse(run({"theory", "--quantity", "tv-bounds", "--n", "100", "--d", "1000", "--q", "0.001"}).out);
    EXPECT_NEAR(tv.at("tv_weak_noise").get<double>(), 0.05, 1e-15);
}

TEST_F(CliTest, SweepWritesDeterministicCsv) {
    const std::string cfg = path("cfg.json");
    std::ofstream(cfg) << R"({"reps": 100, "master_seed": 5,
        "grid": [{"n": 12, "p": 0.5, "d": 6, "q": 1.0}, {"n": 12, "p": 0.5, "d": 60, "q": 0.3}]})";
    const std::string a = path("a.csv");
    const std::string b = path("b.csv");
    ASSERT_EQ(run({"sweep", "--config", cfg, "--out", a}).code, 0);
    ASSERT_EQ(run({"--workers", "2", "sweep", "--config", cfg, "--out", b}).code, 0);
    const std::string text = rgg::read_text_file(a);
    EXPECT_EQ(text, rgg::read_text_file(b));
    EXPECT_EQ(text.substr(0, text.find('\n')), rgg::mc::csv_header());
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);

    // Resuming at index 1 appends exactly the missing rows.
    const std::string c = path("c.csv");
    ASSERT_EQ(run({"sweep", "--config", cfg, "--out", c}).code, 0);
    {
        const std::string full = rgg::read_text_file(c);
        const auto cut = full.find('\n', full.find('\n') + 1);
        std::ofstream(c, std::ios::trunc) << full.substr(0, cut + 1);
    }
    ASSERT_EQ(run({"sweep", "--config", cfg, "--out", c, "--start-index", "1"}).code, 0);
    EXPECT_EQ(rgg::read_text_file(c), text);
}

TEST_F(CliTest, VerifySingleSuite) {
    const auto r = run({"verify", "--suite", "specfun", "--seed", "1"});
    EXPECT_EQ(r.code, 0) << r.out;
    std::istringstream lines(r.out);
    std::string line;
    std::string last;
    while (std::getline(lines, line)) {
        EXPECT_TRUE(json::accept(line));
        last = line;
    }
    const json summary = json::parse(last);
    EXPECT_EQ(summary.at("passed"), summary.at("total"));
}

TEST_F(CliTest, ValidationErrors) {
    expect_single_line_error(run({"sample", "--n", "5", "--p", "0.5", "--seed", "1", "--mode", "er", "--bogus", "1"}),
                             "validation");
    expect_single_line_error(run({"sample", "--n", "5", "--p", "1.5", "--mode", "er", "--seed", "1"}), "validation");
    expect_single_line_error(run({"sample", "--n", "5", "--p", "0.5", "--mode", "nope", "--seed", "1"}), "validation");
    expect_single_line_error(run({"stat", "--in", path("missing.json"), "--stat", "triangle"}), "validation");
    expect_single_line_error(run({"stat", "--in", RGG_TEST_DATA_DIR "/c4.json", "--stat", "cycle", "--k", "9"}),
                             "validation");
    expect_single_line_error(run({"theory", "--quantity", "logdet", "--n", "5", "--d", "4"}), "validation");
    expect_single_line_error(run({"theory", "--quantity", "phase", "--alpha", "1"}), "validation");
    expect_single_line_error(run({"verify", "--suite", "nope", "--seed", "1"}), "validation");
    expect_single_line_error(run({"detect", "--n", "20", "--p", "0.5", "--d", "10", "--q", "1", "--reps", "10",
                                  "--seed", "4"}),
                             "validation");
    expect_single_line_error(run({}), "validation");
    expect_single_line_error(run({"sample", "--p", "0.5", "--mode", "er", "--seed", "1"}), "validation");

    for (const auto& args : std::vector<std::vector<std::string>>{{"sample", "--n", "5", "--p", "2", "--mode", "er",
                                                                    "--seed", "1"},
                                                                   {"frobnicate"}}) {
        EXPECT_EQ(run(args).code, rgg::cli::kExitValidation);
    }
}

TEST_F(CliTest, MalformedGraphFile) {
    const std::string bad = path("bad.json");
    std::ofstream(bad) << "{\"n\": 3, \"edges\": [[0, 1]";
    expect_single_line_error(run({"stat", "--in", bad, "--stat", "triangle"}), "validation");
}

}  // namespace
