#include "rgg/mc.hpp"
#include "rgg/theory.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rgg;
using namespace rgg::mc;

const StatisticSpec kTriangle{StatisticKind::kSignedTriangle, 3};

TEST(EstimateStatistic, ErdosRenyiMeanZero) {
    const auto est = estimate_statistic({10, 0.5, 2, 0.0}, SampleMode::kErdosRenyi, kTriangle, 100'000, 61);
    EXPECT_LE(std::abs(est.mean), 3.0 * est.se);
    EXPECT_EQ(est.reps, 100'000u);
}

TEST(EstimateStatistic, SoftSphereTriangleBracket) {
    const int d = 64;
    const auto est = estimate_statistic({3, 0.5, d, 1.0}, SampleMode::kSoftSphere, kTriangle, 1'000'000, 62);
    const double pi = std::numbers::pi;
    EXPECT_GE(est.mean, 1.0 / (2 * pi * std::sqrt(2 * pi)) / std::sqrt(d) - 3 * est.se);
    EXPECT_LE(est.mean, 1.0 / (4 * std::sqrt(pi)) / std::sqrt(d) + 3 * est.se);
}

TEST(EstimateStatistic, WorkerCountDoesNotChangeBits) {
    const ModelParams params{20, 0.4, 30, 0.6};
    const auto one = estimate_statistic(params, SampleMode::kSoftSphere, kTriangle, 5000, 63, 1);
    const auto eight = estimate_statistic(params, SampleMode::kSoftSphere, kTriangle, 5000, 63, 8);
    EXPECT_EQ(one.mean, eight.mean);
    EXPECT_EQ(one.se, eight.se);
}

TEST(EstimateStatistic, RejectsZeroReps) {
    EXPECT_THROW(estimate_statistic({5, 0.5, 4, 1.0}, SampleMode::kErdosRenyi, kTriangle, 0, 1), DomainError);
}

TEST(StatisticSpec, Parsing) {
    EXPECT_EQ(parse_statistic_spec("triangle", 3).kind, StatisticKind::kSignedTriangle);
    EXPECT_EQ(parse_statistic_spec("clique", 4).kind, StatisticKind::kSignedClique);
    EXPECT_EQ(parse_statistic_spec("cycle", 5).kind, StatisticKind::kSignedCycle);
    EXPECT_THROW(parse_statistic_spec("triangle", 4), DomainError);
    EXPECT_THROW(parse_statistic_spec("star", 3), DomainError);
}

TEST(Detection, ZeroStrengthGivesNoPower) {
    DetectionOptions opt;
    opt.test = TestKind::kCalibratedQuantile;
    const auto rec = detection_experiment({30, 0.5, 30, 0.0}, 1000, 64, opt);
    const double se = std::sqrt(0.05 * 0.95 / 1000);
    EXPECT_LE(std::abs(rec.power - rec.type1), 3.0 * std::sqrt(2.0) * se);
    EXPECT_LE(rec.type1, 0.05 + 3 * se);
}

TEST(Detection, StrongGeometryDetected) {
    const auto rec = detection_experiment({60, 0.5, 30, 1.0}, 200, 65);
    EXPECT_FALSE(rec.inconclusive);
    EXPECT_GE(rec.power, 0.95);
    EXPECT_LE(rec.type1, 0.05);
    EXPECT_GT(rec.stat_mean, 0.0);
    EXPECT_GE(rec.stat_se, 0.0);
}

TEST(Detection, RecordInvariants) {
    for (auto test : {TestKind::kHalfMeanThreshold, TestKind::kCalibratedQuantile}) {
        DetectionOptions opt;
        opt.test = test;
        const auto rec = detection_experiment({20, 0.3, 10, 0.5}, 100, 66, opt);
        EXPECT_GE(rec.power, 0.0);
        EXPECT_LE(rec.power, 1.0);
        EXPECT_GE(rec.type1, 0.0);
        EXPECT_LE(rec.type1, 1.0);
        EXPECT_GE(rec.stat_se, 0.0);
        EXPECT_EQ(rec.wallclock_ms, 0);
    }
}

TEST(Detection, RejectsTooFewReps) {
    EXPECT_THROW(detection_experiment({20, 0.5, 10, 1.0}, 99, 1), DomainError);
}

TEST(Detection, DegenerateDensity) {
    for (double p : {0.0, 1.0}) {
        const auto rec = detection_experiment({10, p, 10, 1.0}, 100, 67);
        EXPECT_TRUE(rec.degenerate);
        EXPECT_FALSE(rec.failed);
    }
}

TEST(Detection, WorkerInvariant) {
    DetectionOptions a;
    DetectionOptions b;
    b.workers = 4;
    const auto ra = detection_experiment({25, 0.5, 20, 0.8}, 300, 68, a);
    const auto rb = detection_experiment({25, 0.5, 20, 0.8}, 300, 68, b);
    EXPECT_EQ(csv_row(ra), csv_row(rb));
}

TEST(Detection, PowerMonotoneInStrength) {
    std::vector<double> power;
    for (double q : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        power.push_back(detection_experiment({100, 0.5, 100, q}, 200, 69).power);
    }
    for (std::size_t i = 1; i < power.size(); ++i) {
        const double se = std::sqrt((power[i] * (1 - power[i]) + power[i - 1] * (1 - power[i - 1])) / 200);
        EXPECT_GE(power[i], power[i - 1] - 2 * se) << i;
    }
}

TEST(Detection, VarianceScalingStable) {
    const int n = 40;
    const double q = 0.5;
    std::vector<double> ratio;
    for (int d : {16, 64, 256}) {
        const auto est = estimate_statistic({n, 0.5, d, q}, SampleMode::kSoftSphere, kTriangle, 4000, 70);
        const double var = est.se * est.se * static_cast<double>(est.reps);
        ratio.push_back(var / (std::pow(n, 3) + std::pow(n, 4) * std::pow(q, 4) / d));
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    EXPECT_LT(*hi, 4.0 * *lo);
}

std::string run_sweep(const ExperimentConfig& cfg, std::size_t start = 0) {
    std::ostringstream os;
    os << csv_header() << '\n';
    sweep(cfg, [&](const ExperimentRecord& r) { os << csv_row(r) << '\n'; }, start);
    return os.str();
}

TEST(Sweep, CsvHeader) {
    EXPECT_EQ(csv_header(),
              "n,p,d,q,mode,stat_kind,k,reps,seed,stat_mean,stat_se,power,type1,threshold,phase_label,wallclock_ms");
}

TEST(Sweep, PhaseGridLabels) {
    const auto cfg = parse_experiment_config(R"({
        "reps": 100, "master_seed": 7,
        "phase_grid": {"n": 64, "alpha": [0.5, 1.0, 2.0, 3.0], "beta": [0.1, 0.5, 1.0]}
    })");
    ASSERT_EQ(cfg.grid.size(), 12u);
    EXPECT_EQ(cfg.grid[0].params.d, 8);
    EXPECT_DOUBLE_EQ(cfg.grid[0].params.q, std::pow(64.0, -0.1));
    std::vector<ExperimentRecord> records;
    sweep(cfg, [&](const ExperimentRecord& r) { records.push_back(r); });
    ASSERT_EQ(records.size(), 12u);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& pt = cfg.grid[i];
        EXPECT_EQ(records[i].phase_label, theory::to_string(theory::phase_classify(*pt.phase)));
        EXPECT_FALSE(records[i].failed) << records[i].error;
    }
    EXPECT_EQ(records[0].phase_label, "Possible");
    EXPECT_EQ(records.back().phase_label, "Impossible");
}

TEST(Sweep, DegenerateAndFailedPoints) {
    const auto cfg = parse_experiment_config(R"({
        "reps": 100, "master_seed": 8,
        "grid": [{"n": 10, "p": 0.0, "d": 8, "q": 1.0},
                 {"n": 10, "p": 0.5, "d": 1, "q": 1.0, "mode": "hard-sphere"},
                 {"n": 10, "p": 0.5, "d": 8, "q": 1.0}]
    })");
    std::vector<ExperimentRecord> records;
    sweep(cfg, [&](const ExperimentRecord& r) { records.push_back(r); });
    ASSERT_EQ(records.size(), 3u);
    EXPECT_TRUE(records[0].degenerate);
    EXPECT_TRUE(records[1].failed);
    EXPECT_TRUE(std::isnan(records[1].power));
    EXPECT_FALSE(records[2].failed);
}

TEST(Sweep, RerunIsByteIdenticalAndResumable) {
    const auto cfg = parse_experiment_config(R"({
        "reps": 120, "master_seed": 9, "workers": 2,
        "grid": [{"n": 12, "p": 0.5, "d": 6, "q": 0.9}, {"n": 14, "p": 0.3, "d": 20, "q": 0.5},
                 {"n": 16, "p": 0.5, "d": 30, "q": 1.0, "mode": "soft-sphere-resample"}]
    })");
    const std::string a = run_sweep(cfg);
    EXPECT_EQ(a, run_sweep(cfg));

    auto single = cfg;
    single.workers = 1;
    EXPECT_EQ(a, run_sweep(single));

    const std::string tail = run_sweep(cfg, 1);
    const auto first_row_end = a.find('\n', a.find('\n') + 1);
    EXPECT_EQ(a.substr(0, a.find('\n') + 1) + a.substr(first_row_end + 1), tail);
}

TEST(Sweep, ConfigValidation) {
    EXPECT_THROW(parse_experiment_config(R"({"reps": 100})"), DomainError);
    EXPECT_THROW(parse_experiment_config(R"({"reps": 100, "master_seed": 1, "grid": []})"), DomainError);
    EXPECT_THROW(parse_experiment_config(R"({"reps": 1, "master_seed": 1, "grid": [{"n": 5, "p": 0.5}]})"),
                 DomainError);
    EXPECT_THROW(parse_experiment_config("[1, 2]"), DomainError);
    EXPECT_THROW(parse_experiment_config("{"), DomainError);
}

TEST(Format, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
