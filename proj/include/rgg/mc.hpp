#pragma once

#include "rgg/model.hpp"
#include "rgg/stats.hpp"
#include "rgg/theory.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rgg::mc {

struct StatisticSpec {
    StatisticKind kind = StatisticKind::kSignedTriangle;
    int k = 3;
};

/// Accepts the long kind names ("signed-triangle", ...) and the short CLI
/// names "triangle", "clique", "cycle".
StatisticSpec parse_statistic_spec(std::string_view name, int k);

/// Value of the statistic on one graph. kPlainCount counts k-cliques.
double evaluate_statistic(const AdjacencySample& graph, double p, const StatisticSpec& spec);

/// Mean and SE over `reps` graphs; replicate r uses graph seed
/// stream_key(seed, replicate, r). Independent of `workers`.
Estimate estimate_statistic(const ModelParams& params, SampleMode mode, const StatisticSpec& statistic,
                            std::uint64_t reps, std::uint64_t seed, int workers = 1);

enum class TestKind { kHalfMeanThreshold, kCalibratedQuantile };

std::string_view to_string(TestKind test);
TestKind parse_test_kind(std::string_view name);

struct DetectionOptions {
    TestKind test = TestKind::kHalfMeanThreshold;
    SampleMode mode = SampleMode::kSoftSphere;
    StatisticSpec statistic{};
    double alpha = 0.05;  ///< level of the calibrated-quantile test
    int workers = 1;
    bool timing = false;  ///< fill wallclock_ms; off keeps output reproducible
};

struct ExperimentRecord {
    ModelParams params{};
    SampleMode mode = SampleMode::kSoftSphere;
    StatisticSpec statistic{};
    TestKind test = TestKind::kHalfMeanThreshold;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double stat_mean = 0.0;  ///< statistic under the alternative
    double stat_se = 0.0;
    double power = 0.0;
    double type1 = 0.0;
    double threshold = 0.0;
    std::string phase_label;
    std::int64_t wallclock_ms = 0;
    bool inconclusive = false;  ///< pilot mean not positive
    bool degenerate = false;    ///< p in {0, 1}: the statistic is constant
    bool failed = false;
    std::string error;
};

/// Tests H0 = er against H1 = (params, mode) with `reps` samples from each.
///  - half-mean-threshold: a pilot batch of reps/2 H1 samples estimates
///    Delta = E[stat]; reject when stat >= Delta / 2.
///  - calibrated-quantile: a separate batch of reps H0 samples gives the
///    empirical (1 - alpha) quantile; reject when stat >= that quantile.
/// Pilot, evaluation, null and calibration batches use disjoint streams.
ExperimentRecord detection_experiment(const ModelParams& params, std::uint64_t reps, std::uint64_t seed,
                                      const DetectionOptions& options = {});

struct GridPoint {
    ModelParams params{};
    SampleMode mode = SampleMode::kSoftSphere;
    std::optional<theory::PhasePoint> phase;
};

struct ExperimentConfig {
    std::vector<GridPoint> grid;
    std::uint64_t reps = 100;
    std::uint64_t master_seed = 0;
    StatisticSpec statistic{};
    TestKind test = TestKind::kHalfMeanThreshold;
    int workers = 1;
    bool timing = false;

    void validate() const;
};

/// JSON config. Keys: reps, master_seed, statistic {kind, k}, test, workers,
/// timing, grid [{n, p, d, q, mode}], and optionally phase_grid
/// {n, p, mode, alpha [...], beta [...]} expanded to d = ceil(n^alpha),
/// q = n^-beta after the explicit grid.
ExperimentConfig parse_experiment_config(std::string_view json_text);

/// Phase label for a grid point: its own (alpha, beta) when present, else
/// derived from d = n^alpha, q = n^-beta when both are positive, else "".
std::string phase_label(const GridPoint& point);

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// One record per grid point from `start_index` on, in grid order. Grid point
/// i uses seed derive_key(master_seed, i), so a resumed sweep reproduces the
/// records of a full run. Exceptions are caught per point and recorded.
void sweep(const ExperimentConfig& config, const RecordSink& sink, std::size_t start_index = 0);

std::string csv_header();
std::string csv_row(const ExperimentRecord& record);

/// Single-line JSON object.
std::string record_to_json(const ExperimentRecord& record);

/// %.17g
std::string format_double(double x);

}  // namespace rgg::mc
