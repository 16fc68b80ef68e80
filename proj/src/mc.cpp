#include "rgg/mc.hpp"

#include "rgg/parallel.hpp"
#include "rgg/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rgg::mc {

using nlohmann::json;

StatisticSpec parse_statistic_spec(std::string_view name, int k) {
    if (name == "triangle" || name == "signed-triangle") {
        if (k != 3) throw DomainError("the triangle statistic has k = 3");
        return {StatisticKind::kSignedTriangle, 3};
    }
    if (name == "clique" || name == "signed-clique") return {StatisticKind::kSignedClique, k};
    if (name == "cycle" || name == "signed-cycle") return {StatisticKind::kSignedCycle, k};
    if (name == "plain-count") return {StatisticKind::kPlainCount, k};
    throw DomainError("unknown statistic: " + std::string(name));
}

double evaluate_statistic(const AdjacencySample& graph, double p, const StatisticSpec& spec) {
    switch (spec.kind) {
        case StatisticKind::kSignedTriangle: return signed_triangle_stat(graph, p).value;
        case StatisticKind::kSignedClique:
            return spec.k == 3 ? signed_triangle_stat(graph, p).value : signed_clique_stat(graph, p, spec.k).value;
        case StatisticKind::kSignedCycle: return signed_cycle_stat(graph, p, spec.k).value;
        case StatisticKind::kPlainCount: return clique_count(graph, spec.k).value;
    }
    throw DomainError("unknown statistic kind");
}

namespace {

Estimate to_estimate(const Moments& m) { return {m.mean, m.se(), m.count}; }

// Statistic of replicate r of stream `tag` under `sampler`.
double replicate_value(const GraphSampler& sampler, const StatisticSpec& spec, std::uint64_t seed,
                       StreamTag tag, std::uint64_t r) {
    const GraphSample g = sampler.sample(stream_key(seed, tag, r));
    return evaluate_statistic(g.graph, sampler.params().p, spec);
}

double fraction_at_least(const std::vector<double>& values, double threshold) {
    const auto hits = std::count_if(values.begin(), values.end(), [&](double v) { return v >= threshold; });
    return values.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(values.size());
}

bool degenerate_density(double p) { return p == 0.0 || p == 1.0; }

}  // namespace

Estimate estimate_statistic(const ModelParams& params, SampleMode mode, const StatisticSpec& statistic,
                            std::uint64_t reps, std::uint64_t seed, int workers) {
    if (reps < 1) throw DomainError("reps must be at least 1");
    const GraphSampler sampler(params, mode);
    return to_estimate(accumulate_replicates(reps, workers, [&](std::uint64_t r) {
        return replicate_value(sampler, statistic, seed, StreamTag::kReplicate, r);
    }));
}

std::string_view to_string(TestKind test) {
    return test == TestKind::kHalfMeanThreshold ? "half-mean-threshold" : "calibrated-quantile";
}

TestKind parse_test_kind(std::string_view name) {
    if (name == "half-mean-threshold") return TestKind::kHalfMeanThreshold;
    if (name == "calibrated-quantile") return TestKind::kCalibratedQuantile;
    throw DomainError("unknown test: " + std::string(name));
}

ExperimentRecord detection_experiment(const ModelParams& params, std::uint64_t reps, std::uint64_t seed,
                                      const DetectionOptions& options) {
    params.validate();
    if (reps < 100) throw DomainError("detection needs reps >= 100");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const auto start = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.params = params;
    rec.mode = options.mode;
    rec.statistic = options.statistic;
    rec.test = options.test;
    rec.reps = reps;
    rec.seed = seed;
    rec.phase_label = phase_label({params, options.mode, std::nullopt});

    if (degenerate_density(params.p)) {
        rec.degenerate = true;
        return rec;
    }

    const GraphSampler alt(params, options.mode);
    const GraphSampler null(params, SampleMode::kErdosRenyi);
    const auto batch = [&](const GraphSampler& s, StreamTag tag, std::uint64_t count) {
        return collect_replicates(count, options.workers, [&](std::uint64_t r) {
            return replicate_value(s, options.statistic, seed, tag, r);
        });
    };

    const std::vector<double> h1 = batch(alt, StreamTag::kReplicate, reps);
    const std::vector<double> h0 = batch(null, StreamTag::kNull, reps);
    Moments m;
    for (double v : h1) m.add(v);
    rec.stat_mean = m.mean;
    rec.stat_se = m.se();

    if (options.test == TestKind::kHalfMeanThreshold) {
        const std::vector<double> pilot = batch(alt, StreamTag::kPilot, std::max<std::uint64_t>(1, reps / 2));
        Moments pm;
        for (double v : pilot) pm.add(v);
        rec.inconclusive = !(pm.mean > 0.0);
        rec.threshold = 0.5 * pm.mean;
    } else {
        std::vector<double> calib = batch(null, StreamTag::kCalibration, reps);
        std::sort(calib.begin(), calib.end());
        const auto idx = std::min<std::size_t>(
            calib.size() - 1, static_cast<std::size_t>(std::ceil((1.0 - options.alpha) * calib.size())));
        rec.threshold = calib[idx];
    }
    rec.power = fraction_at_least(h1, rec.threshold);
    rec.type1 = fraction_at_least(h0, rec.threshold);
    if (options.timing) {
        rec.wallclock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    }
    return rec;
}

void ExperimentConfig::validate() const {
    if (grid.empty()) throw DomainError("experiment grid is empty");
    if (reps < 2) throw DomainError("reps must be at least 2");
    if (workers < 1) throw DomainError("workers must be positive");
    for (const auto& g : grid) {
        g.params.validate();
        if (g.mode == SampleMode::kExternal) throw DomainError("grid mode cannot be external");
    }
}

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    ExperimentConfig c;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw DomainError("experiment config must be a JSON object");
        c.reps = get_or<std::uint64_t>(j, "reps", c.reps);
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        c.workers = get_or<int>(j, "workers", c.workers);
        c.timing = get_or<bool>(j, "timing", c.timing);
        if (j.contains("test")) c.test = parse_test_kind(j.at("test").get<std::string>());
        if (j.contains("statistic")) {
            const json& s = j.at("statistic");
            c.statistic = parse_statistic_spec(s.at("kind").get<std::string>(), get_or<int>(s, "k", 3));
        }
        for (const json& g : get_or<json>(j, "grid", json::array())) {
            GridPoint pt;
            pt.params = {g.at("n").get<int>(), g.at("p").get<double>(), get_or<int>(g, "d", 2),
                         get_or<double>(g, "q", 1.0)};
            pt.mode = parse_sample_mode(get_or<std::string>(g, "mode", "soft-sphere"));
            c.grid.push_back(pt);
        }
        if (j.contains("phase_grid")) {
            const json& pg = j.at("phase_grid");
            const int n = pg.at("n").get<int>();
            const double p = get_or<double>(pg, "p", 0.5);
            const SampleMode mode = parse_sample_mode(get_or<std::string>(pg, "mode", "soft-sphere"));
            for (double a : pg.at("alpha").get<std::vector<double>>()) {
                for (double b : pg.at("beta").get<std::vector<double>>()) {
                    const double d = std::ceil(std::pow(static_cast<double>(n), a));
                    if (!(d >= 1.0 && d <= 2147483647.0)) throw DomainError("phase grid dimension out of range");
                    GridPoint pt;
                    pt.params = {n, p, static_cast<int>(d), std::pow(static_cast<double>(n), -b)};
                    pt.mode = mode;
                    pt.phase = theory::PhasePoint{a, b};
                    c.grid.push_back(pt);
                }
            }
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string phase_label(const GridPoint& point) {
    std::optional<theory::PhasePoint> pt = point.phase;
    const auto& pr = point.params;
    if (!pt && pr.n >= 2 && pr.d >= 2 && pr.q > 0.0 && pr.q < 1.0) {
        const double ln = std::log(static_cast<double>(pr.n));
        pt = theory::PhasePoint{std::log(static_cast<double>(pr.d)) / ln, -std::log(pr.q) / ln};
    }
    if (!pt || !(pt->alpha > 0.0 && pt->beta > 0.0)) return "";
    return std::string(theory::to_string(theory::phase_classify(*pt)));
}

void sweep(const ExperimentConfig& config, const RecordSink& sink, std::size_t start_index) {
    config.validate();
    for (std::size_t i = start_index; i < config.grid.size(); ++i) {
        const GridPoint& pt = config.grid[i];
        const std::uint64_t seed = derive_key(config.master_seed, i);
        ExperimentRecord rec;
        try {
            DetectionOptions opt;
            opt.test = config.test;
            opt.mode = pt.mode;
            opt.statistic = config.statistic;
            opt.workers = config.workers;
            opt.timing = config.timing;
            rec = detection_experiment(pt.params, config.reps, seed, opt);
        } catch (const std::exception& e) {
            rec = ExperimentRecord{};
            rec.params = pt.params;
            rec.mode = pt.mode;
            rec.statistic = config.statistic;
            rec.test = config.test;
            rec.reps = config.reps;
            rec.seed = seed;
            rec.failed = true;
            rec.error = e.what();
            rec.stat_mean = rec.stat_se = rec.power = rec.type1 = rec.threshold =
                std::numeric_limits<double>::quiet_NaN();
        }
        rec.phase_label = phase_label(pt);
        sink(rec);
    }
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_header() {
    return "n,p,d,q,mode,stat_kind,k,reps,seed,stat_mean,stat_se,power,type1,threshold,phase_label,wallclock_ms";
}

std::string csv_row(const ExperimentRecord& r) {
    std::ostringstream os;
    os << r.params.n << ',' << format_double(r.params.p) << ',' << r.params.d << ',' << format_double(r.params.q)
       << ',' << to_string(r.mode) << ',' << to_string(r.statistic.kind) << ',' << r.statistic.k << ',' << r.reps
       << ',' << r.seed << ',' << format_double(r.stat_mean) << ',' << format_double(r.stat_se) << ','
       << format_double(r.power) << ',' << format_double(r.type1) << ',' << format_double(r.threshold) << ','
       << r.phase_label << ',' << r.wallclock_ms;
    return os.str();
}

std::string record_to_json(const ExperimentRecord& r) {
    nlohmann::ordered_json j;
    j["n"] = r.params.n;
    j["p"] = r.params.p;
    j["d"] = r.params.d;
    j["q"] = r.params.q;
    j["mode"] = to_string(r.mode);
    j["stat_kind"] = to_string(r.statistic.kind);
    j["k"] = r.statistic.k;
    j["test"] = to_string(r.test);
    j["reps"] = r.reps;
    j["seed"] = r.seed;
    j["stat_mean"] = r.stat_mean;
    j["stat_se"] = r.stat_se;
    j["power"] = r.power;
    j["type1"] = r.type1;
    j["threshold"] = r.threshold;
    j["phase_label"] = r.phase_label;
    j["wallclock_ms"] = r.wallclock_ms;
    j["inconclusive"] = r.inconclusive;
    j["degenerate"] = r.degenerate;
    j["failed"] = r.failed;
    if (r.failed) j["error"] = r.error;
    return j.dump();
}

}  // namespace rgg::mc
