#include "rgg/cli.hpp"

#include "rgg/graph_io.hpp"
#include "rgg/mc.hpp"
#include "rgg/model.hpp"
#include "rgg/stats.hpp"
#include "rgg/theory.hpp"
#include "rgg/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

namespace rgg::cli {

namespace {

using ojson = nlohmann::ordered_json;

void print_error(std::ostream& err, const char* category, const std::string& message) {
    err << ojson{{"error", category}, {"message", message}}.dump() << '\n';
}

template <class T>
const T& require(const std::optional<T>& v, const char* flag) {
    if (!v) throw DomainError(std::string("missing required flag ") + flag);
    return *v;
}

int default_workers() {
    if (const char* env = std::getenv("RGG_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        throw DomainError("RGG_WORKERS must be a positive integer");
    }
    return 1;
}

struct SampleArgs {
    int n = 0;
    double p = 0.5;
    int d = 2;
    double q = 1.0;
    std::string mode;
    std::uint64_t seed = 0;
    std::string out;
    std::string latent_out;
};

struct StatArgs {
    std::string in;
    std::string stat;
    int k = 3;
    std::optional<double> p;
};

struct DetectArgs {
    int n = 0;
    double p = 0.5;
    int d = 2;
    double q = 1.0;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    std::string test = "half-mean-threshold";
    std::string mode = "soft-sphere";
    std::string stat = "triangle";
    int k = 3;
    double alpha = 0.05;
    bool timing = false;
};

struct SweepArgs {
    std::string config;
    std::string out;
    std::size_t start_index = 0;
};

struct TheoryArgs {
    std::string quantity;
    std::optional<int> d;
    std::optional<int> n;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<double> alpha;
    std::optional<double> beta;
};

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 0;
};

int do_sample(const SampleArgs& a, std::ostream& out) {
    const SampleMode mode = parse_sample_mode(a.mode);
    SampleOptions opt;
    opt.keep_latent = !a.latent_out.empty();
    const GraphSample g = sample_graph({a.n, a.p, a.d, a.q}, mode, a.seed, opt);
    const std::string text = graph_to_json(g.graph, a.p);
    if (a.out.empty()) {
        out << text << '\n';
    } else {
        write_text_file(a.out, text + "\n");
    }
    if (!a.latent_out.empty()) {
        if (!g.latent) throw DomainError("mode " + a.mode + " has no latent positions");
        write_text_file(a.latent_out, latent_to_json(*g.latent, a.d) + "\n");
    }
    return kExitOk;
}

int do_stat(const StatArgs& a, std::ostream& out) {
    const GraphFile file = graph_from_json(read_text_file(a.in));
    const double p = a.p.value_or(file.p);
    StatisticValue v;
    if (a.stat == "triangle") {
        if (a.k != 3) throw DomainError("--stat triangle requires --k 3");
        v = signed_triangle_stat(file.graph, p);
    } else if (a.stat == "clique") {
        v = signed_clique_stat(file.graph, p, a.k);
    } else if (a.stat == "cycle") {
        v = signed_cycle_stat(file.graph, p, a.k);
    } else {
        throw DomainError("unknown statistic: " + a.stat);
    }
    ojson j;
    j["kind"] = to_string(v.kind);
    j["k"] = v.k;
    j["value"] = v.value;
    j["method"] = to_string(v.method);
    j["degenerate"] = v.degenerate;
    j["p"] = p;
    out << j.dump() << '\n';
    return kExitOk;
}

int do_detect(const DetectArgs& a, int workers, std::ostream& out) {
    mc::DetectionOptions opt;
    opt.test = mc::parse_test_kind(a.test);
    opt.mode = parse_sample_mode(a.mode);
    opt.statistic = mc::parse_statistic_spec(a.stat, a.k);
    opt.alpha = a.alpha;
    opt.workers = workers;
    opt.timing = a.timing;
    const auto rec = mc::detection_experiment({a.n, a.p, a.d, a.q}, a.reps, a.seed, opt);
    out << mc::record_to_json(rec) << '\n';
    return kExitOk;
}

int do_sweep(const SweepArgs& a, std::optional<int> workers, std::ostream& out, std::ostream& err) {
    mc::ExperimentConfig config = mc::parse_experiment_config(read_text_file(a.config));
    if (workers) config.workers = *workers;
    std::ofstream csv(a.out, std::ios::binary | (a.start_index > 0 ? std::ios::app : std::ios::trunc));
    if (!csv) throw DomainError("cannot write file: " + a.out);
    if (a.start_index == 0) csv << mc::csv_header() << '\n';
    std::size_t failed = 0;
    std::size_t written = 0;
    mc::sweep(
        config,
        [&](const mc::ExperimentRecord& r) {
            csv << mc::csv_row(r) << '\n';
            csv.flush();
            ++written;
            if (r.failed) {
                ++failed;
                err << ojson{{"warning", "grid point failed"}, {"message", r.error}}.dump() << '\n';
            }
        },
        a.start_index);
    out << ojson{{"records", written}, {"failed", failed}, {"out", a.out}}.dump() << '\n';
    return kExitOk;
}

ojson interval_json(const theory::Interval& i) { return ojson{{"lower", i.lower}, {"upper", i.upper}}; }

int do_theory(const TheoryArgs& a, std::ostream& out) {
    ojson j;
    const std::string& qn = a.quantity;
    if (qn == "phase") {
        const theory::PhasePoint pt{require(a.alpha, "--alpha"), require(a.beta, "--beta")};
        j["label"] = theory::to_string(theory::phase_classify(pt));
    } else if (qn == "gamma" || qn == "eta") {
        const int d = require(a.d, "--d");
        const bool g = qn == "gamma";
        j["quantity"] = qn;
        j["d"] = d;
        j["value"] = g ? theory::gamma_d(d) : theory::eta_d(d);
        j["lower_bound"] = g ? theory::gamma_lower_bound(d) : theory::eta_lower_bound(d);
        j["upper_bound"] = g ? theory::gamma_upper_bound(d) : theory::eta_upper_bound(d);
    } else if (qn == "half-moments") {
        const auto t = theory::half_moment_table(require(a.d, "--d"));
        j["d"] = t.d;
        j["gamma"] = t.gamma;
        j["eta"] = t.eta;
        j["eta_half"] = t.eta_half;
        j["triangle_prob"] = t.triangle_prob;
        j["quad_path_prob"] = t.quad_path_prob;
        j["house_prob"] = t.house_prob;
        j["quadrilateral_mean"] = t.quadrilateral_mean;
        j["clique4_prob"] = interval_json(t.clique4_prob);
        j["q1"] = interval_json(t.q1);
        j["tau4_mean"] = interval_json(t.tau4_mean);
    } else if (qn == "logdet") {
        const int n = require(a.n, "--n");
        const int d = require(a.d, "--d");
        const auto w = theory::wishart_logdet_mean(n, d);
        j["n"] = n;
        j["d"] = d;
        j["mean_log_det"] = w.mean_log_det;
        j["mean_neg_log_det_scaled"] = w.mean_neg_log_det_scaled;
        j["bound"] = w.bound;
    } else if (qn == "tv-bounds") {
        const int n = require(a.n, "--n");
        const int d = require(a.d, "--d");
        const double q = require(a.q, "--q");
        const auto r = theory::tv_bound_report(n, a.p.value_or(0.5), d, q);
        j["tv_weak_noise"] = r.tv_weak_noise;
        j["tv_weak_noise_valid"] = r.tv_weak_noise_valid;
        j["kl_edgewise"] = r.kl_edgewise;
        j["kl_edgewise_exact"] = r.kl_edgewise_exact;
        j["tv_structural_terms"] = r.tv_structural_terms;
        j["tv_structural_valid"] = r.tv_structural_valid;
        j["mixture_bounds"] = r.mixture_bounds;
    } else if (qn == "thresholds") {
        const double p = require(a.p, "--p");
        const int d = require(a.d, "--d");
        const Thresholds t = compute_thresholds(p, d, true);
        j["p"] = p;
        j["d"] = d;
        j["t_p"] = t.t_p;
        j["t_pd"] = t.t_pd;
        j["u_pd"] = *t.u_pd;
        j["delta_pd"] = t.delta_pd;
    } else if (qn == "mean-bounds") {
        const auto b = theory::signed_triangle_mean_bounds(require(a.n, "--n"), require(a.p, "--p"),
                                                           require(a.d, "--d"), require(a.q, "--q"));
        j["lower"] = b.lower;
        j["upper"] = b.upper ? ojson(*b.upper) : ojson(nullptr);
        j["measured_constant"] = b.measured_constant ? ojson(*b.measured_constant) : ojson(nullptr);
    } else {
        throw DomainError("unknown theory quantity: " + qn);
    }
    out << j.dump() << '\n';
    return kExitOk;
}

int do_verify(const VerifyArgs& a, int workers, std::ostream& out) {
    const auto results = verify::run_suite(a.suite, a.seed, workers);
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed;
        out << ojson{{"suite", r.suite}, {"check", r.name}, {"passed", r.passed}, {"detail", r.detail}}.dump()
            << '\n';
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    out << ojson{{"passed", passed}, {"total", results.size()}}.dump() << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random geometric graph toolkit", "rgg"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all");

    std::optional<int> workers;
    app.add_option("--workers", workers, "Worker threads (default: RGG_WORKERS or 1)")
        ->check(CLI::PositiveNumber);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Sample a graph and write it as JSON");
    sample->add_option("--n", sa.n, "Vertices")->required()->check(CLI::PositiveNumber);
    sample->add_option("--p", sa.p, "Edge probability")->required();
    sample->add_option("--d", sa.d, "Latent dimension")->capture_default_str();
    sample->add_option("--q", sa.q, "Geometry strength")->capture_default_str();
    sample->add_option("--mode", sa.mode, "er | hard-sphere | soft-sphere | soft-sphere-resample | dot-product")
        ->required();
    sample->add_option("--seed", sa.seed, "Seed")->required();
    sample->add_option("--out", sa.out, "Output file (default: stdout)");
    sample->add_option("--latent-out", sa.latent_out, "Also write the latent positions");

    StatArgs st;
    auto* stat = app.add_subcommand("stat", "Signed subgraph statistic of a stored graph");
    stat->add_option("--in", st.in, "Graph JSON")->required();
    stat->add_option("--stat", st.stat, "triangle | clique | cycle")->required();
    stat->add_option("--k", st.k, "Order")->capture_default_str();
    stat->add_option("--p", st.p, "Centering probability (default: the file's p)");

    DetectArgs da;
    auto* detect = app.add_subcommand("detect", "Detection experiment against Erdos-Renyi");
    detect->add_option("--n", da.n)->required();
    detect->add_option("--p", da.p)->required();
    detect->add_option("--d", da.d)->required();
    detect->add_option("--q", da.q)->required();
    detect->add_option("--reps", da.reps)->required();
    detect->add_option("--seed", da.seed)->required();
    detect->add_option("--test", da.test, "half-mean-threshold | calibrated-quantile")->capture_default_str();
    detect->add_option("--mode", da.mode, "Alternative model")->capture_default_str();
    detect->add_option("--stat", da.stat, "triangle | clique | cycle")->capture_default_str();
    detect->add_option("--k", da.k)->capture_default_str();
    detect->add_option("--alpha", da.alpha, "Level of the calibrated test")->capture_default_str();
    detect->add_flag("--timing", da.timing, "Record wall-clock time");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    sweep->add_option("--config", sw.config, "Experiment config JSON")->required();
    sweep->add_option("--out", sw.out, "CSV output")->required();
    sweep->add_option("--start-index", sw.start_index, "Resume from this grid index (appends)");

    TheoryArgs th;
    auto* theory_cmd = app.add_subcommand("theory", "Analytic quantities as JSON");
    theory_cmd
        ->add_option("--quantity", th.quantity,
                     "gamma | eta | half-moments | logdet | tv-bounds | phase | thresholds | mean-bounds")
        ->required();
    theory_cmd->add_option("--d", th.d);
    theory_cmd->add_option("--n", th.n);
    theory_cmd->add_option("--p", th.p);
    theory_cmd->add_option("--q", th.q);
    theory_cmd->add_option("--alpha", th.alpha);
    theory_cmd->add_option("--beta", th.beta);

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
    verify_cmd->add_option("--suite", va.suite, "all | specfun | model | stats | theory | mc")->capture_default_str();
    verify_cmd->add_option("--seed", va.seed)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        print_error(err, "validation", e.what());
        return kExitValidation;
    }

    try {
        const int w = workers.value_or(default_workers());
        if (sample->parsed()) return do_sample(sa, out);
        if (stat->parsed()) return do_stat(st, out);
        if (detect->parsed()) return do_detect(da, w, out);
        if (sweep->parsed()) return do_sweep(sw, workers ? workers : std::optional<int>{}, out, err);
        if (theory_cmd->parsed()) return do_theory(th, out);
        if (verify_cmd->parsed()) return do_verify(va, w, out);
    } catch (const std::domain_error& e) {
        print_error(err, "validation", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        print_error(err, "validation", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        print_error(err, "runtime", e.what());
        return kExitRuntime;
    }
    return kExitValidation;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace rgg::cli
