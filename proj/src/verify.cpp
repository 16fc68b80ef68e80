#include "rgg/verify.hpp"

#include "rgg/mc.hpp"
#include "rgg/model.hpp"
#include "rgg/parallel.hpp"
#include "rgg/rng.hpp"
#include "rgg/specfun.hpp"
#include "rgg/stats.hpp"
#include "rgg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace rgg::verify {

namespace {

using std::numbers::pi;

class Suite {
public:
    explicit Suite(std::string name) : name_(std::move(name)) {}

    // Runs one check; exceptions count as failures.
    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [ok, detail] = body();
            results_.push_back({name_, name, ok, std::move(detail)});
        } catch (const std::exception& e) {
            results_.push_back({name_, name, false, std::string("exception: ") + e.what()});
        }
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::string name_;
    std::vector<CheckResult> results_;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

std::vector<CheckResult> specfun_suite() {
    Suite s("specfun");
    s.check("normal quantile round trip", [] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double u = 1e-6 + (1.0 - 2e-6) * i / 999.0;
            worst = std::max(worst, std::abs(specfun::std_normal_cdf(specfun::std_normal_quantile(u)) - u));
        }
        return std::pair{worst <= 1e-8, fmt("max |Phi(Phi^-1(u)) - u| = %.3g", worst)};
    });
    s.check("incomplete beta monotone", [] {
        for (auto [a, b] : {std::pair{0.5, 0.5}, {0.5, 7.5}, {2.5, 7.0}, {30.0, 2.0}}) {
            double prev = 0.0;
            for (int i = 0; i <= 500; ++i) {
                const double v = specfun::reg_inc_beta(a, b, i / 500.0);
                if (v < prev) return std::pair{false, fmt("decrease at a=%g b=%g", a, b)};
                prev = v;
            }
        }
        return std::pair{true, std::string("4 shape pairs, 501 points each")};
    });
    s.check("digamma recurrence and bounds", [] {
        double worst_rec = 0.0;
        bool bounds = true;
        for (int i = 0; i <= 400; ++i) {
            const double x = 0.5 * std::pow(2e6, i / 400.0);
            const double psi = specfun::digamma(x);
            worst_rec = std::max(worst_rec, std::abs(specfun::digamma(x + 1.0) - psi - 1.0 / x));
            const double lx = std::log(x);
            bounds = bounds && lx - 1.0 / x <= psi && psi <= lx - 0.5 / x;
        }
        return std::pair{worst_rec <= 1e-12 && bounds,
                         fmt("max recurrence error %.3g, bounds ", worst_rec) + (bounds ? "hold" : "fail")};
    });
    s.check("quadrature closed forms d=3..64", [] {
        double worst = 0.0;
        for (int d = 3; d <= 64; ++d) {
            const double a = specfun::integrate(
                [d](double t) { return std::sin(t) * std::pow(std::cos(t), d - 2); }, {0.0, pi / 2, 1e-12, 1 << 20});
            const double b = specfun::integrate([d](double t) { return std::pow(std::sin(t), d - 2); },
                                                {0.0, pi, 1e-12, 1 << 20});
            const double zeta = std::sqrt(pi) * std::exp(specfun::log_gamma(0.5 * (d - 1)) - specfun::log_gamma(0.5 * d));
            worst = std::max({worst, std::abs(a - 1.0 / (d - 1)), std::abs(b - zeta)});
        }
        return std::pair{worst <= 1e-10, fmt("max error %.3g", worst)};
    });
    return s.take();
}

std::vector<CheckResult> model_suite(std::uint64_t seed, int workers) {
    Suite s("model");
    s.check("edge marginal equals p in every mode", [&] {
        const ModelParams params{16, 0.3, 32, 0.5};
        std::string detail;
        bool ok = true;
        for (SampleMode mode : {SampleMode::kErdosRenyi, SampleMode::kHardSphere, SampleMode::kSoftSphere,
                                SampleMode::kSoftSphereResample, SampleMode::kDotProduct}) {
            const GraphSampler sampler(params, mode);
            const Moments m = accumulate_replicates(4000, workers, [&](std::uint64_t r) {
                const GraphSample g = sampler.sample(derive_key(seed, 11, r));
                return static_cast<double>(g.graph.edge_count()) / static_cast<double>(g.graph.pair_count());
            });
            const bool pass = std::abs(m.mean - params.p) <= 3.0 * m.se();
            ok = ok && pass;
            detail += std::string(to_string(mode)) + fmt("=%.5f(%.1e) ", m.mean, m.se());
        }
        return std::pair{ok, detail};
    });
    s.check("soft and resample constructions agree on n=3", [&] {
        const ModelParams params{3, 0.3, 8, 0.6};
        const double t = sphere_threshold(params.p, params.d);
        const ConnectionFunction phi(params.p, params.q, t);
        for (std::uint64_t r = 0; r < 50; ++r) {
            const auto ip = sample_latent(3, params.d, LatentKind::kUnitSphere, derive_key(seed, 12, r))
                                .pair_inner_products();
            for (int mask = 0; mask < 8; ++mask) {
                double soft = 1.0;
                double resample = 1.0;
                for (int e = 0; e < 3; ++e) {
                    const double ps = phi(ip[static_cast<std::size_t>(e)]);
                    const double hard = ip[static_cast<std::size_t>(e)] >= t ? 1.0 : 0.0;
                    const double pr = params.q * hard + (1.0 - params.q) * params.p;
                    const bool present = (mask >> e) & 1;
                    soft *= present ? ps : 1.0 - ps;
                    resample *= present ? pr : 1.0 - pr;
                }
                if (std::abs(soft - resample) > 1e-15) return std::pair{false, fmt("mismatch %.17g vs %.17g", soft, resample)};
            }
        }
        return std::pair{true, std::string("50 latent draws x 8 graphs")};
    });
    s.check("threshold gap d|t sqrt(d) - t_p| bounded", [] {
        const double c = theory::threshold_gap_constant(0.3);
        double lo = 1e300;
        double hi = 0.0;
        for (int d = 8; d <= 4096; d *= 2) {
            const double g = theory::threshold_gap_scaled(0.3, d);
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        return std::pair{hi <= c, fmt("range [%.4f, %.4f], explicit constant %.3f", lo, hi, c)};
    });
    s.check("sampling is deterministic", [&] {
        const ModelParams params{20, 0.4, 10, 0.7};
        for (SampleMode mode : {SampleMode::kErdosRenyi, SampleMode::kHardSphere, SampleMode::kSoftSphere,
                                SampleMode::kSoftSphereResample, SampleMode::kDotProduct}) {
            if (!(sample_graph(params, mode, seed).graph == sample_graph(params, mode, seed).graph)) {
                return std::pair{false, std::string(to_string(mode))};
            }
        }
        return std::pair{true, std::string("5 modes")};
    });
    s.check("soft q=0 is er and soft q=1 is hard", [&] {
        for (std::uint64_t r = 0; r < 20; ++r) {
            const std::uint64_t sd = derive_key(seed, 13, r);
            const auto er = sample_graph({15, 0.35, 6, 0.0}, SampleMode::kErdosRenyi, sd).graph;
            const auto soft0 = sample_graph({15, 0.35, 6, 0.0}, SampleMode::kSoftSphere, sd).graph;
            const auto hard = sample_graph({15, 0.35, 6, 1.0}, SampleMode::kHardSphere, sd).graph;
            const auto soft1 = sample_graph({15, 0.35, 6, 1.0}, SampleMode::kSoftSphere, sd).graph;
            if (er.bits() != soft0.bits() || hard.bits() != soft1.bits()) return std::pair{false, std::string("bits differ")};
        }
        return std::pair{true, std::string("20 seeds")};
    });
    return s.take();
}

std::vector<CheckResult> stats_suite(std::uint64_t seed, int workers) {
    Suite s("stats");
    s.check("trace path equals enumeration", [&] {
        for (std::uint64_t r = 0; r < 500; ++r) {
            const int n = 3 + static_cast<int>(r % 10);
            const double p = 0.05 + 0.9 * uniform_at(derive_key(seed, 21), r);
            const auto g = sample_graph({n, p, 2, 0.0}, SampleMode::kErdosRenyi, derive_key(seed, 22, r)).graph;
            const double trace = signed_triangle_stat(g, p).value;
            const double enumerated = signed_clique_stat(g, p, 3).value;
            if (trace != enumerated) return std::pair{false, fmt("n=%g: %.17g vs %.17g", n, trace, enumerated)};
        }
        return std::pair{true, std::string("500 graphs, n in [3, 12], exact")};
    });
    s.check("Hamilton cycle counts", [] {
        int factorial = 1;
        for (int k = 3; k <= kMaxEnumerationOrder; ++k) {
            factorial *= k - 1;
            if (static_cast<int>(hamilton_cycles(k).size()) != factorial / 2) {
                return std::pair{false, fmt("k=%g", k)};
            }
        }
        return std::pair{true, std::string("k = 3..8")};
    });
    s.check("er signed triangle moments", [&] {
        const ModelParams params{10, 0.3, 2, 0.0};
        const GraphSampler sampler(params, SampleMode::kErdosRenyi);
        const Moments m = accumulate_replicates(100000, workers, [&](std::uint64_t r) {
            return signed_triangle_stat(sampler.sample(derive_key(seed, 23, r)).graph, params.p).value;
        });
        const double var = theory::er_tau3_variance(10, 0.3);
        const bool ok = std::abs(m.mean) <= 3.0 * m.se() && std::abs(m.variance() / var - 1.0) <= 0.05;
        return std::pair{ok, fmt("mean %.4g (se %.2g), var ratio %.4f", m.mean, m.se(), m.variance() / var)};
    });
    s.check("q-scaling of signed patterns", [&] {
        bool ok = true;
        std::string detail;
        for (const Pattern& h : {clique_pattern(3), cycle_pattern(4)}) {
            const auto e = q_scaling_estimate(0.3, 32, 0.7, h, 200000, derive_key(seed, 24, h.edges.size()), workers);
            ok = ok && std::abs(e.difference.mean) <= 3.0 * e.difference.se;
            detail += fmt("|F|=%g diff %.3g (se %.2g) ", e.distinct_edges, e.difference.mean, e.difference.se);
        }
        return std::pair{ok, detail};
    });
    return s.take();
}

std::vector<CheckResult> theory_suite(std::uint64_t seed, int workers) {
    Suite s("theory");
    s.check("angle densities integrate to one", [] {
        double worst = 0.0;
        for (int d = 2; d <= 128; ++d) {
            const theory::AngleDensity a(d);
            const double h = 2.0 * a.integrate_centered([](double) { return 1.0; });
            worst = std::max(worst, std::abs(h - 1.0));
            if (d >= 3) {
                const double g = specfun::integrate([&](double phi) { return a.g(phi); }, {0.0, pi / 2, 1e-11, 1 << 20});
                worst = std::max(worst, std::abs(g - 1.0));
            }
        }
        return std::pair{worst <= 1e-9, fmt("max error %.3g", worst)};
    });
    s.check("gamma and eta inside their brackets", [] {
        for (int i = 0; i <= 24; ++i) {
            const int d = static_cast<int>(std::lround(2.0 * std::pow(2048.0, i / 24.0)));
            const double g = theory::gamma_d(d);
            const double e = theory::eta_d(d);
            if (g < theory::gamma_lower_bound(d) || g > theory::gamma_upper_bound(d) || e < theory::eta_lower_bound(d) ||
                e > theory::eta_upper_bound(d)) {
                return std::pair{false, fmt("d=%g gamma=%.6g eta=%.6g", d, g, e)};
            }
        }
        return std::pair{true, std::string("25 log-spaced d in [2, 4096]")};
    });
    s.check("sin^2 cos^(d-2) identity", [] {
        double worst = 0.0;
        for (int d = 3; d <= 64; ++d) worst = std::max(worst, std::abs(theory::sin2_cos_identity(d) - 1.0 / d));
        return std::pair{worst <= 1e-10, fmt("max error %.3g", worst)};
    });
    s.check("half-moment table matches Monte Carlo", [&] {
        bool ok = true;
        std::string detail;
        for (int d : {16, 64}) {
            const auto t = theory::half_moment_table(d);
            const PatternModel m{LatentKind::kUnitSphere, 0.5, d, 1.0};
            const Pattern quad{4, {{0, 2}, {1, 2}, {0, 3}, {1, 3}}};
            const Pattern house{4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}}};
            const std::uint64_t reps = 400000;
            const std::uint64_t sd = derive_key(seed, 31, static_cast<std::uint64_t>(d));
            const std::pair<Estimate, double> rows[] = {
                {pattern_mean_estimate(m, clique_pattern(3), false, reps, derive_key(sd, 1), workers), t.triangle_prob},
                {pattern_mean_estimate(m, quad, false, reps, derive_key(sd, 2), workers), t.quad_path_prob},
                {pattern_mean_estimate(m, house, false, reps, derive_key(sd, 3), workers), t.house_prob},
                {pattern_mean_estimate(m, quad, true, reps, derive_key(sd, 4), workers), t.quadrilateral_mean},
            };
            for (const auto& [est, expected] : rows) {
                const double z = (est.mean - expected) / est.se;
                ok = ok && std::abs(z) <= 3.0;
                detail += fmt("%.2f ", z);
            }
        }
        return std::pair{ok, "z-scores " + detail};
    });
    s.check("Wishart log-det matches Monte Carlo", [&] {
        const auto w = theory::wishart_logdet_mean(4, 32);
        const Moments m = accumulate_replicates(
            10000, workers, [&](std::uint64_t r) { return sample_log_det_gram(4, 32, derive_key(seed, 32, r)); });
        return std::pair{std::abs(m.mean - w.mean_log_det) <= 3.0 * m.se(),
                         fmt("exact %.5f, mc %.5f (se %.2g)", w.mean_log_det, m.mean, m.se())};
    });
    s.check("phase regions disjoint", [] {
        for (int i = 1; i <= 500; ++i) {
            for (int j = 1; j <= 200; ++j) {
                const double a = i / 100.0;
                const double b = j / 100.0;
                const bool impossible = b > 1.0 || a + 2.0 * b > 3.0;
                const bool possible = a + 6.0 * b < 3.0;
                if (impossible && possible) return std::pair{false, fmt("(%g, %g)", a, b)};
            }
        }
        return std::pair{true, std::string("0.01 grid over (0,5] x (0,2]")};
    });
    return s.take();
}

std::vector<CheckResult> mc_suite(std::uint64_t seed, int workers) {
    Suite s("mc");
    s.check("estimates independent of worker count", [&] {
        const ModelParams params{12, 0.5, 16, 0.8};
        const mc::StatisticSpec tri{};
        const Estimate a = mc::estimate_statistic(params, SampleMode::kSoftSphere, tri, 3000, seed, 1);
        const Estimate b = mc::estimate_statistic(params, SampleMode::kSoftSphere, tri, 3000, seed, 4);
        return std::pair{a.mean == b.mean && a.se == b.se, fmt("%.17g vs %.17g", a.mean, b.mean)};
    });
    s.check("er signed triangle mean is zero", [&] {
        const Estimate e = mc::estimate_statistic({10, 0.5, 2, 0.0}, SampleMode::kErdosRenyi, {}, 100000,
                                                  derive_key(seed, 41), workers);
        return std::pair{std::abs(e.mean) <= 3.0 * e.se, fmt("mean %.4g (se %.2g)", e.mean, e.se)};
    });
    s.check("power nondecreasing in q", [&] {
        double prev_power = 0.0;
        double prev_se = 0.0;
        bool ok = true;
        std::string detail;
        for (double q : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            mc::DetectionOptions opt;
            opt.workers = workers;
            const auto rec = mc::detection_experiment({100, 0.5, 100, q}, 200, derive_key(seed, 42), opt);
            const double se = std::sqrt(std::max(rec.power * (1.0 - rec.power), 1e-12) / 200.0);
            ok = ok && rec.power + 2.0 * std::hypot(se, prev_se) >= prev_power;
            prev_power = rec.power;
            prev_se = se;
            detail += fmt("%.3f ", rec.power);
        }
        return std::pair{ok, "power " + detail};
    });
    s.check("signed triangle variance scaling", [&] {
        double lo = 1e300;
        double hi = 0.0;
        for (int d : {16, 64, 256}) {
            const GraphSampler sampler({40, 0.5, d, 0.5}, SampleMode::kSoftSphere);
            const Moments m = accumulate_replicates(2000, workers, [&](std::uint64_t r) {
                return signed_triangle_stat(sampler.sample(derive_key(seed, 43, r)).graph, 0.5).value;
            });
            const double scale = 40.0 * 40.0 * 40.0 + std::pow(40.0, 4) * std::pow(0.5, 4) / d;
            lo = std::min(lo, m.variance() / scale);
            hi = std::max(hi, m.variance() / scale);
        }
        return std::pair{hi <= 4.0 * lo, fmt("ratio range [%.4g, %.4g]", lo, hi)};
    });
    return s.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"specfun", "model", "stats", "theory", "mc"};
    return names;
}

std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed, int workers) {
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const auto& name : suite_names()) {
            auto part = run_suite(name, seed, workers);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    if (suite == "specfun") return specfun_suite();
    if (suite == "model") return model_suite(seed, workers);
    if (suite == "stats") return stats_suite(seed, workers);
    if (suite == "theory") return theory_suite(seed, workers);
    if (suite == "mc") return mc_suite(seed, workers);
    throw DomainError("unknown verify suite: " + std::string(suite));
}

}  // namespace rgg::verify
