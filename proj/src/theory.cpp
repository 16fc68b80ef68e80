#include "rgg/theory.hpp"

#include "rgg/model.hpp"
#include "rgg/rng.hpp"
#include "rgg/specfun.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace rgg::theory {

namespace {

using std::numbers::pi;

void require_dim(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2");
}

double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(specfun::log_gamma(n + 1.0) - specfun::log_gamma(k + 1.0) - specfun::log_gamma(n - k + 1.0));
}

// Exact for the small arguments used in the moment formulas.
double choose_exact(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

AngleDensity::AngleDensity(int d) : d_(d) {
    require_dim(d);
    log_zeta_ = 0.5 * std::log(pi) + specfun::log_gamma(0.5 * (d - 1)) - specfun::log_gamma(0.5 * d);
}

double AngleDensity::h(double theta) const {
    if (!(theta >= 0.0 && theta <= pi)) throw DomainError("angle must lie in [0, pi]");
    if (d_ == 2) return std::exp(-log_zeta_);
    const double s = std::sin(theta);
    if (s <= 0.0) return 0.0;
    return std::exp((d_ - 2) * std::log(s) - log_zeta_);
}

double AngleDensity::g(double phi) const {
    if (d_ < 3) throw DomainError("g needs d >= 3");
    if (!(phi >= 0.0 && phi <= 0.5 * pi)) throw DomainError("angle must lie in [0, pi/2]");
    const double s = std::sin(phi);
    if (d_ == 3) return std::cos(phi);
    if (s <= 0.0) return 0.0;
    return (d_ - 2) * std::exp((d_ - 3) * std::log(s)) * std::cos(phi);
}

double AngleDensity::integrate_centered(const std::function<double(double)>& f, double abs_tol) const {
    const double upper = d_ > 2 ? std::min(0.5 * pi, 40.0 / std::sqrt(d_ - 2.0)) : 0.5 * pi;
    const double power = d_ - 2.0;
    const double log_zeta = log_zeta_;
    return specfun::integrate(
        [&](double phi) {
            const double c = std::cos(phi);
            const double weight = power == 0.0 ? std::exp(-log_zeta) : std::exp(power * std::log(c) - log_zeta);
            return f(phi) * weight;
        },
        {0.0, upper, abs_tol, 1 << 20});
}

double gamma_d(int d) {
    return AngleDensity(d).integrate_centered([](double phi) { return phi / (2.0 * pi); });
}

double eta_d(int d) {
    // The integrand is even in pi/2 - theta, so the full range doubles [0, pi/2].
    return 2.0 * AngleDensity(d).integrate_centered([](double phi) {
        const double v = phi / (2.0 * pi);
        return v * v;
    });
}

double gamma_lower_bound(int d) { return 1.0 / (2.0 * pi * std::sqrt(2.0 * pi) * std::sqrt(static_cast<double>(d))); }
double gamma_upper_bound(int d) { return 1.0 / (4.0 * std::sqrt(pi) * std::sqrt(static_cast<double>(d))); }
double eta_lower_bound(int d) { return 1.0 / (4.0 * pi * pi * d); }
double eta_upper_bound(int d) { return 1.0 / (16.0 * d); }

double sin2_cos_identity(int d) {
    return 2.0 * AngleDensity(d).integrate_centered([](double phi) {
        const double s = std::sin(phi);
        return s * s;
    });
}

HalfMomentTable half_moment_table(int d) {
    HalfMomentTable t;
    t.d = d;
    t.gamma = gamma_d(d);
    t.eta = eta_d(d);
    t.eta_half = 0.5 * t.eta;
    t.triangle_prob = 1.0 / 8.0 + t.gamma;
    t.quad_path_prob = 1.0 / 16.0 + 2.0 * t.eta_half;
    t.house_prob = 1.0 / 32.0 + 0.5 * t.gamma + t.eta_half;
    t.quadrilateral_mean = 2.0 * t.eta_half;
    const double base = 0.5 * t.gamma + 0.5 * t.eta_half;
    t.q1 = {base + 1.0 / (16.0 * pi * pi * d), base + 1.0 / (8.0 * pi * d)};
    t.clique4_prob = {t.q1.lower + 1.0 / 64.0, t.q1.upper + 1.0 / 64.0};
    const double shift = 0.5 * t.gamma + 1.5 * t.eta_half;
    t.tau4_mean = {t.q1.lower - shift, t.q1.upper - shift};
    return t;
}

double tau123_mean_half(int d, double q) { return q * q * q * gamma_d(d); }

double tau123_tau124_mean_half(int d, double q) { return q * q * q * q * eta_d(d) / 4.0; }

double tau3_variance_half(int n, int d, double q) {
    if (n < 3) return 0.0;
    const double mu = tau123_mean_half(d, q);
    const double shared = tau123_tau124_mean_half(d, q);
    return choose_exact(n, 3) * (1.0 / 64.0 - mu * mu) + 12.0 * choose_exact(n, 4) * (shared - mu * mu);
}

double er_tau3_variance(int n, double p) {
    const double v = p * (1.0 - p);
    return choose_exact(n, 3) * v * v * v;
}

double er_cycle_variance(int n, double p, int k) {
    if (k < 3) throw UnsupportedOrderError("cycle length must be at least 3");
    if (n < k) return 0.0;
    double falling = 1.0;
    for (int i = 0; i < k; ++i) falling *= n - i;
    return falling / (2.0 * k) * std::pow(p * (1.0 - p), k);
}

double measured_triangle_constant(double p) {
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(p); it != cache.end()) return it->second;
    }
    constexpr std::uint64_t kReps = 1'000'000;
    constexpr std::uint64_t kSeed = 0x7d1c5e7a3b9f0421ULL;
    const Estimate e = pattern_mean_estimate({LatentKind::kUnitSphere, p, kMeasuredConstantDim, 1.0},
                                             clique_pattern(3), true, kReps, kSeed);
    const double c = std::sqrt(static_cast<double>(kMeasuredConstantDim)) * std::max(0.0, e.mean - 3.0 * e.se);
    std::lock_guard lock(mutex);
    cache.emplace(p, c);
    return c;
}

MeanBounds signed_triangle_mean_bounds(int n, double p, int d, double q) {
    ModelParams{n, p, d, q}.validate();
    require_dim(d);
    MeanBounds b;
    if (n < 3 || q == 0.0 || p == 0.0 || p == 1.0) {
        b.upper = 0.0;
        return b;
    }
    const double scale = choose_exact(n, 3) * q * q * q;
    if (p == 0.5) {
        b.lower = scale * gamma_lower_bound(d);
        b.upper = scale * gamma_upper_bound(d);
        return b;
    }
    const double c = measured_triangle_constant(p);
    b.measured_constant = c;
    b.lower = scale * c / std::sqrt(static_cast<double>(d));
    return b;
}

BoundReport tv_bound_report(int n, double p, int d, double q) {
    ModelParams{n, p, d, q}.validate();
    BoundReport r;
    const double nn = n;
    const double dd = d;
    r.tv_weak_noise = 0.5 * nn * q;
    r.tv_weak_noise_valid = q <= 0.5;
    r.kl_edgewise = 0.5 * nn * nn * q * q;
    r.kl_edgewise_exact = choose(n, 2) * q * q;
    r.tv_structural_terms = {std::sqrt(nn * nn * q / (dd * dd)), std::sqrt(nn * nn * q / dd),
                             std::sqrt(nn * nn * nn * q * q / dd)};
    r.tv_structural_valid = d >= 2 * n;
    r.mixture_bounds = {nn * nn * nn / dd, nn * nn * q};
    return r;
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::kImpossible: return "Impossible";
        case Phase::kPossible: return "Possible";
        case Phase::kUnknown: return "Unknown";
    }
    return "Unknown";
}

Phase phase_classify(PhasePoint pt) {
    if (!(pt.alpha > 0.0 && pt.beta > 0.0) || !std::isfinite(pt.alpha) || !std::isfinite(pt.beta)) {
        throw DomainError("phase point needs alpha, beta > 0");
    }
    if (pt.beta > 1.0 + kPhaseBoundaryTol || pt.alpha + 2.0 * pt.beta > 3.0 + kPhaseBoundaryTol) {
        return Phase::kImpossible;
    }
    if (pt.alpha + 6.0 * pt.beta < 3.0 - kPhaseBoundaryTol) return Phase::kPossible;
    return Phase::kUnknown;
}

WishartLogDet wishart_logdet_mean(int n, int d) {
    if (n < 1) throw DomainError("wishart_logdet_mean: n must be at least 1");
    if (d < n) throw SingularWishartError("Z Z^T is singular when d < n");
    WishartLogDet w;
    for (int i = 1; i <= n; ++i) w.mean_log_det += specfun::digamma(0.5 * (d - i + 1));
    w.mean_log_det += n * std::numbers::ln2;
    w.mean_neg_log_det_scaled = n * std::log(static_cast<double>(d)) - w.mean_log_det;
    w.bound = 4.0 * n / d + static_cast<double>(n) * n / d;
    return w;
}

double log_chi2_mean(int k) {
    if (k < 1) throw DomainError("log_chi2_mean: k must be at least 1");
    return specfun::digamma(0.5 * k) + std::numbers::ln2;
}

double threshold_gap_scaled(double p, int d) {
    const Thresholds t = compute_thresholds(p, d);
    return d * std::abs(t.delta_pd);
}

double threshold_gap_constant(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    const double t_p = specfun::std_normal_quantile(1.0 - p);
    const double t_half = specfun::std_normal_quantile(1.0 - 0.5 * p);
    return 3.0 * (t_p + 2.0 * std::sqrt(2.0 * pi) * std::exp(0.5 * t_half * t_half));
}

double gauss_threshold_gap_scaled(double p, int d) {
    const double rd = std::sqrt(static_cast<double>(d));
    const double t_p = specfun::std_normal_quantile(1.0 - p);
    return rd * std::abs(gauss_threshold(p, d) / rd - t_p);
}

DotProductMc dotproduct_mc(double p, int d, std::uint64_t reps, std::uint64_t seed, int workers) {
    DotProductMc m;
    m.d = d;
    m.path = subgraph_probability_estimate(LatentKind::kStandardNormal, p, d, path_pattern(2), reps,
                                           derive_key(seed, 1), workers);
    m.triangle = subgraph_probability_estimate(LatentKind::kStandardNormal, p, d, clique_pattern(3), reps,
                                               derive_key(seed, 2), workers);
    return m;
}

bool PredicateReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PredicateCheck& c) { return c.passed; });
}

PredicateReport dotproduct_bound_predicates(double p, const std::vector<DotProductMc>& estimates) {
    PredicateReport r;
    for (const auto& e : estimates) {
        const std::string tag = "d=" + std::to_string(e.d);
        const double path_slack = e.path.mean - p * p;
        const double path_bound = 8.0 / e.d + 3.0 * e.path.se;
        r.checks.push_back({"path_excess " + tag, path_slack <= path_bound, path_slack, path_bound});
        const double tri_excess = e.triangle.mean - p * p * p;
        const double tri_bound = -3.0 * e.triangle.se;
        r.checks.push_back({"triangle_excess " + tag, tri_excess > tri_bound, tri_excess, tri_bound});
    }
    for (std::size_t i = 1; i < estimates.size(); ++i) {
        const auto& a = estimates[i - 1];
        const auto& b = estimates[i];
        const double ra = std::sqrt(static_cast<double>(a.d));
        const double rb = std::sqrt(static_cast<double>(b.d));
        const double va = ra * (a.triangle.mean - p * p * p);
        const double vb = rb * (b.triangle.mean - p * p * p);
        const double joint = std::hypot(ra * a.triangle.se, rb * b.triangle.se);
        r.checks.push_back({"scaled_triangle_stability d=" + std::to_string(a.d) + "," + std::to_string(b.d),
                            std::abs(va - vb) <= 6.0 * joint, std::abs(va - vb), 6.0 * joint});
    }
    return r;
}

}  // namespace rgg::theory
