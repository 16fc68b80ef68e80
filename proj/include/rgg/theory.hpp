#pragma once

#include "rgg/stats.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rgg::theory {

/// Density of the angle between two independent uniform points on S^{d-1}.
class AngleDensity {
public:
    explicit AngleDensity(int d);

    int d() const noexcept { return d_; }
    /// zeta = integral of sin^{d-2} over [0, pi] = sqrt(pi) Gamma((d-1)/2) / Gamma(d/2).
    double zeta() const noexcept { return std::exp(log_zeta_); }
    double log_zeta() const noexcept { return log_zeta_; }

    /// h(theta) = sin^{d-2}(theta) / zeta on [0, pi].
    double h(double theta) const;
    /// g(phi) = (d-2) sin^{d-3}(phi) cos(phi) on [0, pi/2]; needs d >= 3.
    double g(double phi) const;

    /// Integral over [0, pi/2] of f(phi) cos^{d-2}(phi) / zeta, i.e. of
    /// f(pi/2 - theta) h(theta) over theta in [0, pi/2]. The range is cut
    /// where cos^{d-2} drops below e^{-800} so the peak at 0 is resolved.
    double integrate_centered(const std::function<double(double)>& f, double abs_tol = 1e-13) const;

private:
    int d_;
    double log_zeta_;
};

/// gamma = integral over [0, pi/2] of (pi/2 - theta)/(2 pi) h(theta).
double gamma_d(int d);

/// eta = E[((pi/2 - theta)/(2 pi))^2] over the full angle range [0, pi].
/// The half-range integral (over [0, pi/2] only) is eta / 2.
double eta_d(int d);

double gamma_lower_bound(int d);  ///< 1 / (2 pi sqrt(2 pi) sqrt(d))
double gamma_upper_bound(int d);  ///< 1 / (4 sqrt(pi) sqrt(d))
double eta_lower_bound(int d);    ///< 1 / (4 pi^2 d)
double eta_upper_bound(int d);    ///< 1 / (16 d)

/// (2 / zeta) * integral over [0, pi/2] of sin^2 cos^{d-2}; equals 1/d.
double sin2_cos_identity(int d);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Subgraph moments of the hard model at p = 1/2.
struct HalfMomentTable {
    int d = 2;
    double gamma = 0.0;
    double eta = 0.0;              ///< full-range second moment, see eta_d
    double eta_half = 0.0;         ///< half-range integral, eta / 2
    double triangle_prob = 0.0;    ///< P(a12 a13 a23 = 1)
    double quad_path_prob = 0.0;   ///< E[a13 a23 a14 a24]
    double house_prob = 0.0;       ///< E[a12 a13 a23 a14 a24]
    double quadrilateral_mean = 0.0;  ///< signed 4-cycle mean
    Interval clique4_prob;         ///< E[prod of the six edges of K4]
    Interval q1;                   ///< clique4_prob - 1/64
    Interval tau4_mean;            ///< E[tau_[4]] = Q1 - gamma/2 - 3 eta_half/2
};

HalfMomentTable half_moment_table(int d);

/// E[tau_123] and E[tau_123 tau_124] in G(n, 1/2, d, q).
double tau123_mean_half(int d, double q);
double tau123_tau124_mean_half(int d, double q);

/// Exact Var[tau_3] in G(n, 1/2, d, q). Triples sharing at most one vertex
/// are uncorrelated, so only the diagonal and the one-shared-edge pairs
/// (12 C(n, 4) ordered pairs) contribute.
double tau3_variance_half(int n, int d, double q);

/// Erdos-Renyi moments.
double er_tau3_variance(int n, double p);
double er_cycle_variance(int n, double p, int k);

struct MeanBounds {
    double lower = 0.0;
    std::optional<double> upper;  ///< only at p = 1/2
    /// p != 1/2: the constant in the lower bound, measured by Monte Carlo as
    /// sqrt(d_ref) (E[tau_123] - 3 SE) at d_ref = kMeasuredConstantDim.
    std::optional<double> measured_constant;
};

inline constexpr int kMeasuredConstantDim = 256;

/// Bracket for E[tau_3] in G(n, p, d, q).
MeanBounds signed_triangle_mean_bounds(int n, double p, int d, double q);

/// Measured constant for p != 1/2 (cached per p; thread-safe).
double measured_triangle_constant(double p);

struct BoundReport {
    double tv_weak_noise = 0.0;       ///< n q / 2
    bool tv_weak_noise_valid = false; ///< q <= 1/2
    double kl_edgewise = 0.0;         ///< n^2 q^2 / 2
    double kl_edgewise_exact = 0.0;   ///< C(n, 2) q^2
    /// sqrt(n^2 q / d^2), sqrt(n^2 q / d), sqrt(n^3 q^2 / d), constants omitted
    std::array<double, 3> tv_structural_terms{};
    bool tv_structural_valid = false; ///< d >= 2n
    /// n^3 / d and n^2 q, the two mixture terms
    std::array<double, 2> mixture_bounds{};
};

BoundReport tv_bound_report(int n, double p, int d, double q);

enum class Phase { kImpossible, kPossible, kUnknown };

std::string_view to_string(Phase phase);

struct PhasePoint {
    double alpha = 1.0;
    double beta = 1.0;
};

inline constexpr double kPhaseBoundaryTol = 1e-12;

/// Impossible if beta > 1 or alpha + 2 beta > 3, Possible if alpha + 6 beta < 3,
/// Unknown otherwise. Points within kPhaseBoundaryTol of a boundary are Unknown.
Phase phase_classify(PhasePoint pt);

struct WishartLogDet {
    double mean_log_det = 0.0;         ///< E[log det(Z Z^T)]
    double mean_neg_log_det_scaled = 0.0;  ///< E[-log det(Z Z^T / d)]
    double bound = 0.0;                ///< 4n/d + n^2/d
};

/// Exact digamma-sum expectation for an n x d standard normal Z. d < n throws
/// SingularWishartError.
WishartLogDet wishart_logdet_mean(int n, int d);

/// E[log chi^2(k)] = psi(k/2) + log 2.
double log_chi2_mean(int k);

/// d |t_pd sqrt(d) - t_p|.
double threshold_gap_scaled(double p, int d);

/// 3 (t_p + 2 sqrt(2 pi) exp(t_{p/2}^2 / 2)).
double threshold_gap_constant(double p);

/// sqrt(d) |u_pd / sqrt(d) - t_p|.
double gauss_threshold_gap_scaled(double p, int d);

/// Monte Carlo estimates for the dot-product model at one dimension.
struct DotProductMc {
    int d = 1;
    Estimate path;      ///< P(a12 a13 = 1)
    Estimate triangle;  ///< P(a12 a13 a23 = 1)
};

DotProductMc dotproduct_mc(double p, int d, std::uint64_t reps, std::uint64_t seed, int workers = 1);

struct PredicateCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
};

struct PredicateReport {
    std::vector<PredicateCheck> checks;
    bool passed() const;
};

/// Per dimension: P(path) - p^2 <= 8/d + 3 SE and P(triangle) - p^3 > -3 SE.
/// For consecutive dimensions: sqrt(d) (P(triangle) - p^3) agree within
/// 6 joint SE.
PredicateReport dotproduct_bound_predicates(double p, const std::vector<DotProductMc>& estimates);

}  // namespace rgg::theory
