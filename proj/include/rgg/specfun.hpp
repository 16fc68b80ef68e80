#pragma once

#include "rgg/errors.hpp"

#include <functional>

namespace rgg::specfun {

/// Integration interval and tolerance for `integrate`.
struct QuadratureSpec {
    double lower = 0.0;
    double upper = 1.0;
    double abs_tol = 1e-10;
    int max_subdivisions = 1 << 20;
};

/// Standard normal CDF. Throws DomainError on non-finite input.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), accurate for large positive x.
double std_normal_sf(double x);

double std_normal_pdf(double x);

/// Inverse of `std_normal_cdf` on (0, 1).
double std_normal_quantile(double u);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Complement 1 - I_x(a, b), computed without cancellation.
double reg_inc_beta_complement(double a, double b, double x);

/// Solves I_x(a, b) = u for x in [0, 1].
double reg_inc_beta_inv(double a, double b, double u);

/// Solves 1 - I_x(a, b) = v for x in [0, 1]; preferred when v is small.
double reg_inc_beta_complement_inv(double a, double b, double v);

double digamma(double x);

double log_gamma(double x);

/// log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b).
double log_beta(double a, double b);

/// Adaptive Simpson quadrature. Throws ConvergenceError carrying the best
/// estimate and the unresolved error when the subdivision budget runs out.
double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec);

/// Root of an increasing function on a bracket: finds x in [lo, hi] with
/// f(x) = target. Newton steps from `df` are taken while they stay inside the
/// shrinking bracket; otherwise the bracket is bisected. `df` may be empty.
double solve_increasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& df,
                        double target, double lo, double hi,
                        double x_tol = 0.0, int max_iter = 400);

}  // namespace rgg::specfun
