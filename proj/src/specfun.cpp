#include "rgg/specfun.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rgg::specfun {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

// Terms B_{2k} / (2k) of the digamma asymptotic series, k = 1..7.
constexpr double kDigammaSeries[] = {
    1.0 / 12.0,     -1.0 / 120.0,       1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0,    -691.0 / 32760.0,   1.0 / 12.0,
};

struct SimpsonState {
    const std::function<double(double)>* f;
    long budget;
    double residual = 0.0;
    bool exhausted = false;
};

double eval_finite(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
    }
    return v;
}

constexpr int kMinDepth = 4;
constexpr int kMaxDepth = 60;

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval_finite(*st.f, lm);
    const double frm = eval_finite(*st.f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;

    if (depth >= kMinDepth && std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth >= kMaxDepth || st.budget <= 0) {
        st.exhausted = true;
        st.residual += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    --st.budget;
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double std_normal_cdf(double x) {
    require(std::isfinite(x), "std_normal_cdf: argument must be finite");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_sf(double x) {
    require(!std::isnan(x), "std_normal_sf: argument is NaN");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double std_normal_quantile(double u) {
    require(u > 0.0 && u < 1.0, "std_normal_quantile: probability must lie in (0, 1)");
    if (u == 0.5) return 0.0;
    if (u > 0.5) {
        // Solve the upper tail directly so that the lower-tail branch stays exact.
        return solve_increasing([](double x) { return -std_normal_sf(x); },
                                [](double x) { return std_normal_pdf(x); }, -(1.0 - u), 0.0, 40.0);
    }
    return solve_increasing([](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); },
                            [](double x) { return std_normal_pdf(x); }, u, -40.0, 0.0);
}

double reg_inc_beta(double a, double b, double x) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta: shape parameters must be positive");
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
    return boost::math::ibeta(a, b, x);
}

double reg_inc_beta_complement(double a, double b, double x) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta_complement: shape parameters must be positive");
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta_complement: x must lie in [0, 1]");
    return boost::math::ibetac(a, b, x);
}

namespace {

std::function<double(double)> beta_pdf(double a, double b) {
    const double lb = log_beta(a, b);
    return [a, b, lb](double x) {
        if (x <= 0.0 || x >= 1.0) return std::numeric_limits<double>::infinity();
        return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb);
    };
}

}  // namespace

double reg_inc_beta_inv(double a, double b, double u) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta_inv: shape parameters must be positive");
    require(u >= 0.0 && u <= 1.0, "reg_inc_beta_inv: probability must lie in [0, 1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    return solve_increasing([a, b](double x) { return boost::math::ibeta(a, b, x); },
                            beta_pdf(a, b), u, 0.0, 1.0);
}

double reg_inc_beta_complement_inv(double a, double b, double v) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta_complement_inv: shape parameters must be positive");
    require(v >= 0.0 && v <= 1.0, "reg_inc_beta_complement_inv: probability must lie in [0, 1]");
    if (v == 1.0) return 0.0;
    if (v == 0.0) return 1.0;
    return solve_increasing([a, b](double x) { return -boost::math::ibetac(a, b, x); },
                            beta_pdf(a, b), -v, 0.0, 1.0);
}

double digamma(double x) {
    require(x > 0.0 && std::isfinite(x), "digamma: argument must be positive and finite");
    double shift = 0.0;
    while (x < 8.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    double series = 0.0;
    double power = inv2;
    for (double c : kDigammaSeries) {
        series += c * power;
        power *= inv2;
    }
    return shift + std::log(x) - 0.5 / x - series;
}

double log_gamma(double x) {
    require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive and finite");
    return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    require(spec.lower <= spec.upper, "integrate: lower limit exceeds upper limit");
    require(spec.abs_tol > 0.0, "integrate: abs_tol must be positive");
    require(spec.max_subdivisions > 0, "integrate: max_subdivisions must be positive");
    if (spec.lower == spec.upper) return 0.0;

    SimpsonState st{&f, spec.max_subdivisions};
    const double a = spec.lower;
    const double b = spec.upper;
    const double fa = eval_finite(f, a);
    const double fb = eval_finite(f, b);
    const double fm = eval_finite(f, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double result = simpson_step(st, a, b, fa, fm, fb, whole, spec.abs_tol, 0);
    if (st.exhausted && st.residual > spec.abs_tol) {
        throw ConvergenceError("integrate: subdivision budget exhausted", result, st.residual);
    }
    return result;
}

double solve_increasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& df,
                        double target, double lo, double hi, double x_tol, int max_iter) {
    require(lo <= hi, "solve_increasing: empty bracket");
    const double f_lo = f(lo) - target;
    const double f_hi = f(hi) - target;
    require(f_lo <= 0.0 && f_hi >= 0.0, "solve_increasing: target is not bracketed");
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    double x = 0.5 * (lo + hi);
    double best_x = x;
    double best_abs = std::numeric_limits<double>::infinity();
    double width_prev2 = hi - lo;
    double width_prev1 = hi - lo;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double fx = f(x) - target;
        if (std::abs(fx) < best_abs) {
            best_abs = std::abs(fx);
            best_x = x;
        }
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double width = hi - lo;
        const double scale = std::max(std::abs(lo), std::abs(hi));
        const double tol = std::max(x_tol, 2.0 * std::numeric_limits<double>::epsilon() * scale);
        if (width <= tol || width <= std::numeric_limits<double>::min()) break;

        // One-sided Newton convergence never closes the bracket, so a bisection
        // is forced whenever the bracket failed to halve over two steps.
        const bool stalled = width > 0.5 * width_prev2;
        width_prev2 = width_prev1;
        width_prev1 = width;

        double next = 0.5 * (lo + hi);
        if (df && !stalled) {
            const double slope = df(x);
            if (slope > 0.0 && std::isfinite(slope)) {
                const double cand = x - fx / slope;
                if (cand > lo && cand < hi) {
                    if (std::abs(cand - x) <= tol) {
                        const double fc = std::abs(f(cand) - target);
                        return fc < best_abs ? cand : best_x;
                    }
                    next = cand;
                }
            }
        }
        x = next;
    }
    return best_x;
}

}  // namespace rgg::specfun
