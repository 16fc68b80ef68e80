#include "rgg/model.hpp"

#include "rgg/rng.hpp"
#include "rgg/specfun.hpp"

#include <Eigen/Cholesky>
#include <boost/math/special_functions/log1p.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <bit>
#include <limits>
#include <numbers>
#include <cmath>
#include <string>

namespace rgg {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool is_degenerate_density(double p) { return p == 0.0 || p == 1.0; }

}  // namespace

void ModelParams::validate() const {
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    if (d < 1) throw DomainError("d must be at least 1");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q must lie in [0, 1]");
}

double sphere_threshold(double p, int d) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("sphere_threshold: p must lie in (0, 1)");
    if (d < 2) throw DomainError("sphere_threshold: d must be at least 2");
    if (p > 0.5) return -sphere_threshold(1.0 - p, d);
    if (p == 0.5) return 0.0;
    // <x1, x2>^2 ~ Beta(1/2, (d-1)/2) and P(<x1, x2>^2 >= t^2) = 2p.
    const double a = 0.5;
    const double b = 0.5 * (d - 1);
    const double x = specfun::reg_inc_beta_complement_inv(a, b, 2.0 * p);
    return std::sqrt(x);
}

namespace {

// Log density of the chi distribution with d degrees of freedom, expanded
// around the mode m = sqrt(d-1): with r = m(1+x) the non-constant part is
// (d-1)(log(1+x) - x - x^2/2), which stays accurate at large d.
struct ChiWindow {
    double lo;
    double hi;
    double mode;
    double log_at_mode;
};

ChiWindow chi_window(int d) {
    const double mode = std::sqrt(std::max(0.0, d - 1.0));
    const double log_norm = -(0.5 * d - 1.0) * std::numbers::ln2 - specfun::log_gamma(0.5 * d);
    const double log_at_mode = d == 1 ? log_norm : (d - 1) * std::log(mode) - 0.5 * mode * mode + log_norm;
    return {std::max(0.0, mode - 12.0), mode + 12.0, mode, log_at_mode};
}

double log_chi_density(double r, int d, const ChiWindow& w) {
    if (r <= 0.0) return d == 1 ? w.log_at_mode : -std::numeric_limits<double>::infinity();
    if (d == 1) return -0.5 * r * r + w.log_at_mode;
    const double x = (r - w.mode) / w.mode;
    if (x <= -1.0) return -std::numeric_limits<double>::infinity();
    return (d - 1) * (boost::math::log1pmx(x) - 0.5 * x * x) + w.log_at_mode;
}

double gauss_exceedance_density(double u, int d) {
    const ChiWindow w = chi_window(d);
    return specfun::integrate(
        [&](double r) {
            const double lf = log_chi_density(r, d, w);
            if (!std::isfinite(lf) || r <= 0.0) return 0.0;
            return std::exp(lf) * specfun::std_normal_pdf(u / r) / r;
        },
        {w.lo, w.hi, 1e-14, 1 << 20});
}

}  // namespace

double gauss_exceedance(double u, int d) {
    if (d < 1) throw DomainError("gauss_exceedance: d must be at least 1");
    if (!std::isfinite(u)) throw DomainError("gauss_exceedance: threshold must be finite");
    if (u == 0.0) return 0.5;
    if (u < 0.0) return 1.0 - gauss_exceedance(-u, d);
    // Given y, <x, y> ~ N(0, |y|^2); average the normal tail over |y| ~ chi(d).
    const ChiWindow w = chi_window(d);
    return specfun::integrate(
        [&](double r) {
            const double lf = log_chi_density(r, d, w);
            if (!std::isfinite(lf)) return 0.0;
            if (r <= 0.0) return 0.0;
            return std::exp(lf) * specfun::std_normal_sf(u / r);
        },
        {w.lo, w.hi, 1e-14, 1 << 20});
}

double gauss_threshold(double p, int d) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gauss_threshold: p must lie in (0, 1)");
    if (d < 1) throw DomainError("gauss_threshold: d must be at least 1");
    if (p > 0.5) return -gauss_threshold(1.0 - p, d);
    if (p == 0.5) return 0.0;
    double hi = std::sqrt(static_cast<double>(d));
    while (gauss_exceedance(hi, d) > p) hi *= 2.0;
    return specfun::solve_increasing([d](double u) { return -gauss_exceedance(u, d); },
                                     [d](double u) { return gauss_exceedance_density(u, d); },
                                     -p, 0.0, hi, 1e-13 * hi);
}

Thresholds compute_thresholds(double p, int d, bool with_dot_product) {
    Thresholds t;
    t.t_p = specfun::std_normal_quantile(1.0 - p);
    t.t_pd = sphere_threshold(p, d);
    t.delta_pd = t.t_p - t.t_pd * std::sqrt(static_cast<double>(d));
    if (with_dot_product) t.u_pd = gauss_threshold(p, d);
    return t;
}

std::string_view to_string(LatentKind kind) {
    return kind == LatentKind::kUnitSphere ? "unit-sphere" : "standard-normal";
}

LatentKind parse_latent_kind(std::string_view name) {
    if (name == "unit-sphere") return LatentKind::kUnitSphere;
    if (name == "standard-normal") return LatentKind::kStandardNormal;
    throw DomainError("unknown latent kind: " + std::string(name));
}

LatentMatrix::LatentMatrix(int rows, int cols, LatentKind kind, std::vector<double> data)
    : rows_(rows), cols_(cols), kind_(kind), data_(std::move(data)) {
    if (rows < 0 || cols < 1) throw DomainError("latent matrix needs at least one column");
    if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw DomainError("latent matrix data size does not match its shape");
    }
    if (kind_ == LatentKind::kUnitSphere) {
        for (int i = 0; i < rows_; ++i) {
            double sq = 0.0;
            for (double v : row(i)) sq += v * v;
            if (std::abs(std::sqrt(sq) - 1.0) > 1e-12) {
                throw DomainError("unit-sphere latent row " + std::to_string(i) + " is not unit norm");
            }
        }
    }
}

std::span<const double> LatentMatrix::row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
}

std::vector<double> LatentMatrix::pair_inner_products() const {
    Eigen::Map<const RowMatrix> x(data_.data(), rows_, cols_);
    RowMatrix gram = RowMatrix::Zero(rows_, rows_);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
    std::vector<double> out(pair_count(rows_));
    std::size_t k = 0;
    for (int i = 0; i < rows_; ++i) {
        for (int j = i + 1; j < rows_; ++j) out[k++] = gram(j, i);
    }
    return out;
}

std::string_view to_string(SampleMode mode) {
    switch (mode) {
        case SampleMode::kErdosRenyi: return "er";
        case SampleMode::kHardSphere: return "hard-sphere";
        case SampleMode::kSoftSphere: return "soft-sphere";
        case SampleMode::kSoftSphereResample: return "soft-sphere-resample";
        case SampleMode::kDotProduct: return "dot-product";
        case SampleMode::kExternal: return "external";
    }
    return "external";
}

SampleMode parse_sample_mode(std::string_view name) {
    for (SampleMode m : {SampleMode::kErdosRenyi, SampleMode::kHardSphere, SampleMode::kSoftSphere,
                         SampleMode::kSoftSphereResample, SampleMode::kDotProduct, SampleMode::kExternal}) {
        if (to_string(m) == name) return m;
    }
    throw DomainError("unknown sampling mode: " + std::string(name));
}

AdjacencySample::AdjacencySample(int n, SampleMode mode, std::uint64_t seed)
    : n_(n), mode_(mode), seed_(seed), bits_((rgg::pair_count(n) + 63) / 64, 0) {
    if (n < 0) throw DomainError("vertex count must be nonnegative");
}

AdjacencySample AdjacencySample::from_edges(int n, std::span<const std::pair<int, int>> edges,
                                            SampleMode mode, std::uint64_t seed) {
    AdjacencySample g(n, mode, seed);
    for (auto [i, j] : edges) g.set_edge(i, j, true);
    return g;
}

bool AdjacencySample::edge(int i, int j) const {
    if (i == j) return false;
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw DomainError("vertex index out of range");
    return bit(rgg::pair_index(n_, i, j));
}

void AdjacencySample::set_edge(int i, int j, bool present) {
    if (i == j) throw DomainError("self-loops are not representable");
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw DomainError("vertex index out of range");
    set_bit(rgg::pair_index(n_, i, j), present);
}

std::size_t AdjacencySample::edge_count() const noexcept {
    std::size_t total = 0;
    for (std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::vector<std::pair<int, int>> AdjacencySample::edges() const {
    std::vector<std::pair<int, int>> out;
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j, ++k) {
            if (bit(k)) out.emplace_back(i, j);
        }
    }
    return out;
}

ConnectionFunction::ConnectionFunction(double p, double q, double threshold)
    : threshold_(threshold), low_((1.0 - q) * p), high_((1.0 - q) * p + q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw DomainError("connection function needs p, q in [0, 1]");
    }
}

LatentMatrix sample_latent(int n, int d, LatentKind kind, std::uint64_t seed) {
    if (n < 1 || d < 1) throw DomainError("sample_latent: n and d must be positive");
    std::vector<double> data(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        CounterRng rng(stream_key(seed, StreamTag::kLatent, static_cast<std::uint64_t>(i)));
        double* row = data.data() + static_cast<std::size_t>(i) * d;
        double sq = 0.0;
        for (int k = 0; k < d; ++k) {
            row[k] = rng.normal();
            sq += row[k] * row[k];
        }
        if (kind == LatentKind::kUnitSphere) {
            const double inv = 1.0 / std::sqrt(sq);
            for (int k = 0; k < d; ++k) row[k] *= inv;
        }
    }
    return LatentMatrix(n, d, kind, std::move(data));
}

LatentMatrix sample_latent_wishart(int n, int d, LatentKind kind, std::uint64_t seed) {
    if (n < 1 || d < 1) throw DomainError("sample_latent_wishart: n and d must be positive");
    if (d < n) throw DomainError("sample_latent_wishart: requires d >= n");
    // Bartlett: Z Z^T = L L^T with L lower triangular, L_ii ~ chi(d - i),
    // L_ij ~ N(0, 1) below the diagonal.
    std::vector<double> data(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        CounterRng rng(stream_key(seed, StreamTag::kLatent, static_cast<std::uint64_t>(i)));
        double* row = data.data() + static_cast<std::size_t>(i) * n;
        double sq = 0.0;
        for (int k = 0; k < i; ++k) {
            row[k] = rng.normal();
            sq += row[k] * row[k];
        }
        row[i] = std::sqrt(rng.chi_square(static_cast<double>(d - i)));
        sq += row[i] * row[i];
        if (kind == LatentKind::kUnitSphere) {
            const double inv = 1.0 / std::sqrt(sq);
            for (int k = 0; k <= i; ++k) row[k] *= inv;
        }
    }
    return LatentMatrix(n, n, kind, std::move(data));
}

LatentMatrix sample_latent(int n, int d, LatentKind kind, std::uint64_t seed, LatentRoute route) {
    if (route == LatentRoute::kAuto) route = d >= n ? LatentRoute::kWishart : LatentRoute::kPoints;
    return route == LatentRoute::kWishart ? sample_latent_wishart(n, d, kind, seed)
                                          : sample_latent(n, d, kind, seed);
}

GraphSampler::GraphSampler(const ModelParams& params, SampleMode mode, SampleOptions options)
    : params_(params), mode_(mode), options_(options) {
    params_.validate();
    if (mode_ == SampleMode::kExternal) throw DomainError("external is not a sampling mode");
    if (mode_ == SampleMode::kHardSphere) params_.q = 1.0;
    if (uses_latent() && mode_ != SampleMode::kDotProduct && params_.d < 2) {
        throw DomainError("sphere samplers need d >= 2");
    }
    if (uses_latent() && !is_degenerate_density(params_.p)) {
        threshold_ = mode_ == SampleMode::kDotProduct ? gauss_threshold(params_.p, params_.d)
                                                      : sphere_threshold(params_.p, params_.d);
    }
}

bool GraphSampler::uses_latent() const noexcept {
    return mode_ != SampleMode::kErdosRenyi && mode_ != SampleMode::kExternal;
}

AdjacencySample GraphSampler::sample_given_latent(const LatentMatrix& latent, std::uint64_t seed) const {
    const int n = params_.n;
    if (latent.rows() != n) throw DomainError("latent matrix has the wrong number of rows");
    AdjacencySample g(n, mode_, seed);
    const double p = params_.p;
    const double q = params_.q;
    if (is_degenerate_density(p)) {
        if (p == 1.0) {
            for (std::size_t k = 0; k < g.pair_count(); ++k) g.set_bit(k, true);
        }
        return g;
    }
    const double t = *threshold_;
    const std::vector<double> ip = latent.pair_inner_products();
    const std::uint64_t edge_key = stream_key(seed, StreamTag::kEdge);
    const std::uint64_t coin_key = stream_key(seed, StreamTag::kCoin);
    const ConnectionFunction phi(p, q, t);
    for (std::size_t k = 0; k < ip.size(); ++k) {
        bool present = false;
        switch (mode_) {
            case SampleMode::kHardSphere:
                present = ip[k] >= t;
                break;
            case SampleMode::kSoftSphere:
            case SampleMode::kDotProduct:
                present = uniform_at(edge_key, k) < phi(ip[k]);
                break;
            case SampleMode::kSoftSphereResample:
                present = uniform_at(coin_key, k) < q ? ip[k] >= t : uniform_at(edge_key, k) < p;
                break;
            default:
                break;
        }
        g.set_bit(k, present);
    }
    return g;
}

GraphSample GraphSampler::sample(std::uint64_t seed) const {
    const int n = params_.n;
    if (!uses_latent()) {
        AdjacencySample g(n, mode_, seed);
        const std::uint64_t edge_key = stream_key(seed, StreamTag::kEdge);
        for (std::size_t k = 0; k < g.pair_count(); ++k) g.set_bit(k, uniform_at(edge_key, k) < params_.p);
        return {std::move(g), std::nullopt};
    }
    const LatentKind kind =
        mode_ == SampleMode::kDotProduct ? LatentKind::kStandardNormal : LatentKind::kUnitSphere;
    LatentMatrix latent = sample_latent(n, params_.d, kind, seed, options_.route);
    AdjacencySample g = sample_given_latent(latent, seed);
    if (options_.keep_latent) return {std::move(g), std::move(latent)};
    return {std::move(g), std::nullopt};
}

GraphSample sample_graph(const ModelParams& params, SampleMode mode, std::uint64_t seed,
                         SampleOptions options) {
    return GraphSampler(params, mode, options).sample(seed);
}

double sample_log_det_gram(int n, int d, std::uint64_t seed) {
    if (d < n) throw SingularWishartError("Z Z^T is singular when d < n");
    const LatentMatrix z = sample_latent(n, d, LatentKind::kStandardNormal, seed);
    Eigen::Map<const RowMatrix> x(z.data().data(), n, d);
    const Eigen::MatrixXd gram = x * x.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(llt.matrixL()(i, i));
    return 2.0 * log_det;
}

}  // namespace rgg
