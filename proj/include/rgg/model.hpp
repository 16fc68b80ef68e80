#pragma once

#include "rgg/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rgg {

/// Parameters of one model instance: n vertices, edge density p, latent
/// dimension d and geometry strength q (q = 0 is Erdos-Renyi, q = 1 the hard
/// geometric graph).
struct ModelParams {
    int n = 1;
    double p = 0.5;
    int d = 2;
    double q = 1.0;

    /// Throws DomainError when a field is out of range.
    void validate() const;
};

struct Thresholds {
    double t_p = 0.0;                ///< Gaussian quantile Phi^{-1}(1 - p)
    double t_pd = 0.0;               ///< sphere threshold
    std::optional<double> u_pd;      ///< dot-product threshold, Gaussian latents only
    double delta_pd = 0.0;           ///< t_p - t_pd * sqrt(d)
};

/// All thresholds for (p, d). Requires 0 < p < 1 and d >= 2.
Thresholds compute_thresholds(double p, int d, bool with_dot_product = false);

/// t with P(<x, y> >= t) = p for x, y uniform on the unit sphere in R^d.
double sphere_threshold(double p, int d);

/// u with P(<x, y> >= u) = p for independent standard normal x, y in R^d.
double gauss_threshold(double p, int d);

/// P(<x, y> >= u) for independent standard normal x, y in R^d, by quadrature
/// over the chi distribution of |y|.
double gauss_exceedance(double u, int d);

enum class LatentKind { kUnitSphere, kStandardNormal };

std::string_view to_string(LatentKind kind);
LatentKind parse_latent_kind(std::string_view name);

/// Row-major n x cols matrix of latent positions. Unit-sphere rows are
/// checked to have norm 1 on construction.
class LatentMatrix {
public:
    LatentMatrix(int rows, int cols, LatentKind kind, std::vector<double> data);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    LatentKind kind() const noexcept { return kind_; }
    std::span<const double> row(int i) const;
    const std::vector<double>& data() const noexcept { return data_; }

    /// Upper-triangle inner products <x_i, x_j>, i < j, in pair-index order.
    std::vector<double> pair_inner_products() const;

private:
    int rows_;
    int cols_;
    LatentKind kind_;
    std::vector<double> data_;
};

enum class SampleMode {
    kErdosRenyi,
    kHardSphere,
    kSoftSphere,
    kSoftSphereResample,
    kDotProduct,
    kExternal,  ///< graph not produced by a sampler (e.g. read from a file)
};

std::string_view to_string(SampleMode mode);
SampleMode parse_sample_mode(std::string_view name);

/// Index of the pair (i, j), i < j, in the row-major strict upper triangle.
constexpr std::size_t pair_index(int n, int i, int j) noexcept {
    const auto ii = static_cast<std::size_t>(i);
    return ii * static_cast<std::size_t>(n) - ii * (ii + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

constexpr std::size_t pair_count(int n) noexcept {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
}

/// Simple undirected graph stored as a bit-packed strict upper triangle.
class AdjacencySample {
public:
    AdjacencySample(int n, SampleMode mode, std::uint64_t seed);

    static AdjacencySample from_edges(int n, std::span<const std::pair<int, int>> edges,
                                      SampleMode mode = SampleMode::kExternal, std::uint64_t seed = 0);

    int n() const noexcept { return n_; }
    SampleMode mode() const noexcept { return mode_; }
    std::uint64_t seed() const noexcept { return seed_; }

    bool edge(int i, int j) const;
    void set_edge(int i, int j, bool present);

    bool bit(std::size_t index) const noexcept { return (bits_[index >> 6] >> (index & 63)) & 1ULL; }
    void set_bit(std::size_t index, bool present) noexcept {
        const std::uint64_t mask = 1ULL << (index & 63);
        if (present) {
            bits_[index >> 6] |= mask;
        } else {
            bits_[index >> 6] &= ~mask;
        }
    }

    std::size_t pair_count() const noexcept { return rgg::pair_count(n_); }
    std::size_t edge_count() const noexcept;

    /// Edges (i, j), i < j, in packing order.
    std::vector<std::pair<int, int>> edges() const;
    const std::vector<std::uint64_t>& bits() const noexcept { return bits_; }

    bool operator==(const AdjacencySample& other) const = default;

private:
    int n_;
    SampleMode mode_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> bits_;
};

/// phi_q(x) = (1 - q) p + q 1{x >= threshold}.
class ConnectionFunction {
public:
    ConnectionFunction(double p, double q, double threshold);

    double operator()(double inner_product) const noexcept {
        return inner_product >= threshold_ ? high_ : low_;
    }
    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }
    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
    double low_;
    double high_;
};

/// How latent configurations are drawn.
///  - kPoints: n rows of d coordinates, as in the model definition.
///  - kWishart: the n x n Bartlett factor of the Wishart Gram matrix. Its rows
///    have the same joint inner-product law as the d-dimensional points, at
///    O(n^2) cost; requires d >= n.
///  - kAuto: kWishart when d >= n, else kPoints.
enum class LatentRoute { kAuto, kPoints, kWishart };

/// i.i.d. rows: uniform on S^{d-1} (normalized Gaussians) or N(0, I_d).
LatentMatrix sample_latent(int n, int d, LatentKind kind, std::uint64_t seed);

/// Bartlett-factor rows (n x n) with the inner-product law of `sample_latent`.
LatentMatrix sample_latent_wishart(int n, int d, LatentKind kind, std::uint64_t seed);

LatentMatrix sample_latent(int n, int d, LatentKind kind, std::uint64_t seed, LatentRoute route);

struct SampleOptions {
    LatentRoute route = LatentRoute::kAuto;
    bool keep_latent = false;
};

struct GraphSample {
    AdjacencySample graph;
    std::optional<LatentMatrix> latent;
};

/// Graph sampler for one (params, mode). Thresholds are computed once at
/// construction; `sample` is const and safe to call concurrently.
///
/// Randomness layout for a given seed:
///  - latent row i draws from stream (seed, latent, i);
///  - the Bernoulli uniform of pair k is element k of stream (seed, edge);
///  - the keep/redraw coin of the resampling construction is element k of
///    stream (seed, coin).
/// Consequently soft-sphere with q = 0 reproduces er, and soft-sphere with
/// q = 1 reproduces hard-sphere, bit for bit at equal seeds.
class GraphSampler {
public:
    GraphSampler(const ModelParams& params, SampleMode mode, SampleOptions options = {});

    GraphSample sample(std::uint64_t seed) const;

    /// Edges given an explicit latent configuration.
    AdjacencySample sample_given_latent(const LatentMatrix& latent, std::uint64_t seed) const;

    const ModelParams& params() const noexcept { return params_; }
    SampleMode mode() const noexcept { return mode_; }
    /// Threshold applied to inner products (t_pd or u_pd); absent for er and
    /// for the degenerate densities p in {0, 1}.
    std::optional<double> threshold() const noexcept { return threshold_; }
    bool uses_latent() const noexcept;

private:
    ModelParams params_;
    SampleMode mode_;
    SampleOptions options_;
    std::optional<double> threshold_;
};

GraphSample sample_graph(const ModelParams& params, SampleMode mode, std::uint64_t seed,
                         SampleOptions options = {});

/// log det(Z Z^T) for one n x d standard normal matrix Z drawn by rows.
double sample_log_det_gram(int n, int d, std::uint64_t seed);

}  // namespace rgg
