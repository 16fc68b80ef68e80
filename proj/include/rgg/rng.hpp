#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace rgg {

// Counter-based random streams.
//
// Every random quantity is addressed by (master seed, stream tag, index), and
// a stream is a SplitMix64 sequence started at a hashed key. Draws therefore
// never depend on which thread produced them or in what order replicates ran.

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Derives an independent key from a parent key and a label.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) noexcept {
    return mix64(mix64(parent + kGoldenGamma) ^ mix64(label * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_key(derive_key(parent, a), b);
}

/// 53-bit uniform in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Random access into a stream: the `index`-th uniform of the stream at `key`.
constexpr double uniform_at(std::uint64_t key, std::uint64_t index) noexcept {
    return to_unit(mix64(key + (index + 1) * kGoldenGamma));
}

/// Sequential view of one stream. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGoldenGamma);
    }

    /// Uniform in [0, 1).
    constexpr double uniform() noexcept { return to_unit((*this)()); }

    /// Uniform in (0, 1], safe as a log argument.
    constexpr double uniform_pos() noexcept { return 1.0 - uniform(); }

    /// Standard normal by the Box-Muller transform; the sine branch is cached
    /// and returned on the following call.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang squeeze, boosted for shape < 1.
    double gamma(double shape) noexcept {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Chi-square with `dof` degrees of freedom.
    double chi_square(double dof) noexcept { return 2.0 * gamma(0.5 * dof); }

    constexpr std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stream labels used by the samplers. Values are part of the reproducibility
/// contract: changing them changes every sampled graph.
enum class StreamTag : std::uint64_t {
    kLatent = 1,
    kEdge = 2,
    kCoin = 3,
    kReplicate = 4,
    kPilot = 5,
    kNull = 6,
    kCalibration = 7,
};

constexpr std::uint64_t stream_key(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) noexcept {
    return derive_key(seed, static_cast<std::uint64_t>(tag), index);
}

}  // namespace rgg
