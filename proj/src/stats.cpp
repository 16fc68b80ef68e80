#include "rgg/stats.hpp"

#include "rgg/parallel.hpp"
#include "rgg/rng.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace rgg {

std::string_view to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::kSignedTriangle: return "signed-triangle";
        case StatisticKind::kSignedClique: return "signed-clique";
        case StatisticKind::kSignedCycle: return "signed-cycle";
        case StatisticKind::kPlainCount: return "plain-count";
    }
    return "plain-count";
}

std::string_view to_string(StatisticMethod method) {
    return method == StatisticMethod::kTrace ? "trace" : "enumeration";
}

StatisticKind parse_statistic_kind(std::string_view name) {
    for (StatisticKind k : {StatisticKind::kSignedTriangle, StatisticKind::kSignedClique,
                            StatisticKind::kSignedCycle, StatisticKind::kPlainCount}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown statistic kind: " + std::string(name));
}

namespace {

void require_density(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
}

void require_order(int k) {
    if (k < kMinEnumerationOrder || k > kMaxEnumerationOrder) {
        throw UnsupportedOrderError("order k = " + std::to_string(k) + " is outside the supported range [" +
                                    std::to_string(kMinEnumerationOrder) + ", " +
                                    std::to_string(kMaxEnumerationOrder) + "]");
    }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Full symmetric adjacency as one bitset row per vertex.
class BitRows {
public:
    explicit BitRows(const AdjacencySample& g)
        : n_(g.n()), words_((static_cast<std::size_t>(g.n()) + 63) / 64), bits_(n_ * words_, 0) {
        std::size_t k = 0;
        for (int i = 0; i < g.n(); ++i) {
            for (int j = i + 1; j < g.n(); ++j, ++k) {
                if (g.bit(k)) {
                    set(i, j);
                    set(j, i);
                }
            }
        }
    }

    bool test(int i, int j) const noexcept {
        return (bits_[static_cast<std::size_t>(i) * words_ + (static_cast<std::size_t>(j) >> 6)] >> (j & 63)) & 1ULL;
    }

    std::uint64_t degree(int i) const noexcept {
        std::uint64_t d = 0;
        for (std::size_t w = 0; w < words_; ++w) d += std::popcount(row(i)[w]);
        return d;
    }

    std::uint64_t common(int i, int j) const noexcept {
        std::uint64_t c = 0;
        const std::uint64_t* a = row(i);
        const std::uint64_t* b = row(j);
        for (std::size_t w = 0; w < words_; ++w) c += std::popcount(a[w] & b[w]);
        return c;
    }

private:
    const std::uint64_t* row(int i) const noexcept { return bits_.data() + static_cast<std::size_t>(i) * words_; }
    void set(int i, int j) noexcept {
        bits_[static_cast<std::size_t>(i) * words_ + (static_cast<std::size_t>(j) >> 6)] |= 1ULL << (j & 63);
    }

    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

// Calls visit(subset) for every k-subset of {0, ..., n-1} in lexicographic order.
template <class Visit>
void for_each_subset(int n, int k, Visit&& visit) {
    if (k > n) return;
    std::vector<int> s(static_cast<std::size_t>(k));
    std::iota(s.begin(), s.end(), 0);
    for (;;) {
        visit(s);
        int i = k - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++s[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
    }
}

StatisticValue make_value(StatisticKind kind, int k, double value, StatisticMethod method, int n) {
    return {kind, k, value, method, n < k};
}

}  // namespace

double signed_sum(const EdgeCountHistogram& hist, double p) {
    require_density(p);
    const int e = hist.pattern_edges;
    std::vector<double> present(static_cast<std::size_t>(e) + 1, 1.0);
    std::vector<double> absent(static_cast<std::size_t>(e) + 1, 1.0);
    for (int m = 1; m <= e; ++m) {
        present[static_cast<std::size_t>(m)] = present[static_cast<std::size_t>(m - 1)] * (1.0 - p);
        absent[static_cast<std::size_t>(m)] = absent[static_cast<std::size_t>(m - 1)] * -p;
    }
    double total = 0.0;
    for (int m = 0; m <= e && m < static_cast<int>(hist.counts.size()); ++m) {
        const std::uint64_t c = hist.counts[static_cast<std::size_t>(m)];
        if (c == 0) continue;
        total += static_cast<double>(c) * (present[static_cast<std::size_t>(m)] *
                                           absent[static_cast<std::size_t>(e - m)]);
    }
    return total;
}

EdgeCountHistogram triangle_histogram(const AdjacencySample& graph) {
    EdgeCountHistogram hist{3, std::vector<std::uint64_t>(4, 0)};
    const int n = graph.n();
    if (n < 3) return hist;
    const BitRows rows(graph);
    // Sum over edges of common neighbours counts every triangle three times.
    std::uint64_t closed = 0;
    std::uint64_t wedges = 0;
    std::uint64_t edges = 0;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t deg = rows.degree(i);
        wedges += deg * (deg - (deg > 0 ? 1 : 0)) / 2;
        for (int j = i + 1; j < n; ++j, ++k) {
            if (!graph.bit(k)) continue;
            ++edges;
            closed += rows.common(i, j);
        }
    }
    const std::uint64_t c3 = closed / 3;
    const std::uint64_t c2 = wedges - 3 * c3;
    const std::uint64_t c1 = edges * static_cast<std::uint64_t>(n - 2) - 3 * c3 - 2 * c2;
    const std::uint64_t c0 = binomial(static_cast<std::uint64_t>(n), 3) - c1 - c2 - c3;
    hist.counts = {c0, c1, c2, c3};
    return hist;
}

EdgeCountHistogram clique_histogram(const AdjacencySample& graph, int k) {
    require_order(k);
    const int e = k * (k - 1) / 2;
    EdgeCountHistogram hist{e, std::vector<std::uint64_t>(static_cast<std::size_t>(e) + 1, 0)};
    if (graph.n() < k) return hist;
    const BitRows rows(graph);
    for_each_subset(graph.n(), k, [&](const std::vector<int>& s) {
        int m = 0;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) m += rows.test(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
        }
        ++hist.counts[static_cast<std::size_t>(m)];
    });
    return hist;
}

std::vector<std::vector<std::pair<int, int>>> hamilton_cycles(int k) {
    require_order(k);
    // Fix vertex 0 first and keep one of each pair of mirror orders.
    std::vector<int> rest(static_cast<std::size_t>(k - 1));
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<std::vector<std::pair<int, int>>> cycles;
    do {
        if (rest.front() > rest.back()) continue;
        std::vector<std::pair<int, int>> cycle;
        cycle.reserve(static_cast<std::size_t>(k));
        int prev = 0;
        for (int v : rest) {
            cycle.emplace_back(std::min(prev, v), std::max(prev, v));
            prev = v;
        }
        cycle.emplace_back(0, prev);
        cycles.push_back(std::move(cycle));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return cycles;
}

EdgeCountHistogram cycle_histogram(const AdjacencySample& graph, int k) {
    const auto cycles = hamilton_cycles(k);
    EdgeCountHistogram hist{k, std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0)};
    if (graph.n() < k) return hist;
    const BitRows rows(graph);
    for_each_subset(graph.n(), k, [&](const std::vector<int>& s) {
        for (const auto& cycle : cycles) {
            int m = 0;
            for (auto [a, b] : cycle) m += rows.test(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
            ++hist.counts[static_cast<std::size_t>(m)];
        }
    });
    return hist;
}

StatisticValue signed_triangle_stat(const AdjacencySample& graph, double p) {
    require_density(p);
    return make_value(StatisticKind::kSignedTriangle, 3, signed_sum(triangle_histogram(graph), p),
                      StatisticMethod::kTrace, graph.n());
}

double signed_triangle_stat_dense(const AdjacencySample& graph, double p) {
    require_density(p);
    const int n = graph.n();
    if (n < 3) return 0.0;
    Eigen::MatrixXd centered = Eigen::MatrixXd::Zero(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            const double v = graph.bit(k) ? 1.0 - p : -p;
            centered(i, j) = v;
            centered(j, i) = v;
        }
    }
    const Eigen::MatrixXd square = centered * centered;
    return (centered.array() * square.array()).sum() / 6.0;
}

StatisticValue signed_clique_stat(const AdjacencySample& graph, double p, int k) {
    require_density(p);
    const double v = signed_sum(clique_histogram(graph, k), p);
    return make_value(k == 3 ? StatisticKind::kSignedTriangle : StatisticKind::kSignedClique, k, v,
                      StatisticMethod::kEnumeration, graph.n());
}

StatisticValue signed_cycle_stat(const AdjacencySample& graph, double p, int k) {
    require_density(p);
    return make_value(StatisticKind::kSignedCycle, k, signed_sum(cycle_histogram(graph, k), p),
                      StatisticMethod::kEnumeration, graph.n());
}

StatisticValue clique_count(const AdjacencySample& graph, int k) {
    require_order(k);
    if (k == 3) {
        return make_value(StatisticKind::kPlainCount, 3,
                          static_cast<double>(triangle_histogram(graph).counts[3]), StatisticMethod::kTrace,
                          graph.n());
    }
    const EdgeCountHistogram h = clique_histogram(graph, k);
    return make_value(StatisticKind::kPlainCount, k, static_cast<double>(h.counts.back()),
                      StatisticMethod::kEnumeration, graph.n());
}

StatisticValue cycle_count(const AdjacencySample& graph, int k) {
    const EdgeCountHistogram h = cycle_histogram(graph, k);
    return make_value(StatisticKind::kPlainCount, k, static_cast<double>(h.counts.back()),
                      StatisticMethod::kEnumeration, graph.n());
}

void Pattern::validate() const {
    if (vertices < 2 || vertices > kMaxEnumerationOrder) {
        throw UnsupportedOrderError("pattern must have between 2 and " + std::to_string(kMaxEnumerationOrder) +
                                    " vertices");
    }
    if (edges.empty()) throw DomainError("pattern has no edges");
    for (auto [i, j] : edges) {
        if (i == j || i < 0 || j < 0 || i >= vertices || j >= vertices) {
            throw DomainError("pattern edge (" + std::to_string(i) + ", " + std::to_string(j) + ") is invalid");
        }
    }
}

int Pattern::distinct_edges() const {
    std::vector<std::pair<int, int>> e;
    for (auto [i, j] : edges) e.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(e.begin(), e.end());
    return static_cast<int>(std::unique(e.begin(), e.end()) - e.begin());
}

Pattern edge_pattern() { return {2, {{0, 1}}}; }

Pattern path_pattern(int length) {
    Pattern p{length + 1, {}};
    for (int i = 0; i < length; ++i) p.edges.emplace_back(i, i + 1);
    return p;
}

Pattern clique_pattern(int k) {
    Pattern p{k, {}};
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) p.edges.emplace_back(i, j);
    }
    return p;
}

Pattern cycle_pattern(int k) {
    Pattern p{k, {}};
    for (int i = 0; i + 1 < k; ++i) p.edges.emplace_back(i, i + 1);
    p.edges.emplace_back(0, k - 1);
    return p;
}

namespace {

Estimate to_estimate(const Moments& m) { return {m.mean, m.se(), m.count}; }

// Per-replicate draw of the pattern's latent points and of both edge versions.
class PatternSampler {
public:
    PatternSampler(const PatternModel& model, const Pattern& pattern) : model_(model), pattern_(pattern) {
        pattern_.validate();
        if (!(model_.p > 0.0 && model_.p < 1.0)) throw DomainError("pattern estimates need 0 < p < 1");
        if (!(model_.q >= 0.0 && model_.q <= 1.0)) throw DomainError("q must lie in [0, 1]");
        threshold_ = model_.latent == LatentKind::kUnitSphere ? sphere_threshold(model_.p, model_.d)
                                                              : gauss_threshold(model_.p, model_.d);
        for (auto [i, j] : pattern_.edges) {
            const int a = std::min(i, j);
            const int b = std::max(i, j);
            pairs_.emplace_back(a, b, pair_index(pattern_.vertices, a, b));
        }
    }

    struct Draw {
        double hard;
        double soft;
    };

    // Products over the pattern of the hard and soft edge values.
    Draw draw(std::uint64_t seed, std::uint64_t rep, bool centered) const {
        const std::uint64_t rep_seed = stream_key(seed, StreamTag::kReplicate, rep);
        const LatentMatrix x = sample_latent(pattern_.vertices, model_.d, model_.latent, rep_seed, LatentRoute::kAuto);
        const std::uint64_t edge_key = stream_key(rep_seed, StreamTag::kEdge);
        const ConnectionFunction phi(model_.p, model_.q, threshold_);
        const double shift = centered ? model_.p : 0.0;
        double hard = 1.0;
        double soft = 1.0;
        for (const auto& [a, b, idx] : pairs_) {
            const auto ra = x.row(a);
            const auto rb = x.row(b);
            double ip = 0.0;
            for (std::size_t c = 0; c < ra.size(); ++c) ip += ra[c] * rb[c];
            const bool h = ip >= threshold_;
            const bool s = model_.q == 1.0 ? h : uniform_at(edge_key, idx) < phi(ip);
            hard *= (h ? 1.0 : 0.0) - shift;
            soft *= (s ? 1.0 : 0.0) - shift;
        }
        return {hard, soft};
    }

private:
    PatternModel model_;
    Pattern pattern_;
    double threshold_ = 0.0;
    std::vector<std::tuple<int, int, std::size_t>> pairs_;
};

}  // namespace

Estimate pattern_mean_estimate(const PatternModel& model, const Pattern& pattern, bool centered,
                               std::uint64_t reps, std::uint64_t seed, int workers) {
    if (reps < 1) throw DomainError("reps must be at least 1");
    const PatternSampler sampler(model, pattern);
    return to_estimate(accumulate_replicates(reps, workers, [&](std::uint64_t r) {
        return sampler.draw(seed, r, centered).soft;
    }));
}

Estimate subgraph_probability_estimate(LatentKind latent, double p, int d, const Pattern& pattern,
                                       std::uint64_t reps, std::uint64_t seed, int workers) {
    return pattern_mean_estimate({latent, p, d, 1.0}, pattern, false, reps, seed, workers);
}

QScalingEstimate q_scaling_estimate(double p, int d, double q, const Pattern& pattern, std::uint64_t reps,
                                    std::uint64_t seed, int workers) {
    if (reps < 2) throw DomainError("reps must be at least 2");
    const PatternSampler sampler({LatentKind::kUnitSphere, p, d, q}, pattern);
    const int f = pattern.distinct_edges();
    const double scale = std::pow(q, f);
    const std::uint64_t chunks = (reps + kReplicateChunk - 1) / kReplicateChunk;
    std::vector<Moments> soft(chunks), hard(chunks), diff(chunks);
    parallel_for_index(chunks, workers, [&](std::uint64_t c) {
        const std::uint64_t end = std::min(reps, (c + 1) * kReplicateChunk);
        for (std::uint64_t r = c * kReplicateChunk; r < end; ++r) {
            const auto v = sampler.draw(seed, r, true);
            soft[c].add(v.soft);
            hard[c].add(v.hard);
            diff[c].add(v.soft - scale * v.hard);
        }
    });
    Moments s, h, df;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        s.merge(soft[c]);
        h.merge(hard[c]);
        df.merge(diff[c]);
    }
    return {to_estimate(s), to_estimate(h), to_estimate(df), f};
}

}  // namespace rgg
