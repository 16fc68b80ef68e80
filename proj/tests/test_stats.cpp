#include "rgg/model.hpp"
#include "rgg/parallel.hpp"
#include "rgg/rng.hpp"
#include "rgg/stats.hpp"
#include "rgg/theory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace {

using namespace rgg;

AdjacencySample complete(int n) {
    AdjacencySample g(n, SampleMode::kExternal, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
    }
    return g;
}

AdjacencySample random_graph(int n, double p, std::uint64_t seed) {
    return sample_graph({n, p, 2, 0.0}, SampleMode::kErdosRenyi, seed).graph;
}

// Triple loop over vertex triples, independent of the library's bit-parallel
// counting: histogram of present edges per triple.
EdgeCountHistogram brute_triangle_histogram(const AdjacencySample& g) {
    EdgeCountHistogram h{3, std::vector<std::uint64_t>(4, 0)};
    for (int i = 0; i < g.n(); ++i) {
        for (int j = i + 1; j < g.n(); ++j) {
            for (int k = j + 1; k < g.n(); ++k) ++h.counts[g.edge(i, j) + g.edge(j, k) + g.edge(i, k)];
        }
    }
    return h;
}

double brute_triangle(const AdjacencySample& g, double p) { return signed_sum(brute_triangle_histogram(g), p); }

// Direct floating sum of centered products.
double naive_triangle(const AdjacencySample& g, double p) {
    auto c = [&](int i, int j) { return g.edge(i, j) ? 1.0 - p : -p; };
    double s = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = i + 1; j < g.n(); ++j) {
            for (int k = j + 1; k < g.n(); ++k) s += c(i, j) * c(j, k) * c(i, k);
        }
    }
    return s;
}

TEST(SignedTriangle, Examples) {
    EXPECT_EQ(signed_triangle_stat(complete(3), 0.5).value, 0.125);
    EXPECT_EQ(signed_triangle_stat(AdjacencySample(3, SampleMode::kExternal, 0), 0.5).value, -0.125);
    const auto v = signed_triangle_stat(complete(3), 0.5);
    EXPECT_EQ(v.kind, StatisticKind::kSignedTriangle);
    EXPECT_EQ(v.k, 3);
    EXPECT_EQ(v.method, StatisticMethod::kTrace);
}

TEST(SignedTriangle, DegenerateBelowThreeVertices) {
    const auto v = signed_triangle_stat(complete(2), 0.5);
    EXPECT_TRUE(v.degenerate);
    EXPECT_EQ(v.value, 0.0);
}

TEST(SignedTriangle, TraceEqualsEnumeration) {
    for (std::uint64_t r = 0; r < 200; ++r) {
        const auto g = random_graph(12, 0.37, derive_key(21, r));
        EXPECT_EQ(signed_triangle_stat(g, 0.37).value, brute_triangle(g, 0.37));
    }
    for (std::uint64_t r = 0; r < 500; ++r) {
        const int n = 3 + static_cast<int>(r % 10);
        const double p = uniform_at(22, r);
        const auto g = random_graph(n, p, derive_key(23, r));
        EXPECT_EQ(signed_triangle_stat(g, p).value, signed_clique_stat(g, p, 3).value);
        EXPECT_EQ(signed_triangle_stat(g, p).value, brute_triangle(g, p));
    }
}

TEST(SignedTriangle, NaiveSumAgrees) {
    for (std::uint64_t r = 0; r < 200; ++r) {
        const auto g = random_graph(12, 0.37, derive_key(30, r));
        EXPECT_NEAR(signed_triangle_stat(g, 0.37).value, naive_triangle(g, 0.37), 1e-12);
        // Dyadic p makes every product and partial sum exact.
        const auto h = random_graph(12, 0.375, derive_key(31, r));
        EXPECT_EQ(signed_triangle_stat(h, 0.375).value, naive_triangle(h, 0.375));
    }
}

TEST(SignedTriangle, DensePathAgrees) {
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto g = random_graph(40, 0.3, derive_key(24, r));
        const double exact = signed_triangle_stat(g, 0.3).value;
        EXPECT_NEAR(signed_triangle_stat_dense(g, 0.3), exact, 1e-9 * std::max(1.0, std::abs(exact)));
    }
}

TEST(SignedClique, Examples) {
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto g = random_graph(10, 0.5, derive_key(25, r));
        const auto v = signed_clique_stat(g, 0.5, 3);
        EXPECT_EQ(v.value, signed_triangle_stat(g, 0.5).value);
        EXPECT_EQ(v.kind, StatisticKind::kSignedTriangle);
    }
    EXPECT_EQ(signed_clique_stat(complete(4), 0.5, 4).value, 0.015625);
    EXPECT_THROW(signed_clique_stat(complete(10), 0.5, 9), UnsupportedOrderError);
    EXPECT_THROW(signed_clique_stat(complete(10), 0.5, 2), UnsupportedOrderError);
}

TEST(SignedClique, ErdosRenyiMeanZero) {
    const Moments m = accumulate_replicates(20'000, 1, [](std::uint64_t r) {
        return signed_clique_stat(random_graph(14, 0.5, derive_key(26, r)), 0.5, 4).value;
    });
    EXPECT_LE(std::abs(m.mean), 3.0 * m.se());
}

TEST(SignedCycle, Examples) {
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto g = random_graph(9, 0.45, derive_key(27, r));
        EXPECT_EQ(signed_cycle_stat(g, 0.45, 3).value, signed_triangle_stat(g, 0.45).value);
    }
    const std::vector<std::pair<int, int>> c4{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const auto g = AdjacencySample::from_edges(4, c4);
    const auto v = signed_cycle_stat(g, 0.5, 4);
    EXPECT_EQ(v.value, 0.1875);
    EXPECT_EQ(v.kind, StatisticKind::kSignedCycle);
    EXPECT_THROW(signed_cycle_stat(g, 0.5, 9), UnsupportedOrderError);
}

TEST(SignedCycle, ErdosRenyiVariance) {
    const int n = 12;
    const double p = 0.4;
    const Moments m = accumulate_replicates(50'000, 1, [&](std::uint64_t r) {
        return signed_cycle_stat(random_graph(n, p, derive_key(28, r)), p, 4).value;
    });
    // n!/((n-4)! 8) (p(1-p))^4
    const double expected = 12.0 * 11 * 10 * 9 / 8.0 * std::pow(p * (1 - p), 4);
    EXPECT_NEAR(expected, theory::er_cycle_variance(n, p, 4), 1e-12);
    EXPECT_LE(std::abs(m.variance() / expected - 1.0), 0.05);
}

TEST(SignedTriangle, ErdosRenyiMoments) {
    const Moments m = accumulate_replicates(100'000, 1, [](std::uint64_t r) {
        return signed_triangle_stat(random_graph(10, 0.3, derive_key(29, r)), 0.3).value;
    });
    const double expected = 120.0 * std::pow(0.21, 3);
    EXPECT_LE(std::abs(m.mean), 3.0 * m.se());
    EXPECT_LE(std::abs(m.variance() / expected - 1.0), 0.05);
}

TEST(HamiltonCycles, Count) {
    int factorial = 1;
    for (int k = 3; k <= 8; ++k) {
        factorial *= (k - 1);
        EXPECT_EQ(hamilton_cycles(k).size(), static_cast<std::size_t>(factorial / 2)) << k;
    }
}

TEST(HamiltonCycles, EachCycleIsSpanningAndDistinct) {
    const auto cycles = hamilton_cycles(6);
    std::vector<std::vector<std::pair<int, int>>> sorted;
    for (auto c : cycles) {
        ASSERT_EQ(c.size(), 6u);
        std::vector<int> degree(6, 0);
        for (auto [a, b] : c) {
            ++degree[a];
            ++degree[b];
        }
        for (int dgr : degree) EXPECT_EQ(dgr, 2);
        for (auto& e : c) {
            if (e.first > e.second) std::swap(e.first, e.second);
        }
        std::sort(c.begin(), c.end());
        sorted.push_back(c);
    }
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
}

TEST(PlainCounts, SmallGraphs) {
    EXPECT_EQ(clique_count(complete(6), 3).value, 20.0);
    EXPECT_EQ(clique_count(complete(6), 4).value, 15.0);
    EXPECT_EQ(cycle_count(complete(5), 4).value, 15.0);
    EXPECT_EQ(cycle_count(complete(5), 5).value, 12.0);
}

TEST(Patterns, Validation) {
    EXPECT_EQ(path_pattern(2).distinct_edges(), 2);
    EXPECT_EQ(clique_pattern(4).distinct_edges(), 6);
    EXPECT_EQ(cycle_pattern(5).distinct_edges(), 5);
    EXPECT_THROW((Pattern{9, {{0, 1}}}.validate()), std::exception);
    EXPECT_THROW((Pattern{3, {{0, 3}}}.validate()), std::exception);
}

TEST(SubgraphProbability, Examples) {
    const auto path = subgraph_probability_estimate(LatentKind::kUnitSphere, 0.3, 16, path_pattern(2), 200'000, 31);
    EXPECT_LE(std::abs(path.mean - 0.09), 3.0 * path.se);

    const auto edge = subgraph_probability_estimate(LatentKind::kUnitSphere, 0.3, 16, edge_pattern(), 200'000, 32);
    EXPECT_LE(std::abs(edge.mean - 0.3), 3.0 * edge.se);

    const int d = 64;
    const auto tri = subgraph_probability_estimate(LatentKind::kUnitSphere, 0.5, d, clique_pattern(3), 1'000'000, 33);
    const double pi = std::numbers::pi;
    EXPECT_GE(tri.mean - 0.125, 1.0 / (2 * pi * std::sqrt(2 * pi)) / std::sqrt(d) - 3.0 * tri.se);
    EXPECT_LE(tri.mean - 0.125, 1.0 / (4 * std::sqrt(pi)) / std::sqrt(d) + 3.0 * tri.se);
}

TEST(SubgraphProbability, LongerPathsFactorize) {
    for (int len : {3, 4}) {
        const auto est = subgraph_probability_estimate(LatentKind::kUnitSphere, 0.4, 10, path_pattern(len), 1'000'000, 34);
        EXPECT_LE(std::abs(est.mean - std::pow(0.4, len)), 3.0 * est.se) << len;
    }
}

TEST(QScaling, TriangleAndFourCycle) {
    for (const auto& pattern : {clique_pattern(3), cycle_pattern(4)}) {
        for (double q : {0.3, 0.7}) {
            const auto est = q_scaling_estimate(0.3, 32, q, pattern, 200'000, 35);
            EXPECT_LE(std::abs(est.difference.mean), 3.0 * est.difference.se)
                << pattern.vertices << " q=" << q;
        }
    }
}

TEST(SignedSum, Histogram) {
    // Two patterns with all edges present, one with none: 2 (1-p)^3 + (-p)^3.
    const EdgeCountHistogram h{3, {1, 0, 0, 2}};
    EXPECT_DOUBLE_EQ(signed_sum(h, 0.25), 2 * std::pow(0.75, 3) - std::pow(0.25, 3));
}

}  // namespace
