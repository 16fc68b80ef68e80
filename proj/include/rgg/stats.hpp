#pragma once

#include "rgg/model.hpp"

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace rgg {

enum class StatisticKind { kSignedTriangle, kSignedClique, kSignedCycle, kPlainCount };
enum class StatisticMethod { kTrace, kEnumeration };

std::string_view to_string(StatisticKind kind);
std::string_view to_string(StatisticMethod method);
StatisticKind parse_statistic_kind(std::string_view name);

struct StatisticValue {
    StatisticKind kind = StatisticKind::kSignedTriangle;
    int k = 3;
    double value = 0.0;
    StatisticMethod method = StatisticMethod::kEnumeration;
    bool degenerate = false;  ///< n < k: the sum is empty
};

inline constexpr int kMinEnumerationOrder = 3;
inline constexpr int kMaxEnumerationOrder = 8;

/// counts[m] = number of vertex subsets (or cycles) with exactly m of their
/// `pattern_edges` edges present in the graph.
struct EdgeCountHistogram {
    int pattern_edges = 0;
    std::vector<std::uint64_t> counts;
};

/// sum_m counts[m] (1 - p)^m (-p)^(E - m): the signed sum over the
/// histogram's subsets, each term a product of centered edge values.
double signed_sum(const EdgeCountHistogram& hist, double p);

/// Triangle histogram from degrees, edge count and tr(A^3), in O(n^3 / 64).
EdgeCountHistogram triangle_histogram(const AdjacencySample& graph);

/// Histogram over all k-subsets of the number of induced edges.
EdgeCountHistogram clique_histogram(const AdjacencySample& graph, int k);

/// Histogram over all k-subsets and all Hamilton cycles on each subset.
EdgeCountHistogram cycle_histogram(const AdjacencySample& graph, int k);

/// The (k-1)!/2 Hamilton cycles on vertices {0, ..., k-1}, each as its k edges.
std::vector<std::vector<std::pair<int, int>>> hamilton_cycles(int k);

/// tau_3 = sum over triples of the centered edge product, by the trace path.
/// Shares the final evaluation with the enumeration path, so the two agree
/// exactly.
StatisticValue signed_triangle_stat(const AdjacencySample& graph, double p);

/// tr(Abar^3) / 6 with a dense floating-point centered matrix. Agrees with
/// signed_triangle_stat up to rounding.
double signed_triangle_stat_dense(const AdjacencySample& graph, double p);

StatisticValue signed_clique_stat(const AdjacencySample& graph, double p, int k);
StatisticValue signed_cycle_stat(const AdjacencySample& graph, double p, int k);

/// Number of k-cliques (shape "clique") or k-cycles (shape "cycle").
StatisticValue clique_count(const AdjacencySample& graph, int k);
StatisticValue cycle_count(const AdjacencySample& graph, int k);

/// Edge multiset on `vertices` labelled vertices. A repeated edge contributes
/// its factor once per occurrence.
struct Pattern {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;

    void validate() const;
    /// Number of distinct edges.
    int distinct_edges() const;
};

Pattern edge_pattern();
Pattern path_pattern(int length);
Pattern clique_pattern(int k);
Pattern cycle_pattern(int k);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t reps = 0;
};

/// Latent law, threshold and edge rule shared by the pattern estimators.
/// q = 1 uses hard indicators; q < 1 draws soft edges given the latent points.
struct PatternModel {
    LatentKind latent = LatentKind::kUnitSphere;
    double p = 0.5;
    int d = 2;
    double q = 1.0;
};

/// Monte Carlo estimate of P(all pattern edges present) in the hard model
/// (unit-sphere latents use t_pd, standard-normal latents use u_pd). Each
/// replicate draws only the pattern's latent points.
Estimate subgraph_probability_estimate(LatentKind latent, double p, int d, const Pattern& pattern,
                                       std::uint64_t reps, std::uint64_t seed, int workers = 1);

/// Monte Carlo mean of prod_e a_e (centered = false) or prod_e (a_e - p)
/// (centered = true) over the pattern's edges.
Estimate pattern_mean_estimate(const PatternModel& model, const Pattern& pattern, bool centered,
                               std::uint64_t reps, std::uint64_t seed, int workers = 1);

/// Paired soft/hard comparison of the signed pattern indicator. Both graphs
/// share each replicate's latent points; `difference` is soft - q^F hard.
struct QScalingEstimate {
    Estimate soft;
    Estimate hard;
    Estimate difference;
    int distinct_edges = 0;
};

QScalingEstimate q_scaling_estimate(double p, int d, double q, const Pattern& pattern,
                                    std::uint64_t reps, std::uint64_t seed, int workers = 1);

}  // namespace rgg
