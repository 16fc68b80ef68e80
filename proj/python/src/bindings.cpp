#include "rgg/graph_io.hpp"
#include "rgg/mc.hpp"
#include "rgg/model.hpp"
#include "rgg/stats.hpp"
#include "rgg/theory.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace py::literals;

namespace {

using rgg::AdjacencySample;
using Edges = std::vector<std::pair<int, int>>;

AdjacencySample make_graph(int n, const Edges& edges) { return AdjacencySample::from_edges(n, edges); }

py::array_t<std::uint8_t> adjacency(const AdjacencySample& g) {
    py::array_t<std::uint8_t> a({g.n(), g.n()});
    auto m = a.mutable_unchecked<2>();
    for (int i = 0; i < g.n(); ++i) {
        m(i, i) = 0;
        for (int j = i + 1; j < g.n(); ++j) m(i, j) = m(j, i) = g.edge(i, j) ? 1 : 0;
    }
    return a;
}

py::array_t<double> latent_array(const rgg::LatentMatrix& x) {
    py::array_t<double> a({x.rows(), x.cols()});
    std::copy(x.data().begin(), x.data().end(), a.mutable_data());
    return a;
}

py::dict estimate_dict(const rgg::Estimate& e) { return py::dict("mean"_a = e.mean, "se"_a = e.se, "reps"_a = e.reps); }

py::dict interval_dict(const rgg::theory::Interval& i) { return py::dict("lower"_a = i.lower, "upper"_a = i.upper); }

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random geometric graph core";

    py::class_<AdjacencySample>(m, "Graph")
        .def(py::init(&make_graph), "n"_a, "edges"_a = Edges{})
        .def_property_readonly("n", &AdjacencySample::n)
        .def_property_readonly("mode", [](const AdjacencySample& g) { return std::string(rgg::to_string(g.mode())); })
        .def_property_readonly("seed", &AdjacencySample::seed)
        .def_property_readonly("edges", &AdjacencySample::edges)
        .def("edge", &AdjacencySample::edge, "i"_a, "j"_a)
        .def("edge_count", &AdjacencySample::edge_count)
        .def("adjacency", &adjacency)
        .def("to_json", &rgg::graph_to_json, "p"_a)
        .def_static("from_json", [](const std::string& text) { return rgg::graph_from_json(text).graph; })
        .def("__eq__", [](const AdjacencySample& a, const AdjacencySample& b) { return a == b; })
        .def("__repr__", [](const AdjacencySample& g) {
            return "Graph(n=" + std::to_string(g.n()) + ", edges=" + std::to_string(g.edge_count()) + ")";
        });

    m.def(
        "sample_graph",
        [](int n, double p, int d, double q, const std::string& mode, std::uint64_t seed) {
            const auto s = rgg::sample_graph({n, p, d, q}, rgg::parse_sample_mode(mode), seed);
            return s.graph;
        },
        "n"_a, "p"_a, "d"_a = 2, "q"_a = 1.0, "mode"_a = "soft-sphere", "seed"_a = 0);

    m.def(
        "sample_latent",
        [](int n, int d, const std::string& kind, std::uint64_t seed) {
            return latent_array(rgg::sample_latent(n, d, rgg::parse_latent_kind(kind), seed, rgg::LatentRoute::kPoints));
        },
        "n"_a, "d"_a, "kind"_a = "unit-sphere", "seed"_a = 0);

    m.def("sphere_threshold", &rgg::sphere_threshold, "p"_a, "d"_a);
    m.def("gauss_threshold", &rgg::gauss_threshold, "p"_a, "d"_a);

    m.def("signed_triangle", [](const AdjacencySample& g, double p) { return rgg::signed_triangle_stat(g, p).value; },
          "graph"_a, "p"_a);
    m.def("signed_clique", [](const AdjacencySample& g, double p, int k) { return rgg::signed_clique_stat(g, p, k).value; },
          "graph"_a, "p"_a, "k"_a);
    m.def("signed_cycle", [](const AdjacencySample& g, double p, int k) { return rgg::signed_cycle_stat(g, p, k).value; },
          "graph"_a, "p"_a, "k"_a);
    m.def("clique_count", [](const AdjacencySample& g, int k) { return rgg::clique_count(g, k).value; }, "graph"_a,
          "k"_a);
    m.def("cycle_count", [](const AdjacencySample& g, int k) { return rgg::cycle_count(g, k).value; }, "graph"_a,
          "k"_a);

    m.def(
        "estimate_statistic",
        [](int n, double p, int d, double q, const std::string& mode, const std::string& statistic, int k,
           std::uint64_t reps, std::uint64_t seed, int workers) {
            const rgg::ModelParams params{n, p, d, q};
            const auto sample_mode = rgg::parse_sample_mode(mode);
            const auto spec = rgg::mc::parse_statistic_spec(statistic, k);
            rgg::Estimate e;
            {
                py::gil_scoped_release release;
                e = rgg::mc::estimate_statistic(params, sample_mode, spec, reps, seed, workers);
            }
            return estimate_dict(e);
        },
        "n"_a, "p"_a, "d"_a, "q"_a, "mode"_a = "soft-sphere", "statistic"_a = "triangle", "k"_a = 3,
        "reps"_a = 1000, "seed"_a = 0, "workers"_a = 1);

    m.def(
        "detect",
        [](int n, double p, int d, double q, std::uint64_t reps, std::uint64_t seed, const std::string& test,
           const std::string& mode, const std::string& statistic, int k, double alpha, int workers) {
            const rgg::ModelParams params{n, p, d, q};
            rgg::mc::DetectionOptions options;
            options.test = rgg::mc::parse_test_kind(test);
            options.mode = rgg::parse_sample_mode(mode);
            options.statistic = rgg::mc::parse_statistic_spec(statistic, k);
            options.alpha = alpha;
            options.workers = workers;
            std::string text;
            {
                py::gil_scoped_release release;
                text = rgg::mc::record_to_json(rgg::mc::detection_experiment(params, reps, seed, options));
            }
            return json_loads(text);
        },
        "n"_a, "p"_a, "d"_a, "q"_a, "reps"_a = 200, "seed"_a = 0, "test"_a = "half-mean-threshold",
        "mode"_a = "soft-sphere", "statistic"_a = "triangle", "k"_a = 3, "alpha"_a = 0.05, "workers"_a = 1);

    namespace th = rgg::theory;
    m.def("gamma", &th::gamma_d, "d"_a);
    m.def("eta", &th::eta_d, "d"_a);
    m.def("phase", [](double alpha, double beta) { return std::string(th::to_string(th::phase_classify({alpha, beta}))); },
          "alpha"_a, "beta"_a);
    m.def("tau3_variance_half", &th::tau3_variance_half, "n"_a, "d"_a, "q"_a);
    m.def("half_moments", [](int d) {
        const auto t = th::half_moment_table(d);
        return py::dict("d"_a = t.d, "gamma"_a = t.gamma, "eta"_a = t.eta, "eta_half"_a = t.eta_half,
                        "triangle_prob"_a = t.triangle_prob, "quad_path_prob"_a = t.quad_path_prob,
                        "house_prob"_a = t.house_prob, "quadrilateral_mean"_a = t.quadrilateral_mean,
                        "clique4_prob"_a = interval_dict(t.clique4_prob), "q1"_a = interval_dict(t.q1),
                        "tau4_mean"_a = interval_dict(t.tau4_mean));
    }, "d"_a);
    m.def("mean_bounds", [](int n, double p, int d, double q) {
        const auto b = th::signed_triangle_mean_bounds(n, p, d, q);
        return py::dict("lower"_a = b.lower, "upper"_a = b.upper, "measured_constant"_a = b.measured_constant);
    }, "n"_a, "p"_a, "d"_a, "q"_a);
    m.def("tv_bounds", [](int n, double p, int d, double q) {
        const auto r = th::tv_bound_report(n, p, d, q);
        return py::dict("tv_weak_noise"_a = r.tv_weak_noise, "tv_weak_noise_valid"_a = r.tv_weak_noise_valid,
                        "kl_edgewise"_a = r.kl_edgewise, "kl_edgewise_exact"_a = r.kl_edgewise_exact,
                        "tv_structural_terms"_a = r.tv_structural_terms,
                        "tv_structural_valid"_a = r.tv_structural_valid, "mixture_bounds"_a = r.mixture_bounds);
    }, "n"_a, "p"_a, "d"_a, "q"_a);
    m.def("wishart_logdet", [](int n, int d) {
        const auto w = th::wishart_logdet_mean(n, d);
        return py::dict("mean_log_det"_a = w.mean_log_det, "mean_neg_log_det_scaled"_a = w.mean_neg_log_det_scaled,
                        "bound"_a = w.bound);
    }, "n"_a, "d"_a);
}
