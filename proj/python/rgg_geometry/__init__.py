"""Random geometric graphs: sampling, signed subgraph statistics, theory
quantities and detection experiments."""

from ._core import (
    Graph,
    clique_count,
    cycle_count,
    detect,
    estimate_statistic,
    eta,
    gamma,
    gauss_threshold,
    half_moments,
    mean_bounds,
    phase,
    sample_graph,
    sample_latent,
    signed_clique,
    signed_cycle,
    signed_triangle,
    sphere_threshold,
    tau3_variance_half,
    tv_bounds,
    wishart_logdet,
)

__all__ = [
    "Graph",
    "clique_count",
    "cycle_count",
    "detect",
    "estimate_statistic",
    "eta",
    "gamma",
    "gauss_threshold",
    "half_moments",
    "mean_bounds",
    "phase",
    "sample_graph",
    "sample_latent",
    "signed_clique",
    "signed_cycle",
    "signed_triangle",
    "sphere_threshold",
    "tau3_variance_half",
    "tv_bounds",
    "wishart_logdet",
]
