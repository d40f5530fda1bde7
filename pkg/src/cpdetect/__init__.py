"""Core-periphery structure detection for undirected weighted networks.

The package bundles a globally convergent nonlinear power iteration for
core scores, four classical baselines, two seeded random-graph models
with planted structure, and the metrics used to compare methods.
"""

from .baselines import (
    AnnealSchedule,
    EigenResult,
    degree_scores,
    eigenvector_centrality,
    h_index_coreness,
    product_quality,
    ramp_scores,
    simulated_annealing_scores,
)
from .graph import (
    Graph,
    GraphFormatError,
    NotConnectedError,
    degree_vector,
    is_connected,
    largest_component,
    load_edge_list,
    load_matrix_market,
    write_edge_list,
)
from .kernel import (
    KernelParams,
    max_objective,
    objective_gradient,
    pnorm,
    power_iteration_step,
    smooth_max,
    smooth_max_objective,
    thomson_distance,
)
from .metrics import (
    core_periphery_profile,
    kendall_tau,
    normalized_quality,
    rank_from_scores,
    recovery_fraction,
)
from .models import (
    BlockModelSample,
    BlockSetting,
    LogisticParams,
    LogisticSample,
    SbmParams,
    block_model_graph,
    heaviside,
    likelihood_objective_equivalence,
    logistic_graph,
    ordering_log_likelihood,
    sigmoid,
)
from .nsm import NsmParams, NsmResult, apriori_error_bound, nsm_detect

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule",
    "BlockModelSample",
    "BlockSetting",
    "EigenResult",
    "Graph",
    "GraphFormatError",
    "KernelParams",
    "LogisticParams",
    "LogisticSample",
    "NotConnectedError",
    "NsmParams",
    "NsmResult",
    "SbmParams",
    "apriori_error_bound",
    "block_model_graph",
    "core_periphery_profile",
    "degree_scores",
    "degree_vector",
    "eigenvector_centrality",
    "h_index_coreness",
    "heaviside",
    "is_connected",
    "kendall_tau",
    "largest_component",
    "likelihood_objective_equivalence",
    "load_edge_list",
    "load_matrix_market",
    "logistic_graph",
    "max_objective",
    "nsm_detect",
    "normalized_quality",
    "objective_gradient",
    "ordering_log_likelihood",
    "pnorm",
    "power_iteration_step",
    "product_quality",
    "ramp_scores",
    "rank_from_scores",
    "recovery_fraction",
    "sigmoid",
    "simulated_annealing_scores",
    "smooth_max",
    "smooth_max_objective",
    "thomson_distance",
    "write_edge_list",
]
