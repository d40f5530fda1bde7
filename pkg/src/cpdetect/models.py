"""Random graph models with planted core-periphery structure.

Two generators are provided: a logistic model whose edge probabilities
decay smoothly with the planted position of the more peripheral
endpoint, and a two-block model with separate core and periphery
densities.  Both draw every pair decision from a counter-based
(Philox) stream, so a seed pins the output exactly.

The logistic model's planted ordering uses identity ranks: node ``i``
(1-based) has rank ``i``, node ``n`` is the innermost core node, and a
pair is joined with probability ``sigmoid(max(rank_i, rank_j) / n)``
shifted by the threshold.  The log-likelihood of any candidate ordering
under this model is computed pair by pair, which keeps it an honest,
independent counterpart to the hard-max objective.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit, log_expit

from .graph import Graph, is_connected

__all__ = [
    "BlockSetting",
    "LogisticParams",
    "SbmParams",
    "LogisticSample",
    "BlockModelSample",
    "sigmoid",
    "heaviside",
    "logistic_graph",
    "block_model_graph",
    "ordering_log_likelihood",
    "likelihood_objective_equivalence",
]


def sigmoid(x, s, t):
    """Logistic sigmoid 1 / (1 + exp(-s * (x - t))); 1/2 at x = t."""
    x = np.asarray(x, dtype=np.float64)
    out = expit(s * (x - t))
    return float(out) if out.ndim == 0 else out


def heaviside(x, t):
    """Unit step: 1 where x >= t (boundary included), else 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.heaviside(x - t, 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LogisticParams:
    """Logistic model parameters: size, steepness, threshold, seed."""

    n: int
    s: float = 7.0
    t: float = 2.0 / 3.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.s < 0:
            raise ValueError("steepness must be nonnegative")
        if not 0.0 < self.t < 1.0:
            raise ValueError("threshold must lie in (0, 1)")


class BlockSetting(str, Enum):
    """Which pairs get the lower of the two block probabilities."""

    EITHER_PERIPHERY = "either"
    BOTH_PERIPHERY = "both"


@dataclass(frozen=True)
class SbmParams:
    """Two-block model parameters.

    With base probability p and amplification k, the dense block(s)
    use probability k^2 * p and the sparse block(s) k * p; the setting
    selects whether a single peripheral endpoint is enough for the
    sparse probability or both endpoints must be peripheral.
    """

    n: int
    delta: float = 0.5
    p_base: float = 0.25
    k: float = 1.0
    setting: BlockSetting = BlockSetting.EITHER_PERIPHERY
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if not 0.0 <= self.p_base <= 1.0:
            raise ValueError("p_base must lie in [0, 1]")
        kmax = np.inf if self.p_base == 0 else 1.0 / np.sqrt(self.p_base)
        if not 1.0 <= self.k <= kmax + 1e-12:
            raise ValueError(
                f"k must lie in [1, 1/sqrt(p_base)] = [1, {kmax:.6g}] so that "
                f"k*p and k^2*p stay in [0, 1]; got k={self.k}"
            )
        object.__setattr__(self, "setting", BlockSetting(self.setting))


@dataclass(frozen=True)
class LogisticSample:
    """Generated graph, its planted ranks (1-based, n = most core), connectivity."""

    graph: Graph
    true_ranks: np.ndarray
    connected: bool


@dataclass(frozen=True)
class BlockModelSample:
    """Generated graph, sorted indices of the planted core, connectivity."""

    graph: Graph
    core_nodes: np.ndarray
    connected: bool


def _pair_stream(seed: int):
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def logistic_graph(params: LogisticParams) -> LogisticSample:
    """Draw one graph from the logistic model.

    Pair (i, j) with 1-based positions is joined independently with
    probability ``sigmoid(max(i, j) / n, s, t)``, so high-position nodes
    share edges with everyone and low-position pairs are sparse.  Node
    labels are the 1-based positions; the planted ranks are the identity.
    The sample may come out disconnected; it is returned as-is with a
    connectivity flag.
    """
    n = params.n
    rng = _pair_stream(params.seed)
    iu, ju = np.triu_indices(n, k=1)
    prob = sigmoid((ju + 1.0) / n, params.s, params.t)  # ju is the larger index
    draw = rng.random(iu.size)
    keep = draw < prob
    graph = Graph.from_edges(
        n, iu[keep], ju[keep], None, [str(i + 1) for i in range(n)]
    )
    ranks = np.arange(1, n + 1, dtype=np.int64)
    return LogisticSample(graph, ranks, is_connected(graph))


def block_model_graph(params: SbmParams) -> BlockModelSample:
    """Draw one graph from the two-block model.

    The first ``floor(delta * n)`` generated nodes form the core; after
    the pair draws the node order is shuffled (same seeded stream), so
    detection cannot read the planted structure off the index order.
    """
    n = params.n
    rng = _pair_stream(params.seed)
    n_core = int(np.floor(params.delta * n + 1e-9))
    core_mask = np.zeros(n, dtype=bool)
    core_mask[:n_core] = True

    iu, ju = np.triu_indices(n, k=1)
    kp = params.k * params.p_base
    k2p = params.k**2 * params.p_base
    both_core = core_mask[iu] & core_mask[ju]
    both_periphery = ~core_mask[iu] & ~core_mask[ju]
    if params.setting is BlockSetting.EITHER_PERIPHERY:
        prob = np.where(both_core, k2p, kp)
    else:
        prob = np.where(both_periphery, kp, k2p)

    keep = rng.random(iu.size) < prob
    relabel = rng.permutation(n)
    graph = Graph.from_edges(
        n, relabel[iu[keep]], relabel[ju[keep]], None, [str(i) for i in range(n)]
    )
    core_nodes = np.sort(relabel[:n_core])
    return BlockModelSample(graph, core_nodes, is_connected(graph))


def _check_ranks(ranks, n) -> np.ndarray:
    r = np.asarray(ranks, dtype=np.int64).ravel()
    if r.shape[0] != n or not np.array_equal(np.sort(r), np.arange(1, n + 1)):
        raise ValueError("ranks must be a bijection onto 1..n")
    return r


def _pair_z(ranks, n, s, t):
    """s * (max(rank_i, rank_j)/n - t) for every unordered pair, plus the edge keys."""
    iu, ju = np.triu_indices(n, k=1)
    m = np.maximum(ranks[iu], ranks[ju]).astype(np.float64)
    diff = m / n - t
    if np.isinf(s):
        z = np.where(diff == 0.0, 0.0, np.sign(diff) * np.inf)
    else:
        z = s * diff
    return iu, ju, z


def ordering_log_likelihood(graph: Graph, ranks, s: float, t: float) -> float:
    """Log-probability of the graph's edge pattern under the logistic model.

    Weights are ignored (presence only).  Every unordered pair
    contributes ``log(phi)`` if joined and ``log(1 - phi)`` otherwise,
    with ``phi = sigmoid(max(rank_i, rank_j) / n, s, t)``.  Finite for
    finite steepness; an infinite steepness can produce ``-inf`` when the
    pattern contradicts the implied hard threshold.
    """
    n = graph.node_count
    r = _check_ranks(ranks, n)
    if s < 0:
        raise ValueError("steepness must be nonnegative")
    iu, ju, z = _pair_z(r, n, s, t)
    joined = np.zeros((n, n), dtype=bool)
    joined[graph.edge_index[:, 0], graph.edge_index[:, 1]] = True
    joined[graph.edge_index[:, 1], graph.edge_index[:, 0]] = True
    mask = joined[iu, ju]
    return float(np.sum(np.where(mask, log_expit(z), log_expit(-z))))


def likelihood_objective_equivalence(
    graph: Graph, s: float, t: float, rel_tol: float = 1e-9
) -> bool:
    """Exhaustively compare the argmax sets of likelihood and hard-max objective.

    Enumerates all orderings (so the graph must have at most 9 nodes),
    evaluates the pairwise log-likelihood and the hard-max objective for
    each, and checks that the two sets of maximizers coincide exactly.
    Likelihood ties are grouped at the given relative tolerance.
    """
    n = graph.node_count
    if n > 9:
        raise ValueError("exhaustive check is limited to n <= 9")
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.float64)

    iu, ju = np.triu_indices(n, k=1)
    joined = np.zeros((n, n), dtype=bool)
    joined[graph.edge_index[:, 0], graph.edge_index[:, 1]] = True
    joined[graph.edge_index[:, 1], graph.edge_index[:, 0]] = True
    mask = joined[iu, ju]

    ei = graph.edge_index[:, 0]
    ej = graph.edge_index[:, 1]
    w = graph.edge_weight

    ll = np.empty(perms.shape[0])
    fv = np.empty(perms.shape[0])
    chunk = 50_000
    for lo in range(0, perms.shape[0], chunk):
        block = perms[lo : lo + chunk]
        m = np.maximum(block[:, iu], block[:, ju])
        z = s * (m / n - t)
        ll[lo : lo + chunk] = np.where(mask, log_expit(z), log_expit(-z)).sum(axis=1)
        fv[lo : lo + chunk] = 2.0 * (np.maximum(block[:, ei], block[:, ej]) * w).sum(axis=1)

    best_ll = ll.max()
    best_fv = fv.max()
    set_ll = np.flatnonzero(best_ll - ll <= rel_tol * abs(best_ll))
    set_fv = np.flatnonzero(best_fv - fv <= rel_tol * abs(best_fv))
    return np.array_equal(set_ll, set_fv)


def best_orderings_by_likelihood(graph: Graph, s: float, t: float, rel_tol: float = 1e-9):
    """All rank vectors attaining the maximal likelihood (exhaustive, n <= 9)."""
    n = graph.node_count
    if n > 9:
        raise ValueError("exhaustive search is limited to n <= 9")
    perms = list(itertools.permutations(range(1, n + 1)))
    ll = np.array([ordering_log_likelihood(graph, p, s, t) for p in perms])
    best = ll.max()
    return [np.array(perms[i]) for i in np.flatnonzero(best - ll <= rel_tol * abs(best))]
