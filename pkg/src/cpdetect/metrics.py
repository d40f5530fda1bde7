"""Quality and comparison metrics for core-periphery scores.

All rank-based metrics break ties by ascending node index (stable), so
cross-method comparisons are deterministic.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, NotConnectedError, is_connected
from .kernel import max_objective

__all__ = [
    "rank_from_scores",
    "core_periphery_profile",
    "normalized_quality",
    "kendall_tau",
    "recovery_fraction",
]


def rank_from_scores(scores) -> np.ndarray:
    """Ascending ranks: the node with the smallest score gets rank 1.

    Ties are broken by ascending node index, so the output is always a
    valid permutation of 1..n; any positive rescaling of the scores
    yields the same ranks.
    """
    x = np.asarray(scores, dtype=np.float64).ravel()
    if x.size < 1:
        raise ValueError("need at least one score")
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.int64)
    ranks[order] = np.arange(1, x.size + 1)
    return ranks


def core_periphery_profile(graph: Graph, scores) -> np.ndarray:
    """Edge-retention profile of the ascending score ordering.

    Entry k-1 (for k = 1..n) is the fraction of the edge weight incident
    to the k lowest-scored nodes that stays among those nodes; it equals
    the probability that a stationary random walker currently inside the
    set remains inside at the next step.  The final entry is exactly 1.

    Requires a connected graph with at least two nodes so that every
    prefix has positive incident weight.
    """
    n = graph.node_count
    x = np.asarray(scores, dtype=np.float64).ravel()
    if x.shape[0] != n:
        raise ValueError("score vector length does not match the graph")
    if n < 2 or not is_connected(graph):
        raise NotConnectedError("profile needs a connected graph with >= 2 nodes")

    order = np.argsort(x, kind="stable")
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n)

    a = graph.adjacency
    indptr, indices, data = a.indptr, a.indices, a.data
    degrees = graph.degrees

    gamma = np.empty(n)
    inside = np.zeros(n, dtype=bool)
    internal = 0.0
    incident = 0.0
    for k, u in enumerate(order):
        w_in = 0.0
        for ptr in range(indptr[u], indptr[u + 1]):
            if inside[indices[ptr]]:
                w_in += data[ptr]
        inside[u] = True
        internal += 2.0 * w_in
        incident += degrees[u]
        gamma[k] = internal / incident
    # for the full node set the internal and incident sums are the same
    # quantity, so the last ratio is 1 by construction
    gamma[n - 1] = 1.0
    return gamma


def normalized_quality(graph: Graph, scores) -> float:
    """Hard-max objective rescaled to be scale-invariant and at most 1.

    Divides by ``max(scores) * (total ordered-pair weight)``; constant
    positive scores give exactly 1.
    """
    x = np.asarray(scores, dtype=np.float64).ravel()
    top = x.max(initial=0.0)
    if top <= 0:
        raise ValueError("scores must contain a positive entry")
    total = 2.0 * float(graph.edge_weight.sum())
    return max_objective(graph, x) / (top * total)


def _merge_count(values: np.ndarray) -> int:
    """Number of inversions (pairs i < j with values[i] > values[j])."""
    x = values.copy()
    buf = np.empty_like(x)
    inversions = 0
    width = 1
    n = x.size
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            if mid == hi:
                continue
            left = x[lo:mid]
            right = x[mid:hi]
            # elements of `left` strictly greater than each right element
            pos = np.searchsorted(left, right, side="right")
            inversions += int((left.size - pos).sum())
            out = buf[lo:hi]
            right_slots = pos + np.arange(right.size)
            left_slots = np.searchsorted(right, left, side="left") + np.arange(left.size)
            out[right_slots] = right
            out[left_slots] = left
            x[lo:hi] = out
        width *= 2
    return inversions


def kendall_tau(values_a, values_b) -> float:
    """Tie-adjusted rank correlation (tau-b) between two score vectors.

    Counts concordant and discordant pairs in O(n log n) by sorting on
    the first vector and merge-counting inversions of the second.
    Raises if either vector is entirely tied, where tau is undefined.
    """
    a = np.asarray(values_a, dtype=np.float64).ravel()
    b = np.asarray(values_b, dtype=np.float64).ravel()
    if a.shape != b.shape or a.size < 2:
        raise ValueError("inputs must be two equal-length vectors with n >= 2")

    n = a.size
    n0 = n * (n - 1) // 2

    def tie_pairs(sorted_keys):
        _, counts = np.unique(sorted_keys, return_counts=True, axis=0)
        return int((counts * (counts - 1) // 2).sum())

    order = np.lexsort((b, a))
    a_s, b_s = a[order], b[order]
    ties_a = tie_pairs(a_s)
    ties_b = tie_pairs(np.sort(b))
    ties_ab = tie_pairs(np.column_stack((a_s, b_s)))
    if ties_a == n0 or ties_b == n0:
        raise ValueError("tau is undefined when one input is entirely tied")

    discordant = _merge_count(b_s)
    concordant = n0 - ties_a - ties_b + ties_ab - discordant
    return float((concordant - discordant) / np.sqrt((n0 - ties_a) * (n0 - ties_b)))


def recovery_fraction(scores, core_nodes, core_size: int) -> float:
    """Fraction of nodes whose binary core/periphery label matches the truth.

    The ``core_size`` top-scored nodes (ties broken by ascending index)
    are labeled core; every node then either matches or misses the
    ground-truth assignment.
    """
    x = np.asarray(scores, dtype=np.float64).ravel()
    n = x.size
    if not 0 <= core_size <= n:
        raise ValueError("core_size must lie in [0, n]")
    truth = np.zeros(n, dtype=bool)
    truth[np.asarray(list(core_nodes), dtype=np.int64)] = True

    order = np.lexsort((np.arange(n), -x))
    predicted = np.zeros(n, dtype=bool)
    predicted[order[:core_size]] = True
    return float(np.mean(predicted == truth))
