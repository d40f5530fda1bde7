"""Shared graph factories and independent brute-force oracles."""

from __future__ import annotations

import numpy as np
import pytest

from cpdetect import Graph, is_connected


def complete_graph(n: int, weight: float = 1.0) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    return Graph.from_edges(n, iu, ju, np.full(iu.size, weight))


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=int), np.arange(1, leaves + 1))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))


def random_connected_graph(rng, n, p, weighted=False) -> Graph:
    """Rejection-sample an Erdos-Renyi graph until connected."""
    iu, ju = np.triu_indices(n, k=1)
    while True:
        keep = rng.random(iu.size) < p
        w = rng.uniform(0.2, 3.0, keep.sum()) if weighted else None
        g = Graph.from_edges(n, iu[keep], ju[keep], w)
        if g.m and is_connected(g):
            return g


def dense_adjacency(graph: Graph) -> np.ndarray:
    a = np.zeros((graph.node_count, graph.node_count))
    for (i, j), w in zip(graph.edge_index, graph.edge_weight):
        a[i, j] += w
        a[j, i] += w
    return a


def brute_smooth_objective(graph: Graph, x, alpha) -> float:
    """Literal double loop over all ordered pairs."""
    a = dense_adjacency(graph)
    x = np.asarray(x, dtype=float)
    total = 0.0
    for i in range(graph.node_count):
        for j in range(graph.node_count):
            if a[i, j]:
                total += a[i, j] * (abs(x[i]) ** alpha + abs(x[j]) ** alpha) ** (1.0 / alpha)
    return total


def brute_max_objective(graph: Graph, x) -> float:
    a = dense_adjacency(graph)
    x = np.asarray(x, dtype=float)
    return float(
        sum(
            a[i, j] * max(x[i], x[j])
            for i in range(graph.node_count)
            for j in range(graph.node_count)
        )
    )


def peel_core_numbers(graph: Graph) -> np.ndarray:
    """k-core numbers by degree peeling (independent of the H-index route)."""
    n = graph.node_count
    adj = [set() for _ in range(n)]
    for i, j in graph.edge_index:
        adj[i].add(int(j))
        adj[j].add(int(i))
    deg = np.array([len(s) for s in adj])
    alive = np.ones(n, dtype=bool)
    core = np.zeros(n, dtype=np.int64)
    level = 0
    for _ in range(n):
        candidates = np.flatnonzero(alive)
        u = candidates[np.argmin(deg[candidates])]
        level = max(level, int(deg[u]))
        core[u] = level
        alive[u] = False
        for v in adj[u]:
            if alive[v]:
                deg[v] -= 1
    return core


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
