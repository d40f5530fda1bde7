"""Undirected weighted graphs with sparse adjacency, plus loaders.

The :class:`Graph` type stores each undirected edge once, as a triple
``(i, j, w)`` with ``i < j`` and ``w > 0``, together with the original
node labels.  A symmetric CSR adjacency matrix is derived lazily and
cached, so neighbor sweeps over all nodes cost O(m + n).
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.io import mminfo, mmread
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Graph",
    "GraphFormatError",
    "NotConnectedError",
    "load_edge_list",
    "load_matrix_market",
    "write_edge_list",
    "largest_component",
    "degree_vector",
    "is_connected",
]


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed into a valid graph."""


class NotConnectedError(ValueError):
    """Raised when an operation that requires a connected graph gets one that is not."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph with positive edge weights.

    Attributes
    ----------
    node_count : int
        Number of nodes; internal indices are ``0 .. node_count - 1``.
    edge_index : ndarray of shape (m, 2)
        Edge endpoints with ``edge_index[e, 0] < edge_index[e, 1]``,
        sorted lexicographically.
    edge_weight : ndarray of shape (m,)
        Strictly positive weights, aligned with ``edge_index``.
    labels : tuple of str
        External identifier of each internal index.
    """

    node_count: int
    edge_index: np.ndarray
    edge_weight: np.ndarray
    labels: tuple[str, ...] = field(repr=False)

    @classmethod
    def from_edges(cls, node_count, u, v, w=None, labels=None):
        """Build a canonical graph from parallel endpoint/weight arrays.

        Endpoints are reordered so ``i < j``, duplicate pairs have their
        weights summed, and the edge list is sorted.  Self-loops and
        nonpositive weights are rejected; callers that need to drop them
        (the file loaders) do so before calling.
        """
        n = int(node_count)
        if n <= 0:
            raise ValueError("graph must have at least one node")
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays must have equal length")
        if w is None:
            w = np.ones(u.shape[0], dtype=np.float64)
        w = np.asarray(w, dtype=np.float64).ravel()
        if w.shape != u.shape:
            raise ValueError("weight array must match endpoint arrays")
        if u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            if np.any(w <= 0):
                raise ValueError("edge weights must be strictly positive")

        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        # Collapse duplicates by summing; key pairs via a single int64.
        key = lo * n + hi
        order = np.argsort(key, kind="stable")
        key = key[order]
        uniq, start = np.unique(key, return_index=True)
        weight = np.add.reduceat(w[order], start) if key.size else np.empty(0)
        edge_index = np.column_stack((uniq // n, uniq % n)).astype(np.int64)
        edge_weight = np.asarray(weight, dtype=np.float64)

        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per node")
            if len(set(labels)) != n:
                raise ValueError("labels must be distinct")

        edge_index.setflags(write=False)
        edge_weight.setflags(write=False)
        return cls(n, edge_index, edge_weight, labels)

    @property
    def n(self):
        return self.node_count

    @property
    def m(self):
        """Number of undirected edges."""
        return self.edge_index.shape[0]

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric CSR adjacency matrix (both arc orientations stored)."""
        i = self.edge_index[:, 0]
        j = self.edge_index[:, 1]
        w = self.edge_weight
        a = sp.coo_matrix(
            (np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))),
            shape=(self.node_count, self.node_count),
        ).tocsr()
        a.sort_indices()
        return a

    @cached_property
    def _arc_source(self) -> np.ndarray:
        """Source node of every stored arc, aligned with ``adjacency.indices``."""
        a = self.adjacency
        return np.repeat(np.arange(self.node_count), np.diff(a.indptr))

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degree of each node, d_i = sum_j a_ij."""
        d = np.bincount(
            self.edge_index.ravel(),
            weights=np.repeat(self.edge_weight, 2),
            minlength=self.node_count,
        )
        d.setflags(write=False)
        return d

    def index_of(self, label):
        """Internal index of an external label."""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node label: {label!r}") from None

    @cached_property
    def _label_index(self):
        return {lab: i for i, lab in enumerate(self.labels)}


def _as_lines(source):
    """Yield (line_number, text) from a path, string content, or file object."""
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        with open(source, "r", encoding="utf-8") as fh:
            yield from enumerate(fh.read().splitlines(), start=1)
    elif isinstance(source, str):
        yield from enumerate(source.splitlines(), start=1)
    else:
        yield from enumerate(source.read().splitlines(), start=1)


def load_edge_list(source) -> Graph:
    """Parse a whitespace-separated edge list into a :class:`Graph`.

    Each non-comment line is ``u v`` or ``u v w``; ``u`` and ``v`` are
    arbitrary identifiers mapped to contiguous indices in order of first
    appearance, and ``w`` defaults to 1.  Comment lines start with ``#``
    or ``%``.  Duplicate pairs have their weights summed; self-loops and
    zero-weight edges are dropped with a counted warning.

    Parameters
    ----------
    source : path, str, or file-like
        File path, raw text content, or an open text stream.

    Raises
    ------
    GraphFormatError
        On malformed lines (reported with the line number), negative
        weights, or an input that yields no nodes at all.
    """
    index: dict[str, int] = {}
    us, vs, ws = [], [], []
    self_loops = 0
    zero_weight = 0

    for lineno, raw in _as_lines(source):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(
                f"line {lineno}: expected 'u v' or 'u v w', got {raw!r}"
            )
        a, b = parts[0], parts[1]
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: weight {parts[2]!r} is not a number"
                ) from None
            if not np.isfinite(w):
                raise GraphFormatError(f"line {lineno}: weight must be finite")
            if w < 0:
                raise GraphFormatError(f"line {lineno}: negative weight {w}")
        else:
            w = 1.0
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        if ia == ib:
            self_loops += 1
            continue
        if w == 0.0:
            zero_weight += 1
            continue
        us.append(ia)
        vs.append(ib)
        ws.append(w)

    if not index:
        raise GraphFormatError("input contains no nodes")
    if self_loops:
        warnings.warn(f"dropped {self_loops} self-loop line(s)", stacklevel=2)
    if zero_weight:
        warnings.warn(f"dropped {zero_weight} zero-weight edge(s)", stacklevel=2)

    labels = [None] * len(index)
    for lab, i in index.items():
        labels[i] = lab
    return Graph.from_edges(len(index), us, vs, ws, labels)


def load_matrix_market(source) -> Graph:
    """Load a Matrix Market coordinate file as an undirected graph.

    Accepts ``pattern``, ``real``, or ``integer`` fields with
    ``symmetric`` or ``general`` symmetry.  A general matrix must be
    numerically symmetric (max |A - A^T| <= 1e-12 * max |A|), otherwise
    an error is raised.  Diagonal entries are dropped with a counted
    warning; pattern entries get weight 1.  Node labels are the 1-based
    row/column indices.
    """
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        data = source.encode("utf-8")
    else:
        raw = source.read()
        data = raw.encode("utf-8") if isinstance(raw, str) else raw

    try:
        rows, cols, _entries, fmt, fld, _sym = mminfo(io.BytesIO(data))
    except ValueError as exc:
        raise GraphFormatError(f"not a valid Matrix Market file: {exc}") from None
    if fmt != "coordinate":
        raise GraphFormatError(f"unsupported Matrix Market format: {fmt!r}")
    if fld not in ("pattern", "real", "integer"):
        raise GraphFormatError(f"unsupported Matrix Market field: {fld!r}")
    if rows != cols:
        raise GraphFormatError(f"matrix is not square: {rows}x{cols}")

    a = sp.coo_matrix(mmread(io.BytesIO(data)), dtype=np.float64)

    asym = abs(a - a.T)
    scale = np.abs(a.data).max() if a.nnz else 0.0
    if asym.nnz and asym.max() > 1e-12 * scale:
        raise GraphFormatError("general matrix is not numerically symmetric")

    a = a.tocoo()
    diag = int(np.count_nonzero(a.row == a.col))
    if diag:
        warnings.warn(f"dropped {diag} diagonal entr(y/ies)", stacklevel=2)
    lower = a.row > a.col
    labels = [str(i + 1) for i in range(rows)]
    return Graph.from_edges(rows, a.row[lower], a.col[lower], a.data[lower], labels)


def write_edge_list(graph: Graph, target) -> None:
    """Serialize a graph in the edge-list format read by :func:`load_edge_list`."""
    lines = [
        f"{graph.labels[i]} {graph.labels[j]} {w:.17g}"
        for (i, j), w in zip(graph.edge_index, graph.edge_weight)
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def degree_vector(graph: Graph) -> np.ndarray:
    """Weighted degrees d_i = sum_j a_ij."""
    return graph.degrees


def is_connected(graph: Graph) -> bool:
    """True iff the graph has a single connected component."""
    if graph.node_count == 1:
        return True
    ncomp, _ = connected_components(graph.adjacency, directed=False)
    return ncomp == 1


def largest_component(graph: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest connected component.

    Ties between equal-sized components go to the one containing the
    smallest internal index.  Returns the subgraph and an old-to-new
    index map (-1 for dropped nodes).
    """
    ncomp, comp = connected_components(graph.adjacency, directed=False)
    mapping = np.arange(graph.node_count, dtype=np.int64)
    if ncomp == 1:
        return graph, mapping

    sizes = np.bincount(comp, minlength=ncomp)
    best = np.flatnonzero(sizes == sizes.max()).min()
    # argmin over comp gives the first node of each component, so the
    # tied component containing the smallest index wins automatically.
    for c in np.flatnonzero(sizes == sizes.max()):
        if np.flatnonzero(comp == c)[0] < np.flatnonzero(comp == best)[0]:
            best = c

    keep = np.flatnonzero(comp == best)
    mapping = np.full(graph.node_count, -1, dtype=np.int64)
    mapping[keep] = np.arange(keep.size)

    i = graph.edge_index[:, 0]
    j = graph.edge_index[:, 1]
    sel = (mapping[i] >= 0) & (mapping[j] >= 0)
    sub = Graph.from_edges(
        keep.size,
        mapping[i[sel]],
        mapping[j[sel]],
        graph.edge_weight[sel],
        [graph.labels[k] for k in keep],
    )
    return sub, mapping
