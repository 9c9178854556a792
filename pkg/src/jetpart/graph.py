"""CSR graph container, edge-list preprocessing, and partition metrics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._arrays import I64, exclusive_prefix_sum
from .errors import PreprocessError


@dataclass(eq=False)
class Graph:
    """Undirected weighted graph in compressed sparse row form.

    Every undirected edge is stored as two directed entries of equal
    weight. Invariants: no self-loops, no duplicate neighbor within a
    row, all weights >= 1, symmetric adjacency.

    Attributes:
        row_offsets: length n+1 offsets into the adjacency arrays.
        adjacency: neighbor vertex ids, grouped per vertex.
        edge_weights: positive integer weight per adjacency entry.
        vertex_weights: positive integer weight per vertex.
    """

    row_offsets: np.ndarray
    adjacency: np.ndarray
    edge_weights: np.ndarray
    vertex_weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.row_offsets) - 1

    @property
    def m(self) -> int:
        """Number of undirected edges."""
        return len(self.adjacency) // 2

    @cached_property
    def total_vertex_weight(self) -> int:
        return int(self.vertex_weights.sum())

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.row_offsets)

    @cached_property
    def entry_rows(self) -> np.ndarray:
        """Source vertex id of each adjacency entry."""
        return np.repeat(np.arange(self.n, dtype=I64), self.degrees)

    def neighbors(self, v):
        """Neighbor ids and edge weights of vertex v."""
        lo, hi = self.row_offsets[v], self.row_offsets[v + 1]
        return self.adjacency[lo:hi], self.edge_weights[lo:hi]

    def validate(self) -> None:
        """Check all structural invariants; raise ValueError on violation."""
        n = self.n
        if n < 1:
            raise ValueError("graph must have at least one vertex")
        off = self.row_offsets
        if off[0] != 0 or np.any(np.diff(off) < 0):
            raise ValueError("row_offsets must be non-decreasing from 0")
        if off[-1] != len(self.adjacency):
            raise ValueError("row_offsets[n] must equal adjacency length")
        if len(self.edge_weights) != len(self.adjacency):
            raise ValueError("edge_weights length mismatch")
        if len(self.vertex_weights) != n:
            raise ValueError("vertex_weights length mismatch")
        if len(self.adjacency) and (
            self.adjacency.min() < 0 or self.adjacency.max() >= n
        ):
            raise ValueError("neighbor id out of range")
        if np.any(self.vertex_weights < 1):
            raise ValueError("vertex weights must be >= 1")
        if len(self.edge_weights) and np.any(self.edge_weights < 1):
            raise ValueError("edge weights must be >= 1")
        rows = self.entry_rows
        if np.any(rows == self.adjacency):
            raise ValueError("self-loop present")
        # duplicate neighbors within a row
        code = rows * n + self.adjacency
        if len(np.unique(code)) != len(code):
            raise ValueError("duplicate neighbor within a row")
        # symmetry with equal weights: the transposed entry set must match
        order_f = np.argsort(code, kind="stable")
        code_t = self.adjacency * n + rows
        order_t = np.argsort(code_t, kind="stable")
        if not np.array_equal(code[order_f], code_t[order_t]) or not np.array_equal(
            self.edge_weights[order_f], self.edge_weights[order_t]
        ):
            raise ValueError("adjacency is not symmetric with equal weights")


def from_edge_arrays(n, u, v, w, vertex_weights=None) -> Graph:
    """Assemble a Graph from directed entry arrays already known to be
    clean (symmetric, deduplicated, no self-loops)."""
    u = np.asarray(u, dtype=I64)
    v = np.asarray(v, dtype=I64)
    w = np.asarray(w, dtype=I64)
    order = np.lexsort((v, u))
    u, v, w = u[order], v[order], w[order]
    offsets = exclusive_prefix_sum(np.bincount(u, minlength=n))
    if vertex_weights is None:
        vertex_weights = np.ones(n, dtype=I64)
    else:
        vertex_weights = np.asarray(vertex_weights, dtype=I64)
    return Graph(offsets, v, w, vertex_weights)


def _normalize_edges(edges):
    """Turn an edge multiset into (u, v, w) integer arrays."""
    arr = np.asarray(edges, dtype=I64)
    if arr.size == 0:
        return (np.zeros(0, dtype=I64),) * 3
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise ValueError("edges must be (u, v) pairs or (u, v, w) triples")
    u = arr[:, 0]
    v = arr[:, 1]
    w = arr[:, 2] if arr.shape[1] == 3 else np.ones(len(arr), dtype=I64)
    return u, v, w


def preprocess(edges, n, vertex_weights=None):
    """Clean a raw edge multiset into a valid Graph.

    Removes self-loops, symmetrizes directed edges, merges duplicate
    edges keeping the maximum weight, and retains only the largest
    connected component with vertices renumbered contiguously.

    Args:
        edges: iterable/array of (u, v) or (u, v, weight) with ids in [0, n).
        n: vertex count of the raw input.
        vertex_weights: optional per-vertex weights (default all 1).

    Returns:
        (graph, mapping) where mapping is a length-n array giving each
        original vertex its new id, or -1 if it was dropped.

    Raises:
        PreprocessError: ids out of range, nonpositive weights, or no
            edges survive cleaning.
    """
    if n < 1:
        raise PreprocessError("graph must have at least one vertex")
    u, v, w = _normalize_edges(edges)
    if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
        raise PreprocessError("vertex id out of range")
    if len(w) and w.min() < 1:
        raise PreprocessError("edge weights must be >= 1")
    if vertex_weights is not None:
        vertex_weights = np.asarray(vertex_weights, dtype=I64)
        if len(vertex_weights) != n:
            raise PreprocessError("vertex_weights length mismatch")
        if len(vertex_weights) and vertex_weights.min() < 1:
            raise PreprocessError("vertex weights must be >= 1")

    keep = u != v
    u, v, w = u[keep], v[keep], w[keep]
    if len(u) == 0:
        raise PreprocessError("no edges remain after cleaning")

    # symmetrize, then merge duplicates keeping the max weight
    du = np.concatenate([u, v])
    dv = np.concatenate([v, u])
    dw = np.concatenate([w, w])
    code = du * n + dv
    order = np.argsort(code, kind="stable")
    code, dw = code[order], dw[order]
    boundaries = np.flatnonzero(np.concatenate(([True], code[1:] != code[:-1])))
    code = code[boundaries]
    dw = np.maximum.reduceat(dw, boundaries)
    du, dv = code // n, code % n

    # largest connected component; ties keep the one holding the
    # smallest original vertex id
    adj = csr_matrix((dw, (du, dv)), shape=(n, n))
    n_comp, labels = connected_components(adj, directed=False)
    sizes = np.bincount(labels, minlength=n_comp)
    _, first_vertex = np.unique(labels, return_index=True)
    best = min(range(n_comp), key=lambda c: (-sizes[c], first_vertex[c]))
    kept = labels == best

    mapping = np.full(n, -1, dtype=I64)
    mapping[kept] = np.arange(int(kept.sum()), dtype=I64)
    emask = kept[du]
    du, dv, dw = mapping[du[emask]], mapping[dv[emask]], dw[emask]
    if len(du) == 0:
        raise PreprocessError("no edges remain after cleaning")
    vw = vertex_weights[kept] if vertex_weights is not None else None
    graph = from_edge_arrays(int(kept.sum()), du, dv, dw, vw)
    return graph, mapping


def part_weight_limit(total_weight: int, k: int, imbalance: float) -> int:
    """Maximum allowed part weight: floor((1 + imbalance) * W / k).

    Evaluated in exact rational arithmetic so the floored integer bound
    does not depend on binary rounding of the imbalance factor.
    """
    if imbalance < 0:
        raise ValueError("imbalance must be >= 0")
    factor = Fraction(1) + Fraction(str(imbalance))
    return int(factor * total_weight // k)


def cutsize(graph: Graph, parts) -> int:
    """Total weight of edges whose endpoints lie in different parts."""
    if isinstance(parts, PartitionState):
        parts = parts.parts
    parts = np.asarray(parts)
    cut2 = graph.edge_weights[parts[graph.entry_rows] != parts[graph.adjacency]].sum()
    return int(cut2) // 2


@dataclass(eq=False)
class PartitionState:
    """A k-way partition with cached part weights and cutsize."""

    parts: np.ndarray
    k: int
    part_weights: np.ndarray
    cutsize: int

    @classmethod
    def from_parts(cls, graph: Graph, parts, k: int) -> "PartitionState":
        parts = np.asarray(parts, dtype=I64)
        if len(parts) != graph.n:
            raise ValueError("partition length must equal vertex count")
        if len(parts) and (parts.min() < 0 or parts.max() >= k):
            raise ValueError("part id out of range")
        weights = np.bincount(
            parts, weights=graph.vertex_weights, minlength=k
        ).astype(I64)
        return cls(parts.copy(), k, weights, cutsize(graph, parts))

    def copy(self) -> "PartitionState":
        return PartitionState(
            self.parts.copy(), self.k, self.part_weights.copy(), self.cutsize
        )

    def check(self, graph: Graph) -> None:
        """Verify cached part weights and cutsize against recomputation."""
        fresh = PartitionState.from_parts(graph, self.parts, self.k)
        if not np.array_equal(fresh.part_weights, self.part_weights):
            raise ValueError("cached part weights are stale")
        if fresh.cutsize != self.cutsize:
            raise ValueError("cached cutsize is stale")
        if int(self.part_weights.sum()) != graph.total_vertex_weight:
            raise ValueError("part weights do not sum to total vertex weight")


def is_balanced(state: PartitionState, imbalance: float, total_weight=None) -> bool:
    """True iff every part weight is within the floored balance bound."""
    if total_weight is None:
        total_weight = int(state.part_weights.sum())
    limit = part_weight_limit(total_weight, state.k, imbalance)
    return bool(np.all(state.part_weights <= limit))


def imbalance_of(state: PartitionState, total_weight=None) -> float:
    """Maximum part weight divided by the ideal part weight W/k."""
    if total_weight is None:
        total_weight = int(state.part_weights.sum())
    return float(state.part_weights.max()) * state.k / total_weight
