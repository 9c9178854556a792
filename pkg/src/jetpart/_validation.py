"""Input validation helpers for the estimator front end."""

from __future__ import annotations

import numpy as np

from ._arrays import I64
from .graph import Graph, preprocess


def edges_from_matrix(X):
    """Extract (u, v, w) triples and n from an adjacency-matrix-like X.

    Accepts scipy sparse matrices (anything with tocoo) and dense 2D
    arrays. Entries must be nonnegative; nonzero entries are edge
    weights and must round to a positive integer. The matrix need not be
    symmetric: directed entries are symmetrized downstream.
    """
    if hasattr(X, "tocoo"):
        coo = X.tocoo()
        if coo.shape[0] != coo.shape[1]:
            raise ValueError("adjacency matrix must be square")
        rows, cols, data = coo.row, coo.col, coo.data
        n = coo.shape[0]
    else:
        arr = np.asarray(X)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("adjacency matrix must be square")
        rows, cols = np.nonzero(arr)
        data = arr[rows, cols]
        n = arr.shape[0]
    if len(data) == 0:
        raise ValueError("adjacency matrix has no edges")
    if np.any(np.asarray(data) < 0):
        raise ValueError("edge weights must be nonnegative")
    weights = np.rint(np.asarray(data)).astype(I64)
    live = weights != 0
    if np.any(np.asarray(data)[live] <= 0.5):
        raise ValueError("nonzero edge weights must round to >= 1")
    return rows[live], cols[live], weights[live], n


def as_graph(X):
    """Coerce estimator input into (graph, mapping, n_original).

    X may be a Graph (used as-is, identity mapping), a scipy sparse
    matrix, or a dense square array. Matrix inputs run through the full
    preprocessing pipeline; the mapping records where each original
    vertex went (-1 for vertices outside the largest connected
    component).
    """
    if isinstance(X, Graph):
        return X, np.arange(X.n, dtype=I64), X.n
    rows, cols, weights, n = edges_from_matrix(X)
    edges = np.stack([rows.astype(I64), cols.astype(I64), weights], axis=1)
    graph, mapping = preprocess(edges, n)
    return graph, mapping, n


def check_partition(graph: Graph, parts, k: int) -> np.ndarray:
    """Validate a part assignment array against a graph."""
    parts = np.asarray(parts, dtype=I64)
    if len(parts) != graph.n:
        raise ValueError("partition length must equal vertex count")
    if len(parts) and (parts.min() < 0 or parts.max() >= k):
        raise ValueError("part id out of range")
    return parts
