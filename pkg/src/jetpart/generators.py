"""Synthetic graph generators used for testing and benchmarking."""

from __future__ import annotations

import numpy as np

from ._arrays import I64
from .graph import Graph, preprocess


def grid_graph(rows: int, cols: int) -> Graph:
    """4-neighbor lattice with unit weights."""
    idx = np.arange(rows * cols, dtype=I64).reshape(rows, cols)
    right = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1)
    down = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1)
    edges = np.concatenate([right, down])
    graph, _ = preprocess(edges, rows * cols)
    return graph


def cube_graph(nx: int, ny: int, nz: int) -> Graph:
    """6-neighbor cubic mesh with unit weights."""
    idx = np.arange(nx * ny * nz, dtype=I64).reshape(nx, ny, nz)
    pairs = []
    pairs.append(np.stack([idx[:-1].ravel(), idx[1:].ravel()], axis=1))
    pairs.append(np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1))
    pairs.append(np.stack([idx[:, :, :-1].ravel(), idx[:, :, 1:].ravel()], axis=1))
    graph, _ = preprocess(np.concatenate(pairs), nx * ny * nz)
    return graph


def rmat_graph(scale: int, edge_factor: int = 8, seed: int = 0,
               probs=(0.57, 0.19, 0.19, 0.05)) -> Graph:
    """Recursive-matrix random graph with a skewed degree distribution.

    Duplicate edges and self-loops are produced by the generator and
    removed by preprocessing, so the final graph is somewhat smaller
    than 2**scale vertices.
    """
    rng = np.random.default_rng([seed, scale, edge_factor])
    n = 1 << scale
    n_edges = n * edge_factor
    a, b, c, _ = probs
    u = np.zeros(n_edges, dtype=I64)
    v = np.zeros(n_edges, dtype=I64)
    for _ in range(scale):
        draw = rng.random(n_edges)
        # quadrants [0,a) (a,a+b) (a+b,a+b+c) (a+b+c,1) -> bits 00 01 10 11
        down = draw >= a + b
        right = ((draw >= a) & (draw < a + b)) | (draw >= a + b + c)
        u = (u << 1) | down
        v = (v << 1) | right
    edges = np.stack([u, v], axis=1)
    graph, _ = preprocess(edges, n)
    return graph


def geometric_graph(n: int, radius: float, seed: int = 0) -> Graph:
    """Random geometric graph on the unit square.

    Points are bucketed into a cell grid of side `radius`, so only
    neighboring cells are compared.
    """
    rng = np.random.default_rng([seed, n])
    pts = rng.random((n, 2))
    cells = max(1, int(1.0 / radius))
    cell = np.minimum((pts * cells).astype(I64), cells - 1)
    cell_id = cell[:, 0] * cells + cell[:, 1]
    order = np.argsort(cell_id, kind="stable")
    sorted_ids = cell_id[order]
    starts = np.searchsorted(sorted_ids, np.arange(cells * cells, dtype=I64))
    starts = np.append(starts, n)

    r2 = radius * radius
    chunks = []
    for cx in range(cells):
        for cy in range(cells):
            mine = order[starts[cx * cells + cy]: starts[cx * cells + cy + 1]]
            if len(mine) == 0:
                continue
            others = [mine]
            for dx, dy in ((0, 1), (1, -1), (1, 0), (1, 1)):
                ox, oy = cx + dx, cy + dy
                if 0 <= ox < cells and 0 <= oy < cells:
                    others.append(order[starts[ox * cells + oy]: starts[ox * cells + oy + 1]])
            cand = np.concatenate(others)
            diff = pts[mine, None, :] - pts[None, cand, :]
            close = (diff * diff).sum(axis=2) <= r2
            ii, jj = np.nonzero(close)
            a, b = mine[ii], cand[jj]
            # duplicates from the self block are merged by preprocessing
            keep = a != b
            if keep.any():
                chunks.append(np.stack([a[keep], b[keep]], axis=1))
    if not chunks:
        raise ValueError("radius too small: no edges generated")
    graph, _ = preprocess(np.concatenate(chunks), n)
    return graph


def gnp_graph(n: int, p: float, seed: int = 0, max_weight: int = 1,
              max_vertex_weight: int = 1) -> Graph:
    """Erdos-Renyi random graph, optionally with random integer weights.

    Returns the preprocessed largest connected component, so the result
    may have fewer than n vertices.
    """
    rng = np.random.default_rng([seed, n])
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(len(iu)) < p
    iu, ju = iu[mask], ju[mask]
    if len(iu) == 0:
        raise ValueError("p too small: no edges generated")
    w = rng.integers(1, max_weight + 1, size=len(iu))
    vw = rng.integers(1, max_vertex_weight + 1, size=n)
    graph, _ = preprocess(np.stack([iu, ju, w], axis=1), n, vw)
    return graph
