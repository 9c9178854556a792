"""Initial partitioning of the coarsest graph by greedy graph growing."""

from __future__ import annotations

import numpy as np

from ._arrays import I64, segment_indices
from .graph import Graph, PartitionState, is_balanced


def _bfs_hops(graph: Graph, source: int) -> np.ndarray:
    dist = np.full(graph.n, -1, dtype=I64)
    dist[source] = 0
    frontier = np.array([source], dtype=I64)
    hops = 0
    while len(frontier):
        hops += 1
        idx, _ = segment_indices(
            graph.row_offsets[:-1][frontier], graph.degrees[frontier]
        )
        nxt = np.unique(graph.adjacency[idx])
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = hops
        frontier = nxt
    # unreachable vertices count as infinitely far
    dist[dist < 0] = graph.n + 1
    return dist


def _grow_single(graph: Graph, k: int, rng) -> np.ndarray:
    """One greedy growth: farthest-first seeds, then repeatedly give the
    lightest eligible part its best-connected unassigned vertex."""
    n = graph.n
    seeds = [int(rng.integers(n))]
    min_dist = _bfs_hops(graph, seeds[0])
    for _ in range(k - 1):
        nxt = int(np.argmax(min_dist))
        seeds.append(nxt)
        min_dist = np.minimum(min_dist, _bfs_hops(graph, nxt))

    parts = np.full(n, -1, dtype=I64)
    weights = np.zeros(k, dtype=I64)
    conn = np.zeros((k, n), dtype=I64)
    unassigned = np.ones(n, dtype=bool)

    def assign(v: int, p: int) -> None:
        parts[v] = p
        weights[p] += graph.vertex_weights[v]
        unassigned[v] = False
        nbrs, w = graph.neighbors(v)
        conn[p, nbrs] += w

    for p, s in enumerate(seeds):
        assign(s, p)

    while unassigned.any():
        frontier = conn[:, unassigned].any(axis=1)
        if frontier.any():
            p = int(np.argmin(np.where(frontier, weights, np.iinfo(I64).max)))
            cand = np.where(unassigned, conn[p], -1)
            v = int(np.argmax(cand))
        else:
            # disconnected remainder: seed the lightest part afresh
            p = int(np.argmin(weights))
            v = int(np.flatnonzero(unassigned)[0])
        assign(v, p)
    return parts


def initial_partition(graph: Graph, k: int, imbalance: float, seed: int = 0,
                      restarts: int = 8) -> PartitionState:
    """Partition a small graph into k parts by multi-restart greedy growing.

    Each restart draws an independent first seed; the remaining seeds
    are placed farthest-first by BFS hops. The best result wins, judged
    by balance first and cutsize second. The output is not guaranteed to
    be balanced; refinement at the coarsest level repairs it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > graph.n:
        raise ValueError(f"k={k} exceeds vertex count {graph.n}")
    if k == 1:
        return PartitionState.from_parts(graph, np.zeros(graph.n, dtype=I64), 1)

    best = None
    best_key = None
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        state = PartitionState.from_parts(graph, _grow_single(graph, k, rng), k)
        key = (not is_balanced(state, imbalance), state.cutsize)
        if best_key is None or key < best_key:
            best, best_key = state, key
    return best
