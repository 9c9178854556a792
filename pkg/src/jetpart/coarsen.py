"""Hierarchy construction: heavy-edge matching with two-hop augmentation,
graph contraction, and the coarsening loop."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._arrays import I64, group_sums, segment_indices, segment_max
from .graph import Graph, from_edge_arrays

# coarsening stops after this many levels regardless of progress
MAX_LEVELS = 64
# reduction ratios above this for two consecutive levels count as stagnation
STAGNATION_RATIO = 0.95


@dataclass
class Hierarchy:
    """Sequence of coarse graphs plus fine-to-coarse vertex maps.

    levels[0] is the finest graph; maps[i] sends each vertex of
    levels[i] to its coarse vertex in levels[i+1].
    """

    levels: list = field(default_factory=list)
    maps: list = field(default_factory=list)

    def __len__(self):
        return len(self.levels)

    def validate(self) -> None:
        total = self.levels[0].total_vertex_weight
        for i, vmap in enumerate(self.maps):
            fine, coarse = self.levels[i], self.levels[i + 1]
            if len(vmap) != fine.n:
                raise ValueError("map length mismatch")
            if coarse.n >= fine.n:
                raise ValueError("coarse level must be strictly smaller")
            if len(np.unique(vmap)) != coarse.n:
                raise ValueError("map must be surjective onto coarse vertices")
            if coarse.total_vertex_weight != total:
                raise ValueError("vertex weight not conserved")


def match_vertices(graph: Graph, seed: int = 0) -> np.ndarray:
    """Compute a matching: array mapping each vertex to its partner (or itself).

    Phase 1 repeatedly lets every unmatched vertex propose to its
    heaviest-edge unmatched neighbor (ties broken toward the lowest
    neighbor id) and resolves the proposal snapshot in ascending vertex
    order, until no unmatched vertex has an unmatched neighbor. Phase 2
    pairs leftover vertices that share a common neighbor, lowest ids
    first. The result is deterministic; `seed` is accepted for interface
    stability but unused.
    """
    del seed
    n = graph.n
    partner = np.full(n, -1, dtype=I64)
    adj = graph.adjacency
    weights = graph.edge_weights
    rows = graph.entry_rows
    enc = n + 1

    while len(adj):
        free = partner < 0
        live = free[rows] & free[adj]
        if not live.any():
            break
        score = np.where(live, weights * enc + (n - adj), -1)
        best = segment_max(score, graph.row_offsets)
        proposal = np.where(best >= 0, n - best % enc, -1)
        progress = False
        for v in np.flatnonzero(proposal >= 0).tolist():
            u = int(proposal[v])
            if partner[v] < 0 and partner[u] < 0:
                partner[v] = u
                partner[u] = v
                progress = True
        if not progress:  # pragma: no cover - progress is guaranteed
            break

    # two-hop phase: group leftovers under each shared neighbor and pair
    # consecutively within the group
    leftovers = np.flatnonzero(partner < 0)
    if len(leftovers):
        starts = graph.row_offsets[:-1][leftovers]
        idx, seg = segment_indices(starts, graph.degrees[leftovers])
        centers = adj[idx]
        verts = leftovers[seg]
        order = np.lexsort((verts, centers))
        pending = -1
        pending_center = -1
        for c, v in zip(centers[order].tolist(), verts[order].tolist()):
            if partner[v] >= 0:
                continue
            if c != pending_center or pending < 0 or partner[pending] >= 0:
                pending_center, pending = c, v
                continue
            partner[pending] = v
            partner[v] = pending
            pending = -1

    singles = partner < 0
    partner[singles] = np.flatnonzero(singles)
    return partner


def contract(graph: Graph, matching: np.ndarray):
    """Merge matched pairs into coarse vertices.

    Coarse ids are assigned in ascending order of each pair's lowest
    member, so the output ordering is stable. Parallel edges are summed;
    self-loops produced by contraction are dropped.

    Returns (coarse_graph, fine_to_coarse_map).
    """
    n = graph.n
    partner = np.asarray(matching, dtype=I64)
    rep = np.minimum(np.arange(n, dtype=I64), partner)
    is_rep = rep == np.arange(n)
    n_coarse = int(is_rep.sum())
    coarse_id = np.full(n, -1, dtype=I64)
    coarse_id[is_rep] = np.arange(n_coarse, dtype=I64)
    vmap = coarse_id[rep]

    coarse_vw = np.bincount(
        vmap, weights=graph.vertex_weights, minlength=n_coarse
    ).astype(I64)
    cu = vmap[graph.entry_rows]
    cv = vmap[graph.adjacency]
    keep = cu != cv
    codes, sums = group_sums(
        cu[keep] * n_coarse + cv[keep], graph.edge_weights[keep]
    )
    coarse = from_edge_arrays(n_coarse, codes // n_coarse, codes % n_coarse, sums, coarse_vw)
    return coarse, vmap


def build_hierarchy(graph: Graph, target: int, seed: int = 0) -> Hierarchy:
    """Coarsen until at most `target` vertices remain.

    Stops early on stagnation (reduction ratio above STAGNATION_RATIO on
    two consecutive levels, or a level producing no merges at all) or at
    MAX_LEVELS.
    """
    hierarchy = Hierarchy([graph], [])
    stagnant = 0
    while hierarchy.levels[-1].n > target and len(hierarchy.levels) < MAX_LEVELS:
        fine = hierarchy.levels[-1]
        matching = match_vertices(fine, seed=seed)
        coarse, vmap = contract(fine, matching)
        if coarse.n == fine.n:
            break
        hierarchy.levels.append(coarse)
        hierarchy.maps.append(vmap)
        stagnant = stagnant + 1 if coarse.n > STAGNATION_RATIO * fine.n else 0
        if stagnant >= 2:
            break
    return hierarchy
