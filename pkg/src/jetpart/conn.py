"""Vertex-to-part connectivity tracking.

For every vertex v and part p, the table stores conn(v, p): the total
weight of edges from v into p. Rows live inside flat global arrays, one
hash table per vertex keyed on part id with open addressing. A row's
storage region is sized for its worst case, min(k, degree) plus a small
slack, while its active capacity starts just above the number of parts
it actually touches and doubles (up to the region size) whenever an
insertion fails. Entries that decay to zero stay in place and are purged
on the next rebuild of their row.

All batch operations are vectorized over numpy arrays; a batch of probe
rounds replaces per-entry loops.
"""

from __future__ import annotations

import numpy as np

from ._arrays import I64, exclusive_prefix_sum, group_sums, segment_indices
from .graph import Graph, PartitionState


def _slack(count):
    """Extra hash slots per row: at least 2, about 12.5% of the count."""
    return np.maximum(2, (np.asarray(count) + 7) // 8)


class ConnectivityTable:
    """Tracks conn(v, p) for one graph/partition pair, plus vertex locks.

    The table holds references to the graph and the partition state it
    mirrors; `apply` is the only supported way to change the partition
    while keeping the table synchronized.
    """

    def __init__(self, graph: Graph, state: PartitionState):
        self.graph = graph
        self.state = state
        self.k = state.k
        n = graph.n
        bound = np.minimum(graph.degrees.astype(I64), self.k)
        self.max_cap = bound + _slack(bound)
        self.region = exclusive_prefix_sum(self.max_cap)
        size = int(self.region[-1])
        self.keys = np.full(size, -1, dtype=I64)
        self.vals = np.zeros(size, dtype=I64)
        self.locks = np.zeros(n, dtype=bool)
        self.slot_row = np.repeat(np.arange(n, dtype=I64), self.max_cap)

        rows, parts, sums = self._recount(np.arange(n, dtype=I64))
        nnz = np.bincount(rows, minlength=n).astype(I64)
        self.cap = np.minimum(nnz + _slack(nnz), self.max_cap)
        self._apply_deltas(rows, parts, sums)

    # -- sizing ------------------------------------------------------------

    @property
    def allocated_slots(self) -> int:
        """Total key plus value slots backing the table."""
        return 2 * len(self.keys)

    @property
    def slack_slots(self) -> int:
        """Declared per-row slack, summed over rows (keys and values)."""
        return 2 * int(_slack(np.minimum(self.graph.degrees, self.k)).sum())

    # -- queries -----------------------------------------------------------

    def get_many(self, rows, parts) -> np.ndarray:
        """conn(rows[i], parts[i]) for each i; absent entries read as 0."""
        rows = np.asarray(rows, dtype=I64)
        parts = np.asarray(parts, dtype=I64)
        out = np.zeros(len(rows), dtype=I64)
        alive = np.arange(len(rows), dtype=I64)
        dist = np.zeros(len(rows), dtype=I64)
        while len(alive):
            cap = self.cap[rows]
            open_ = dist < cap
            rows, parts, dist, alive = (
                rows[open_], parts[open_], dist[open_], alive[open_],
            )
            if not len(alive):
                break
            slot = self.region[rows] + (parts + dist) % self.cap[rows]
            stored = self.keys[slot]
            hit = stored == parts
            out[alive[hit]] = self.vals[slot[hit]]
            settled = hit | (stored == -1)
            keep = ~settled
            rows, parts, alive = rows[keep], parts[keep], alive[keep]
            dist = dist[keep] + 1
        return out

    def conn(self, v: int, p: int) -> int:
        return int(self.get_many(np.array([v]), np.array([p]))[0])

    def row_items(self, v: int) -> dict:
        """Nonzero {part: weight} entries of vertex v's row."""
        lo = int(self.region[v])
        hi = lo + int(self.cap[v])
        ks = self.keys[lo:hi]
        vs = self.vals[lo:hi]
        return {int(p): int(w) for p, w in zip(ks, vs) if p >= 0 and w > 0}

    def row_capacity(self, v: int) -> int:
        return int(self.cap[v])

    def nonzero_triples(self):
        """All nonzero (row, part, weight) entries in canonical order."""
        mask = (self.keys >= 0) & (self.vals > 0)
        rows = self.slot_row[mask]
        parts = self.keys[mask]
        weights = self.vals[mask]
        order = np.lexsort((parts, rows))
        return rows[order], parts[order], weights[order]

    def same_contents(self, other: "ConnectivityTable") -> bool:
        a = self.nonzero_triples()
        b = other.nonzero_triples()
        return all(np.array_equal(x, y) for x, y in zip(a, b))

    # -- locks -------------------------------------------------------------

    def reset_locks(self) -> None:
        self.locks[:] = False

    def set_locks(self, vertices) -> None:
        self.locks[vertices] = True

    # -- updates -----------------------------------------------------------

    def _recount(self, vertices):
        """Aggregate (row, part, weight) triples for the given rows from
        the graph and the current partition."""
        g = self.graph
        idx, seg = segment_indices(g.row_offsets[:-1][vertices], g.degrees[vertices])
        nbr_parts = self.state.parts[g.adjacency[idx]]
        code = vertices[seg] * self.k + nbr_parts
        codes, sums = group_sums(code, g.edge_weights[idx])
        return codes // self.k, codes % self.k, sums

    def rebuild_row(self, v: int) -> None:
        """Recompute row v from scratch at doubled (clamped) capacity."""
        rows, parts, sums = self._recount(np.array([v], dtype=I64))
        new_cap = min(
            int(self.max_cap[v]),
            max(2 * int(self.cap[v]), len(parts) + int(_slack(len(parts)))),
        )
        lo = int(self.region[v])
        hi = lo + int(self.max_cap[v])
        self.keys[lo:hi] = -1
        self.vals[lo:hi] = 0
        self.cap[v] = new_cap
        for p, s in zip(parts.tolist(), sums.tolist()):
            dist = 0
            while True:
                slot = lo + (p + dist) % new_cap
                if self.keys[slot] < 0:
                    self.keys[slot] = p
                    self.vals[slot] = s
                    break
                dist += 1

    def _apply_deltas(self, rows, parts, deltas) -> None:
        """Add deltas to conn(rows[i], parts[i]), inserting keys as needed.

        (row, part) duplicates within the batch are combined first, so
        per-slot updates commute. Rows whose hash table fills up are
        rebuilt from the current partition state, which already reflects
        every move of the enclosing batch; their remaining pending
        deltas are therefore dropped, not replayed.
        """
        code = rows * self.k + parts
        codes, sums = group_sums(code, deltas)
        live = sums != 0
        rows = codes[live] // self.k
        parts = codes[live] % self.k
        deltas = sums[live]
        dist = np.zeros(len(rows), dtype=I64)
        while len(rows):
            cap = self.cap[rows]
            overflow = dist >= cap
            if overflow.any():
                for r in np.unique(rows[overflow]).tolist():
                    self.rebuild_row(int(r))
                keep = ~np.isin(rows, rows[overflow])
                rows, parts, deltas, dist = (
                    rows[keep], parts[keep], deltas[keep], dist[keep],
                )
                if not len(rows):
                    break
                cap = self.cap[rows]
            slot = self.region[rows] + (parts + dist) % cap
            stored = self.keys[slot]
            hit = stored == parts
            if hit.any():
                self.vals[slot[hit]] += deltas[hit]
            inserted = np.zeros(len(rows), dtype=bool)
            empty = (stored == -1) & ~hit
            if empty.any():
                slots_e = slot[empty]
                _, first = np.unique(slots_e, return_index=True)
                winners = np.flatnonzero(empty)[first]
                # a negative delta on an absent key would drive the
                # tracked weight below zero
                assert np.all(deltas[winners] > 0)
                self.keys[slot[winners]] = parts[winners]
                self.vals[slot[winners]] = deltas[winners]
                inserted[winners] = True
            keep = ~(hit | inserted)
            rows, parts, deltas = rows[keep], parts[keep], deltas[keep]
            dist = dist[keep] + 1

    def apply(self, moves) -> None:
        """Apply a move list: update parts, part weights, cutsize, and
        every neighbor's connectivity row, all by exact deltas."""
        if len(moves) == 0:
            return
        g = self.graph
        state = self.state
        verts = moves.vertices
        dests = moves.dests
        old = state.parts[verts].copy()
        assert np.all(old != dests), "move to current part"

        vw = g.vertex_weights[verts]
        np.add.at(state.part_weights, dests, vw)
        np.subtract.at(state.part_weights, old, vw)

        idx, seg = segment_indices(g.row_offsets[:-1][verts], g.degrees[verts])
        nbr = g.adjacency[idx]
        w = g.edge_weights[idx]
        old_rep = old[seg]
        new_rep = dests[seg]

        before_nbr = state.parts[nbr]
        moved = np.zeros(g.n, dtype=bool)
        moved[verts] = True
        state.parts[verts] = dests
        after_nbr = state.parts[nbr]
        contrib = w * (
            (after_nbr != new_rep).astype(I64) - (before_nbr != old_rep).astype(I64)
        )
        both = moved[nbr]
        twice = int(contrib[both].sum())
        assert twice % 2 == 0
        state.cutsize += int(contrib[~both].sum()) + twice // 2

        self._apply_deltas(
            np.concatenate([nbr, nbr]),
            np.concatenate([old_rep, new_rep]),
            np.concatenate([-w, w]),
        )

    def check(self) -> None:
        """Verify every stored row against a brute-force recount."""
        fresh = ConnectivityTable(self.graph, self.state)
        if not self.same_contents(fresh):
            raise ValueError("connectivity table out of sync")
        if np.any(self.cap > self.max_cap):
            raise ValueError("row capacity exceeds its bound")


def build_conn(graph: Graph, state: PartitionState) -> ConnectivityTable:
    """Construct the connectivity table for a partition (locks cleared)."""
    return ConnectivityTable(graph, state)


def update_conn(table: ConnectivityTable, moves) -> None:
    """Apply a move list to the table and its bound partition state."""
    table.apply(moves)
