"""Shared fixtures and independent oracles used across the test suite."""

import numpy as np
import pytest

from jetpart.graph import PartitionState, from_edge_arrays, preprocess

I64 = np.int64


# -- small named graphs ------------------------------------------------------

def graph_from_edges(edges, n, vertex_weights=None):
    """Build a Graph directly from undirected (u, v[, w]) tuples.

    Unlike preprocess, keeps all components; useful for hand-built
    fixtures with known ids.
    """
    triples = [(e[0], e[1], e[2] if len(e) == 3 else 1) for e in edges]
    u = np.array([t[0] for t in triples] + [t[1] for t in triples], dtype=I64)
    v = np.array([t[1] for t in triples] + [t[0] for t in triples], dtype=I64)
    w = np.array([t[2] for t in triples] * 2, dtype=I64)
    return from_edge_arrays(n, u, v, w, vertex_weights)


def path_graph(n, weights=None):
    return graph_from_edges([(i, i + 1) for i in range(n - 1)], n, weights)


def cycle_graph(n):
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], n)


def star_graph(leaves):
    return graph_from_edges([(0, i) for i in range(1, leaves + 1)], leaves + 1)


def triangle_graph():
    return graph_from_edges([(0, 1), (1, 2), (0, 2)], 3)


def random_graph(rng, n_lo=8, n_hi=60, p=None, max_weight=1, max_vertex_weight=1):
    """Random connected graph via preprocessing's largest component."""
    n = int(rng.integers(n_lo, n_hi + 1))
    if p is None:
        p = min(1.0, 3.0 / n)
    while True:
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(len(iu)) < p
        if not mask.any():
            continue
        w = rng.integers(1, max_weight + 1, size=int(mask.sum()))
        edges = np.stack([iu[mask], ju[mask], w], axis=1)
        vw = rng.integers(1, max_vertex_weight + 1, size=n)
        graph, _ = preprocess(edges, n, vw)
        if graph.n >= 4:
            return graph


def random_partition(rng, graph, k):
    parts = rng.integers(0, k, size=graph.n)
    return PartitionState.from_parts(graph, parts, k)


# -- independent oracles -----------------------------------------------------

def brute_cutsize(graph, parts):
    """Double loop over adjacency entries, halved at the end."""
    parts = np.asarray(parts)
    total = 0
    for v in range(graph.n):
        lo, hi = graph.row_offsets[v], graph.row_offsets[v + 1]
        for u, w in zip(graph.adjacency[lo:hi], graph.edge_weights[lo:hi]):
            if parts[v] != parts[u]:
                total += int(w)
    return total // 2


def brute_conn(graph, parts):
    """Per-vertex {part: weight} dictionaries by direct summation."""
    out = []
    for v in range(graph.n):
        row = {}
        lo, hi = graph.row_offsets[v], graph.row_offsets[v + 1]
        for u, w in zip(graph.adjacency[lo:hi], graph.edge_weights[lo:hi]):
            p = int(parts[u])
            row[p] = row.get(p, 0) + int(w)
        out.append(row)
    return out


def afterburner_oracle(graph, cand, parts, dests, gain):
    """Literal sequential evaluation of the priority-merged gains.

    Sorts the candidate set by (higher gain, lower id) and, for each
    candidate, treats earlier candidates as already moved.
    """
    cand = list(int(c) for c in cand)
    in_cand = set(cand)
    order_key = {v: (-int(gain[v]), v) for v in cand}
    out = {}
    for v in cand:
        f = 0
        lo, hi = graph.row_offsets[v], graph.row_offsets[v + 1]
        for u, w in zip(graph.adjacency[lo:hi].tolist(),
                        graph.edge_weights[lo:hi].tolist()):
            if u in in_cand and order_key[u] < order_key[v]:
                pu = int(dests[u])
            else:
                pu = int(parts[u])
            if pu == int(dests[v]):
                f += w
            elif pu == int(parts[v]):
                f -= w
        out[v] = f
    return np.array([out[v] for v in cand], dtype=I64)


def exhaustive_best_bisection(graph, imbalance):
    """Minimum balanced 2-way cut by enumerating all bisections."""
    from jetpart.graph import cutsize, part_weight_limit

    limit = part_weight_limit(graph.total_vertex_weight, 2, imbalance)
    best = None
    n = graph.n
    for bits in range(1 << (n - 1)):
        parts = np.zeros(n, dtype=I64)
        for i in range(n - 1):
            parts[i + 1] = (bits >> i) & 1
        weights = np.bincount(parts, weights=graph.vertex_weights.astype(float),
                              minlength=2)
        if weights.max() > limit:
            continue
        cut = cutsize(graph, parts)
        if best is None or cut < best:
            best = cut
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240819)
