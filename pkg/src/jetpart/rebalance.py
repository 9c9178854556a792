"""Rebalancing passes: evict low-loss vertices from oversized parts.

A part is oversized when its weight exceeds the balance limit B; a part
is a valid destination when its weight is below a threshold sigma < B,
leaving a deadzone [sigma, B] so destinations cannot themselves become
oversized by repeated passes. The weak pass sends each evicted vertex to
its best-connected valid destination and may need several iterations;
the strong pass overlays destinations onto the evicted list in a
cookie-cutter pattern, bounded by each destination's spare capacity, and
balances in one shot when vertex weights are unit.
"""

from __future__ import annotations

import numpy as np

from ._arrays import I64, exclusive_prefix_sum, segment_indices
from .conn import ConnectivityTable
from .errors import RebalanceInfeasibleError
from .moves import MoveList

# losses above 2**31 all land in the final slot
MAX_SLOT = 33


def rebalance_thresholds(total_weight, k, imbalance, limit, deadzone_fraction):
    """Valid-destination threshold sigma below the balance limit.

    The deadzone width is a fraction of the allowed slack, at least 1.
    """
    width = max(1, int(deadzone_fraction * imbalance * total_weight / k))
    return limit - width


def loss_slots(losses) -> np.ndarray:
    """Bucket slot per loss: 0 for negative, 1 for zero, 2+floor(log2) above."""
    losses = np.asarray(losses)
    slots = np.zeros(len(losses), dtype=I64)
    slots[losses == 0] = 1
    pos = losses > 0
    if pos.any():
        slots[pos] = np.minimum(2 + np.floor(np.log2(losses[pos])).astype(I64), MAX_SLOT)
    return slots


def bucket_order(vertices, losses, sub_buckets: int) -> np.ndarray:
    """Semi-sorted traversal order: slot ascending, then sub-bucket
    (vertex id mod sub_buckets) ascending, then vertex id ascending."""
    vertices = np.asarray(vertices, dtype=I64)
    slots = loss_slots(losses)
    return np.lexsort((vertices, vertices % sub_buckets, slots))


def select_prefix(weights, deficit, max_vertex_weight=None, min_weight=0):
    """Choose the prefix of a traversal order closest to `deficit` weight.

    Vertices heavier than `max_vertex_weight` are skipped in place. The
    scan extends while doing so does not increase the distance to the
    deficit, so exact ties resolve toward taking one more vertex. When
    the closest prefix stays below `min_weight` (the amount the caller
    strictly requires), it is extended to the shortest prefix reaching
    it; with unit weights this never triggers.

    Returns (selected_mask, achieved_weight, shortfall) where shortfall
    is True when even the full list cannot reach the deficit.
    """
    weights = np.asarray(weights, dtype=I64)
    if max_vertex_weight is None:
        eligible = np.ones(len(weights), dtype=bool)
    else:
        eligible = weights <= max_vertex_weight
    counted = np.where(eligible, weights, 0)
    cum = np.cumsum(counted)
    if len(cum) == 0 or cum[-1] < deficit:
        achieved = int(cum[-1]) if len(cum) else 0
        return eligible, achieved, True
    first = int(np.searchsorted(cum, deficit, side="left"))
    over = float(cum[first]) - deficit
    under = deficit - (float(cum[first - 1]) if first > 0 else 0.0)
    take = first + 1 if over <= under else first
    if min_weight > 0 and (take == 0 or cum[take - 1] < min_weight):
        if cum[-1] >= min_weight:
            take = int(np.searchsorted(cum, min_weight, side="left")) + 1
        else:
            take = len(weights)
    selected = eligible & (np.arange(len(weights)) < take)
    achieved = int(cum[take - 1]) if take > 0 else 0
    return selected, achieved, False


def _candidate_stats(table: ConnectivityTable, cand, source_part, valid_lut):
    """Per-candidate connectivity summary against valid destinations.

    Returns (conn_source, best_valid_conn, best_valid_part, sum_valid_conn)
    where best_valid_part is -1 for vertices with no valid connection.
    """
    k = table.k
    lens = table.max_cap[cand]
    idx, _ = segment_indices(table.region[:-1][cand], lens)
    keys = table.keys[idx]
    vals = table.vals[idx]
    live = (keys >= 0) & (vals > 0)
    ok = live & valid_lut[keys]
    enc = k + 1
    score = np.where(ok, vals * enc + (k - keys), -1)
    bounds = exclusive_prefix_sum(lens)[:-1]
    best = np.maximum.reduceat(score, bounds) if len(idx) else np.full(len(cand), -1, I64)
    best_conn = np.where(best >= 0, best // enc, 0)
    best_part = np.where(best >= 0, k - best % enc, -1)
    here = np.where(live & (keys == source_part), vals, 0)
    conn_source = np.add.reduceat(here, bounds) if len(idx) else np.zeros(len(cand), I64)
    sum_valid = np.add.reduceat(np.where(ok, vals, 0), bounds) if len(idx) else np.zeros(len(cand), I64)
    return conn_source, best_conn, best_part, sum_valid


def _evict(state, table, part, limit, sigma, sub_buckets, loss, cand):
    """Order candidates of one oversized part and pick the eviction set.

    The eviction target is the top of the deadzone (sigma + 1); at
    minimum the selection must shed enough weight to reach the limit.
    Vertices heavier than 1.5x the part's excess over the ideal weight
    may not leave.
    """
    graph = table.graph
    order = bucket_order(cand, loss, sub_buckets)
    ordered = cand[order]
    deficit = int(state.part_weights[part]) - (sigma + 1)
    required = int(state.part_weights[part]) - limit
    heavy_bound = 1.5 * (
        float(state.part_weights[part]) - graph.total_vertex_weight / state.k
    )
    selected, _, _ = select_prefix(
        graph.vertex_weights[ordered], deficit,
        max_vertex_weight=heavy_bound, min_weight=required,
    )
    return ordered[selected], order[selected]


def weak_rebalance_pass(graph, state, table, limit, sigma, rng,
                        sub_buckets: int = 32) -> MoveList:
    """One weak rebalancing pass over every oversized part.

    Loss per candidate is conn(v, source) minus its best connection to a
    valid destination; the lowest-loss prefix (by bucketed order) that
    brings the part just inside the deadzone is evicted. Vertices with
    no valid connection draw a seeded pseudo-random destination.
    """
    pw = state.part_weights
    oversized = np.flatnonzero(pw > limit)
    if len(oversized) == 0:
        return MoveList.empty()
    valid = np.flatnonzero(pw < sigma)
    if len(valid) == 0:
        raise RebalanceInfeasibleError(
            f"no part below the destination threshold {sigma}"
        )
    valid_lut = np.zeros(state.k, dtype=bool)
    valid_lut[valid] = True

    verts, dests, gains = [], [], []
    for part in oversized.tolist():
        cand = np.flatnonzero(state.parts == part)
        conn_src, best_conn, best_part, _ = _candidate_stats(
            table, cand, part, valid_lut
        )
        loss = conn_src - best_conn
        chosen, sel_pos = _evict(state, table, part, limit, sigma,
                                 sub_buckets, loss, cand)
        if len(chosen) == 0:
            continue
        chosen_dest = best_part[sel_pos]
        missing = chosen_dest < 0
        if missing.any():
            chosen_dest[missing] = valid[rng.integers(0, len(valid),
                                                      size=int(missing.sum()))]
        verts.append(chosen)
        dests.append(chosen_dest)
        gains.append(-loss[sel_pos])
    if not verts:
        return MoveList.empty()
    return MoveList(
        np.concatenate(verts), np.concatenate(dests), np.concatenate(gains)
    )


def strong_rebalance_pass(graph, state, table, limit, sigma, rng,
                          sub_buckets: int = 32) -> MoveList:
    """One strong rebalancing pass over every oversized part.

    Loss per candidate is conn(v, source) minus its mean connectivity
    over all valid destinations. Evicted vertices from all oversized
    parts form one list; destinations claim contiguous segments bounded
    by their spare capacity (sigma minus current weight) in ascending
    part-id order. Vertices left unclaimed when spare capacity runs out
    stay where they are.
    """
    pw = state.part_weights
    oversized = np.flatnonzero(pw > limit)
    if len(oversized) == 0:
        return MoveList.empty()
    valid = np.flatnonzero(pw < sigma)
    if len(valid) == 0:
        raise RebalanceInfeasibleError(
            f"no part below the destination threshold {sigma}"
        )
    valid_lut = np.zeros(state.k, dtype=bool)
    valid_lut[valid] = True

    evicted, losses = [], []
    for part in oversized.tolist():
        cand = np.flatnonzero(state.parts == part)
        conn_src, _, _, sum_valid = _candidate_stats(table, cand, part, valid_lut)
        loss = conn_src - sum_valid / len(valid)
        chosen, sel_pos = _evict(state, table, part, limit, sigma,
                                 sub_buckets, loss, cand)
        if len(chosen):
            evicted.append(chosen)
            losses.append(loss[sel_pos])
    if not evicted:
        return MoveList.empty()
    everts = np.concatenate(evicted)
    egains = -np.concatenate(losses)

    spare = (sigma - pw[valid]).astype(I64)
    weights = graph.vertex_weights[everts]
    dest = np.full(len(everts), -1, dtype=I64)
    di = 0
    room = int(spare[0])
    for i, wt in enumerate(weights.tolist()):
        while di < len(valid) and room < wt:
            di += 1
            room = int(spare[di]) if di < len(valid) else 0
        if di >= len(valid):
            break
        dest[i] = valid[di]
        room -= wt
    claimed = dest >= 0
    if not claimed.any():
        return MoveList.empty()
    return MoveList(everts[claimed], dest[claimed], egains[claimed])
