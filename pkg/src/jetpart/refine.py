"""The Jet refinement engine.

Each refinement iteration is one bulk-synchronous pass computed against
a frozen snapshot of the partition: either an unconstrained label
propagation pass (while the partition is balanced) or a rebalancing
pass (once any part exceeds the limit; two weak passes, then strong
passes until balance returns). The controller keeps the best balanced
partition seen and stops after a fixed number of iterations without a
significant improvement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._arrays import I64, segment_indices, segment_max, segment_sum
from .conn import ConnectivityTable, build_conn
from .errors import RebalanceInfeasibleError
from .graph import Graph, PartitionState, part_weight_limit
from .moves import MoveList
from .rebalance import (
    rebalance_thresholds,
    strong_rebalance_pass,
    weak_rebalance_pass,
)

# sentinel priority for vertices with no destination; safe to negate
NO_GAIN = -(2**62)


@dataclass
class RefinerConfig:
    """Tuning knobs for refinement and the surrounding pipeline.

    The gain-ratio constant differs between the finest level (c_finest)
    and all coarser levels (c_other). phi is the multiplicative
    improvement a new best cut must beat to reset the no-improvement
    counter. The afterburner/locking switches exist for ablation runs
    and are both on in normal operation.
    """

    k: int
    imbalance: float = 0.03
    c_finest: float = 0.25
    c_other: float = 0.75
    phi: float = 0.999
    no_improve_limit: int = 12
    sub_buckets: int = 32
    deadzone_fraction: float = 0.1
    seed: int = 0
    deterministic: bool = False
    coarse_target: int = 200
    restarts: int = 8
    afterburner: bool = True
    locking: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 < self.phi <= 1:
            raise ValueError("phi must be in (0, 1]")
        for c in (self.c_finest, self.c_other):
            if not 0 <= c <= 1:
                raise ValueError("gain-ratio constants must be in [0, 1]")
        if self.no_improve_limit < 1:
            raise ValueError("no_improve_limit must be >= 1")
        if self.sub_buckets < 1:
            raise ValueError("sub_buckets must be >= 1")
        if self.imbalance < 0:
            raise ValueError("imbalance must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


def select_destinations(graph: Graph, state: PartitionState,
                        table: ConnectivityTable):
    """Best destination and vacuum gain for every vertex.

    For boundary vertices the destination is the most-connected part
    other than the current one (ties to the lowest part id) and the gain
    is conn(v, dest) - conn(v, current). Interior vertices get their own
    part as destination and the NO_GAIN sentinel.

    Returns (dest, gain, is_boundary, conn_self).
    """
    k = table.k
    part_at_slot = state.parts[table.slot_row]
    live = (table.keys >= 0) & (table.vals > 0)
    enc = k + 1
    score = np.where(
        live & (table.keys != part_at_slot),
        table.vals * enc + (k - table.keys),
        -1,
    )
    best = segment_max(score, table.region)
    conn_self = segment_sum(
        np.where(live & (table.keys == part_at_slot), table.vals, 0), table.region
    )
    is_boundary = best >= 0
    dest = np.where(is_boundary, k - best % enc, state.parts)
    gain = np.where(is_boundary, best // enc - conn_self, NO_GAIN)
    return dest, gain, is_boundary, conn_self


def gain_ratio_filter(gain, conn_self, c, is_boundary, locks) -> np.ndarray:
    """Candidate mask: unlocked boundary vertices whose gain loses less
    than the floored fraction c of their current-part connectivity.

    The floor is evaluated exactly: results are sensitive to its
    rounding direction, and float products like 0.3 * 10 land just
    below the true value.
    """
    allowed = is_boundary & ~locks
    ratio = Fraction(str(c))
    if ratio.denominator <= 10**6:
        bound = conn_self * ratio.numerator // ratio.denominator
    else:
        bound = np.floor(c * conn_self).astype(I64)
    out = np.zeros(len(gain), dtype=bool)
    out[allowed] = -gain[allowed] < bound[allowed]
    return out


def afterburner(graph: Graph, cand, parts, dests, gain) -> np.ndarray:
    """Re-evaluate each candidate move against a priority-merged state.

    A neighbor that is itself a candidate and precedes the vertex in
    priority order (higher vacuum gain first, then lower id) is assumed
    already moved to its destination; every other neighbor is assumed to
    stay. Returns the recomputed gain per candidate.
    """
    cand = np.asarray(cand, dtype=I64)
    in_cand = np.zeros(graph.n, dtype=bool)
    in_cand[cand] = True
    out = np.zeros(len(cand), dtype=I64)
    idx, seg = segment_indices(graph.row_offsets[:-1][cand], graph.degrees[cand])
    if len(idx) == 0:
        return out
    nbr = graph.adjacency[idx]
    w = graph.edge_weights[idx]
    vid = cand[seg]

    gain_n = gain[nbr]
    gain_v = gain[vid]
    earlier = in_cand[nbr] & (
        (gain_n > gain_v) | ((gain_n == gain_v) & (nbr < vid))
    )
    effective = np.where(earlier, dests[nbr], parts[nbr])
    contrib = w * (
        (effective == dests[vid]).astype(I64) - (effective == parts[vid]).astype(I64)
    )
    np.add.at(out, seg, contrib)
    return out


def jetlp_pass(graph: Graph, state: PartitionState, table: ConnectivityTable,
               c: float, use_afterburner: bool = True,
               use_locks: bool = True) -> MoveList:
    """One synchronous label propagation pass; returns the move list.

    Reads only the pre-pass state. With the afterburner enabled,
    candidates pass the gain-ratio filter, get their gains recomputed
    against the merged state, and survive if the result is nonnegative.
    Without it (ablation baseline) every nonnegative vacuum gain moves.
    Lock bits are reset and then set on exactly the returned vertices.
    """
    dest, gain, is_boundary, conn_self = select_destinations(graph, state, table)
    locks = table.locks if use_locks else np.zeros(graph.n, dtype=bool)
    if use_afterburner:
        cand = np.flatnonzero(gain_ratio_filter(gain, conn_self, c, is_boundary, locks))
        final_gain = afterburner(graph, cand, state.parts, dest, gain)
    else:
        cand = np.flatnonzero(is_boundary & ~locks & (gain >= 0))
        final_gain = gain[cand]
    keep = final_gain >= 0
    moves = MoveList(cand[keep], dest[cand[keep]], final_gain[keep])
    if use_locks:
        table.reset_locks()
        table.set_locks(moves.vertices)
    return moves


def _lp_constant(config: RefinerConfig, finest: bool) -> float:
    return config.c_finest if finest else config.c_other


def jet_refine(graph: Graph, state: PartitionState, config: RefinerConfig,
               finest: bool = True, seed_path=()):
    """Refine a partition; returns (best_state, stats).

    Runs label propagation while the partition is balanced and the
    rebalancing schedule once it is not. Every pass counts as one
    iteration. The best balanced partition seen is returned; if balance
    is never reached, the least-imbalanced state is returned instead and
    flagged in the stats.
    """
    state = state.copy()
    table = build_conn(graph, state)
    total = graph.total_vertex_weight
    limit = part_weight_limit(total, config.k, config.imbalance)
    sigma = rebalance_thresholds(
        total, config.k, config.imbalance, limit, config.deadzone_fraction
    )
    c = _lp_constant(config, finest)

    def balanced() -> bool:
        return bool(np.all(state.part_weights <= limit))

    best = state.copy() if balanced() else None
    best_cut = state.cutsize if best is not None else None
    fallback = None if best is not None else (state.copy(), int(state.part_weights.max()))

    stats = {
        "iterations": 0,
        "lp_passes": 0,
        "weak_passes": 0,
        "strong_passes": 0,
        "moves": 0,
        "rebalance_stuck": False,
        "trace": [],
    }
    no_improve = 0
    rebal_streak = 0
    pass_index = 0

    while no_improve < config.no_improve_limit:
        if balanced():
            rebal_streak = 0
            locks_all_clear = not table.locks.any()
            moves = jetlp_pass(
                graph, state, table, c,
                use_afterburner=config.afterburner, use_locks=config.locking,
            )
            kind = "lp"
            stats["lp_passes"] += 1
            fixed_point = len(moves) == 0 and locks_all_clear
        else:
            if rebal_streak >= 2 + config.k:
                stats["rebalance_stuck"] = True
                break
            table.reset_locks()
            rng = np.random.default_rng([config.seed, *seed_path, pass_index])
            try:
                if rebal_streak < 2:
                    moves = weak_rebalance_pass(
                        graph, state, table, limit, sigma, rng, config.sub_buckets
                    )
                    kind = "weak"
                    stats["weak_passes"] += 1
                else:
                    moves = strong_rebalance_pass(
                        graph, state, table, limit, sigma, rng, config.sub_buckets
                    )
                    kind = "strong"
                    stats["strong_passes"] += 1
            except RebalanceInfeasibleError:
                stats["rebalance_stuck"] = True
                break
            rebal_streak += 1
            fixed_point = False

        table.apply(moves)
        pass_index += 1
        stats["iterations"] += 1
        stats["moves"] += len(moves)
        stats["trace"].append(
            (kind, state.cutsize, int(state.part_weights.max()), len(moves))
        )
        no_improve += 1

        if balanced():
            if best is None or state.cutsize < best_cut:
                if best is None or state.cutsize < config.phi * best_cut:
                    no_improve = 0
                best = state.copy()
                best_cut = state.cutsize
        elif best is None:
            worst = int(state.part_weights.max())
            if worst < fallback[1]:
                fallback = (state.copy(), worst)

        if fixed_point:
            break

    if best is not None:
        stats["balanced"] = True
        stats["best_cut"] = best_cut
        return best, stats
    stats["balanced"] = False
    stats["best_cut"] = None
    return fallback[0], stats
