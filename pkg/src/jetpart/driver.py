"""End-to-end multilevel partitioning: coarsen, seed, refine per level."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._arrays import I64
from .coarsen import build_hierarchy
from .errors import BalanceInfeasibleError
from .graph import (
    Graph,
    PartitionState,
    imbalance_of,
    is_balanced,
    part_weight_limit,
)
from .initpart import initial_partition
from .refine import RefinerConfig, jet_refine


@dataclass
class PartitionResult:
    """Final partition plus the run report used for metrics output."""

    state: PartitionState
    metrics: dict = field(default_factory=dict)


def project(coarse_state: PartitionState, vmap, fine_graph: Graph) -> PartitionState:
    """Pull a coarse partition down one level.

    Every fine vertex inherits the part of its coarse image; part
    weights and cutsize are recomputed on the fine graph. Contraction
    sums parallel edges and drops self-loops, so the cutsize is
    preserved exactly.
    """
    vmap = np.asarray(vmap, dtype=I64)
    if len(vmap) != fine_graph.n:
        raise ValueError("map length must equal fine vertex count")
    return PartitionState.from_parts(
        fine_graph, coarse_state.parts[vmap], coarse_state.k
    )


def partition(graph: Graph, config: RefinerConfig) -> PartitionResult:
    """Partition a graph into config.k balanced parts, minimizing cut.

    Raises BalanceInfeasibleError when some single vertex weight already
    exceeds the part-weight limit. If refinement fails to restore
    balance at the finest level, the result is still returned and the
    violation is reported in the metrics, never silently dropped.
    """
    if config.k < 1:
        raise ValueError("k must be >= 1")
    if config.k > graph.n:
        raise ValueError(f"k={config.k} exceeds vertex count {graph.n}")
    limit = part_weight_limit(graph.total_vertex_weight, config.k, config.imbalance)
    heaviest = int(graph.vertex_weights.max())
    if heaviest > limit:
        raise BalanceInfeasibleError(
            f"vertex weight {heaviest} exceeds the part weight limit {limit}"
        )
    if config.k * limit < graph.total_vertex_weight:
        raise BalanceInfeasibleError(
            f"k * limit = {config.k * limit} cannot hold the total vertex "
            f"weight {graph.total_vertex_weight}"
        )

    times = {}
    levels_report = []
    t0 = time.perf_counter()

    if config.k == 1:
        state = PartitionState.from_parts(graph, np.zeros(graph.n, dtype=I64), 1)
        times["total"] = time.perf_counter() - t0
        metrics = _metrics(graph, state, config, times, levels_report, 1)
        return PartitionResult(state, metrics)

    target = max(config.coarse_target, 2 * config.k, 32)
    hierarchy = build_hierarchy(graph, target, seed=config.seed)
    times["coarsen"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    coarsest = hierarchy.levels[-1]
    state = initial_partition(
        coarsest, config.k, config.imbalance, seed=config.seed,
        restarts=config.restarts,
    )
    times["initial"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    top = len(hierarchy.levels) - 1
    for level in range(top, -1, -1):
        g = hierarchy.levels[level]
        if level != top:
            state = project(state, hierarchy.maps[level], g)
        cut_in = state.cutsize
        balanced_in = is_balanced(state, config.imbalance, g.total_vertex_weight)
        t_level = time.perf_counter()
        state, stats = jet_refine(
            g, state, config, finest=(level == 0), seed_path=(level,)
        )
        levels_report.append({
            "level": level,
            "n": g.n,
            "m": g.m,
            "cut_in": cut_in,
            "cut_out": state.cutsize,
            "balanced_in": balanced_in,
            "balanced": is_balanced(state, config.imbalance, g.total_vertex_weight),
            "iterations": stats["iterations"],
            "lp_passes": stats["lp_passes"],
            "weak_passes": stats["weak_passes"],
            "strong_passes": stats["strong_passes"],
            "rebalance_stuck": stats["rebalance_stuck"],
            "seconds": time.perf_counter() - t_level,
        })
    times["uncoarsen"] = time.perf_counter() - t2
    times["total"] = time.perf_counter() - t0

    metrics = _metrics(graph, state, config, times, levels_report,
                       len(hierarchy.levels))
    return PartitionResult(state, metrics)


def _metrics(graph, state, config, times, levels_report, n_levels) -> dict:
    return {
        "n": graph.n,
        "m": graph.m,
        "k": config.k,
        "seed": config.seed,
        "cutsize": state.cutsize,
        "imbalance": imbalance_of(state, graph.total_vertex_weight),
        "balanced": is_balanced(state, config.imbalance, graph.total_vertex_weight),
        "part_weight_limit": part_weight_limit(
            graph.total_vertex_weight, config.k, config.imbalance
        ),
        "levels": levels_report,
        "n_levels": n_levels,
        "times": times,
        "config": {
            "k": config.k,
            "imbalance": config.imbalance,
            "c_finest": config.c_finest,
            "c_other": config.c_other,
            "phi": config.phi,
            "no_improve_limit": config.no_improve_limit,
            "sub_buckets": config.sub_buckets,
            "deadzone_fraction": config.deadzone_fraction,
            "seed": config.seed,
            "deterministic": config.deterministic,
            "coarse_target": config.coarse_target,
            "restarts": config.restarts,
            "afterburner": config.afterburner,
            "locking": config.locking,
        },
    }
