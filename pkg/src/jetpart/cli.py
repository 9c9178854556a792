"""Command line interface: jetpart <graph> --k K [options]."""

from __future__ import annotations

import argparse
import json
import sys
import time

from .driver import partition
from .errors import BalanceInfeasibleError, JetpartError
from .io import load_graph, write_partition
from .refine import RefinerConfig

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNBALANCED = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetpart",
        description="Balanced k-way graph partitioning with multilevel "
                    "Jet refinement.",
    )
    parser.add_argument("graph", help="input graph file")
    parser.add_argument("--k", type=int, required=True, help="number of parts")
    parser.add_argument("--imbalance", type=float, default=0.03,
                        help="allowed part weight slack (default 0.03)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=["metis", "mtx", "auto"],
                        default="auto", help="input format (default: by extension)")
    parser.add_argument("--out", help="partition output file, one part id per line")
    parser.add_argument("--metrics", help="write run metrics as JSON to this file")
    parser.add_argument("--deterministic", action="store_true",
                        help="request reproducible output (echoed in metrics)")
    parser.add_argument("--phi", type=float, default=0.999,
                        help="improvement tolerance (default 0.999)")
    parser.add_argument("--no-improve-limit", type=int, default=12)
    parser.add_argument("--coarse-target", type=int, default=200)
    parser.add_argument("--c-finest", type=float, default=0.25)
    parser.add_argument("--c-other", type=float, default=0.75)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RefinerConfig(
            k=args.k,
            imbalance=args.imbalance,
            seed=args.seed,
            phi=args.phi,
            no_improve_limit=args.no_improve_limit,
            coarse_target=args.coarse_target,
            c_finest=args.c_finest,
            c_other=args.c_other,
            deterministic=args.deterministic,
        )
    except ValueError as exc:
        print(f"jetpart: {exc}", file=sys.stderr)
        return EXIT_INPUT

    t0 = time.perf_counter()
    try:
        graph, mapping = load_graph(args.graph, fmt=args.format, with_mapping=True)
    except (OSError, JetpartError, ValueError) as exc:
        print(f"jetpart: {exc}", file=sys.stderr)
        return EXIT_INPUT
    io_seconds = time.perf_counter() - t0

    try:
        result = partition(graph, config)
    except BalanceInfeasibleError as exc:
        print(f"jetpart: {exc}", file=sys.stderr)
        return EXIT_UNBALANCED
    except (JetpartError, ValueError) as exc:
        print(f"jetpart: {exc}", file=sys.stderr)
        return EXIT_INPUT

    metrics = result.metrics
    metrics["times"]["io"] = io_seconds
    metrics["n_original"] = int(len(mapping))
    metrics["n_dropped"] = int((mapping < 0).sum())

    if args.out:
        write_partition(result.state.parts, args.out)
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8") as handle:
            json.dump(metrics, handle, indent=2, default=_jsonable)
            handle.write("\n")

    print(
        f"jetpart: n={metrics['n']} m={metrics['m']} k={metrics['k']} "
        f"cut={metrics['cutsize']} imbalance={metrics['imbalance']:.4f} "
        f"balanced={metrics['balanced']} seconds={metrics['times']['total']:.3f}"
    )
    if metrics["n_dropped"]:
        print(
            f"jetpart: kept largest connected component "
            f"({metrics['n']} of {metrics['n_original']} vertices)",
            file=sys.stderr,
        )
    if not metrics["balanced"]:
        print("jetpart: output violates the balance constraint", file=sys.stderr)
        return EXIT_UNBALANCED
    return EXIT_OK


def _jsonable(value):
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"not JSON serializable: {type(value)}")


if __name__ == "__main__":
    sys.exit(main())
