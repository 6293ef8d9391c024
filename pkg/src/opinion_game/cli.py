"""Command line entry point ``opinion-game``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical or
assumption error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import nullcontext

from . import __version__
from .errors import (
    ConvergenceError,
    GraphFormatError,
    NumericalError,
    SaddlePointError,
    ScenarioError,
    UnsupportedInstanceError,
    ValidationError,
)
from .experiments import load_scenario, run_scenario
from .graph import build_network, game_assumption_violations, load_edge_list, load_weighted_network, validate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

logger = logging.getLogger("opinion_game")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opinion-game", description="Two-phase opinion investment experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file and write CSV outputs")
    run.add_argument("scenario", help="path to a key = value scenario file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--threads", type=int, default=None, help="cap BLAS/OpenMP threads")

    val = sub.add_parser("validate", help="check a dataset against the model invariants")
    val.add_argument("dataset", help="edge list or weighted network file")
    val.add_argument("--format", choices=("edge-list", "weighted"), default="edge-list")
    val.add_argument("--directed", action="store_true", help="treat edge-list lines as arcs")
    val.add_argument("--w0", type=float, default=0.5, help="self-weight for edge lists (default 0.5)")
    val.add_argument("--theta", type=float, default=0.2, help="camp weight for edge lists (default 0.2)")
    val.add_argument("--z0", type=float, default=0.0, help="initial bias for edge lists (default 0)")
    return parser


def _thread_limit(threads):
    if threads is None:
        return nullcontext()
    if threads < 1:
        raise ScenarioError(f"threads: must be at least 1, got {threads}")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=threads)


def _run(args) -> int:
    scenario = load_scenario(args.scenario)
    with _thread_limit(args.threads):
        paths = run_scenario(scenario, args.out)
    for path in paths:
        print(path)
    return EXIT_OK


def _validate(args) -> int:
    if args.format == "weighted":
        network = load_weighted_network(args.dataset)
    else:
        raw = load_edge_list(args.dataset, directed=args.directed)
        network = build_network(raw, args.w0, args.theta, args.z0)
    problems = validate(network) + game_assumption_violations(network)
    print(f"nodes: {network.n}")
    print(f"arcs: {network.W.nnz}")
    for msg in problems:
        print(f"violation: {msg}")
    if problems:
        print(f"{len(problems)} violation(s)")
        return EXIT_DATA
    print("ok")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return _run(args) if args.command == "run" else _validate(args)
    except ScenarioError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, ValidationError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, ConvergenceError, UnsupportedInstanceError, SaddlePointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
