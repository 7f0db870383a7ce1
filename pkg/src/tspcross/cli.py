"""Command-line interface.

Subcommands:

* ``bench``       -- run the (instances x crossovers) experiment grid and
  emit a CSV or Markdown report.
* ``solve``       -- one GA run on one instance; prints the best tour.
* ``xover-demo``  -- run a single crossover application on explicit parents
  and print the child plus the operator's step-table trace.

Exit codes: 0 success, 1 bad arguments, 2 instance I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import emit_report, run_benchmark
from .crossover import (
    TABLE_CROSSOVERS,
    CrossoverSpec,
    dpx,
    epmx,
    gsx,
    gx,
    pmx,
    render_trace,
    uhx,
)
from .ga import GaConfig, run_ga
from .localsearch import DEFAULT_NEIGHBORS
from .rng import RandomStream
from .tour import parse_tour, quality_percent, render_tour, tour_length, validate_tour
from .tsplib import TsplibError, available_fixtures, resolve_instance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports bad arguments with exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tspcross", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run the benchmark grid")
    bench.add_argument("--instances", nargs="+", required=True,
                       metavar="INST", help="fixture names or TSPLIB file paths")
    bench.add_argument("--crossovers", nargs="+", required=True, metavar="NAME",
                       help="crossover names, or 'all' for the full table")
    bench.add_argument("--pop", type=int, default=50, help="population size")
    bench.add_argument("--gen", type=int, default=500, help="children per outer iteration")
    bench.add_argument("--runs", type=int, default=10, help="seeded runs per cell")
    bench.add_argument("--seed", type=int, default=0, help="seed base; run i uses seed+i")
    bench.add_argument("--neighbors", type=int, default=DEFAULT_NEIGHBORS,
                       help="candidate list size for the local searches")
    bench.add_argument("--format", choices=("csv", "markdown"), default="csv")
    bench.add_argument("--out", type=Path, default=None, help="write the report here")
    bench.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    bench.add_argument("--max-iterations", type=int, default=10_000,
                       help="safety cap on the GA outer loop")
    bench.add_argument("-v", "--verbose", action="store_true")

    solve = sub.add_parser("solve", help="solve one instance with one crossover")
    solve.add_argument("--instance", required=True, help="fixture name or TSPLIB file path")
    solve.add_argument("--crossover", required=True, help="crossover name")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--pop", type=int, default=50)
    solve.add_argument("--gen", type=int, default=500)
    solve.add_argument("--neighbors", type=int, default=DEFAULT_NEIGHBORS)
    solve.add_argument("-v", "--verbose", action="store_true")

    demo = sub.add_parser("xover-demo", help="trace one crossover application")
    demo.add_argument("--op", required=True, help="crossover name")
    demo.add_argument("--father", required=True, help="tour, e.g. 1-2-3-4-5-6-7-8")
    demo.add_argument("--mother", required=True, help="tour, e.g. 1-4-8-6-2-3-5-7")
    demo.add_argument("--instance", required=True, help="fixture name or TSPLIB file path")
    demo.add_argument("--start", type=int, default=None, help="1-based start city")
    demo.add_argument("--point", type=int, default=None, help="cut point (EPMX)")
    demo.add_argument("--cuts", type=int, nargs=2, default=None,
                      metavar=("CUT1", "CUT2"), help="cut positions (PMX)")
    demo.add_argument("--seed", type=int, default=0, help="seed for randomized fallbacks")
    return parser


def _parse_crossovers(names: list[str]) -> list[CrossoverSpec]:
    if len(names) == 1 and names[0].lower() == "all":
        return list(TABLE_CROSSOVERS)
    return [CrossoverSpec.from_name(name) for name in names]


def _cmd_bench(args) -> int:
    crossovers = _parse_crossovers(args.crossovers)
    cfg = GaConfig(
        crossover=crossovers[0],
        population_size=args.pop,
        generation_size=args.gen,
        neighbor_k=args.neighbors,
        seed=args.seed,
        max_while_iterations=args.max_iterations,
    )
    # Resolve instances up front so a missing single instance fails fast.
    report = run_benchmark(args.instances, crossovers, cfg, args.runs, workers=args.workers)
    if not report.rows:
        for spec, message in report.errors:
            print(f"error: {spec}: {message}", file=sys.stderr)
        return EXIT_IO
    for spec, message in report.errors:
        print(f"warning: skipped {spec}: {message}", file=sys.stderr)
    text = emit_report(report, args.format)
    if args.out is not None:
        args.out.write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = resolve_instance(args.instance)
    cfg = GaConfig(
        crossover=CrossoverSpec.from_name(args.crossover),
        population_size=args.pop,
        generation_size=args.gen,
        neighbor_k=args.neighbors,
        seed=args.seed,
    )
    result = run_ga(cfg, inst)
    print(f"instance: {inst.name} (n={inst.dimension})")
    print(f"crossover: {cfg.crossover.name}  seed: {args.seed}")
    print(f"best tour: {render_tour(result.best_tour)}")
    line = f"best length: {result.best_length}"
    if inst.optimum:
        line += f"  quality: {quality_percent(result.best_length, inst.optimum)}%"
    print(line)
    print(
        f"while loops: {result.while_loop_count}  "
        f"time: {result.elapsed_seconds:.3f}s"
    )
    return EXIT_OK


def _cmd_demo(args) -> int:
    inst = resolve_instance(args.instance)
    n = inst.dimension
    spec = CrossoverSpec.from_name(args.op)
    father = parse_tour(args.father, n)
    mother = parse_tour(args.mother, n)
    rng = RandomStream(args.seed)
    start = None
    if args.start is not None:
        if not (1 <= args.start <= n):
            raise _UsageError(f"--start must be within 1..{n}")
        start = args.start - 1

    trace = []
    if spec.kind == "PMX":
        cuts = args.cuts if args.cuts is not None else sorted(rng.pair(n + 1))
        c1, c2 = pmx(father, mother, cuts[0], cuts[1])
        print(f"cuts: {cuts[0]}..{cuts[1]}")
        _print_children(inst, c1, c2)
        return EXIT_OK
    if spec.kind == "EPMX":
        point = args.point if args.point is not None else 1 + rng.randrange(n)
        if not (1 <= point <= n):
            raise _UsageError(f"--point must be within 1..{n}")
        c1, c2 = epmx(father, mother, point)
        print(f"point: {point}")
        _print_children(inst, c1, c2)
        return EXIT_OK

    if start is None:
        start = rng.randrange(n)
    if spec.kind == "GX":
        child = gx(spec.gx_variant, father, mother, start, inst, rng, trace=trace)
    elif spec.kind == "UHX":
        child = uhx(father, mother, start, inst, trace=trace)
    elif spec.kind == "GSX":
        child = gsx(spec.gsx_version, father, mother, start, rng, trace=trace)
    else:
        child = dpx(father, mother, inst, trace=trace)
    print(render_trace(trace))
    problem = validate_tour(child, n)
    status = "valid" if problem is None else f"INVALID: {problem}"
    print(f"child: {render_tour(child)}  length: {tour_length(child, inst)}  ({status})")
    return EXIT_OK


def _print_children(inst, c1, c2) -> None:
    n = inst.dimension
    for label, child in (("child1", c1), ("child2", c2)):
        problem = validate_tour(child, n)
        status = "valid" if problem is None else f"INVALID: {problem}"
        print(
            f"{label}: {render_tour(child)}  length: {tour_length(child, inst)}  ({status})"
        )


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
            format="%(asctime)s %(name)s %(message)s",
        )
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_demo(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # Unknown crossover names, malformed tours, bad parameters.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, TsplibError) else EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
