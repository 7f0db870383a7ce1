"""Experiment harness: seeded GA runs per (instance x crossover) cell.

Each cell runs ``runs`` independent GA executions with seeds
``seed_base + run_index`` and aggregates best/average/worst tour lengths,
the matching quality percentages, the mean outer-loop count and the mean
wall time.  Cells are independent and can be distributed over worker
processes; aggregation is serial and sorted, so reports are deterministic
byte for byte except for the measured seconds.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .crossover import CrossoverSpec
from .ga import GaConfig, GaResult, run_ga
from .tour import quality_percent
from .tsplib import Instance, TsplibError, resolve_instance

__all__ = [
    "BenchRow",
    "BenchmarkReport",
    "run_benchmark",
    "emit_report",
    "parse_report_csv",
]

logger = logging.getLogger("tspcross.bench")

CSV_COLUMNS = (
    "instance",
    "crossover",
    "best",
    "best_q",
    "avg",
    "avg_q",
    "worst",
    "worst_q",
    "while_loops",
    "seconds",
    "runs",
    "seed",
)


@dataclass
class BenchRow:
    """Aggregated results of one (instance, crossover) cell."""

    instance: str
    crossover: str
    best: int
    best_q: float | None
    avg: float
    avg_q: float | None
    worst: int
    worst_q: float | None
    while_loops: float
    seconds: float
    runs: int
    seed: int


@dataclass
class BenchmarkReport:
    rows: list[BenchRow]
    errors: list[tuple[str, str]]  # (instance spec, message)


def _run_cell_job(args: tuple[Instance, CrossoverSpec, GaConfig, int]) -> GaResult:
    inst, spec, cfg, seed = args
    return run_ga(replace(cfg, crossover=spec, seed=seed), inst)


def _aggregate(
    inst: Instance, spec: CrossoverSpec, results: list[GaResult], runs: int, seed_base: int
) -> BenchRow:
    lengths = [r.best_length for r in results]
    best, worst = min(lengths), max(lengths)
    # Means are rounded once here so that emitted reports round-trip exactly.
    avg = round(sum(lengths) / len(lengths), 6)
    opt = inst.optimum
    return BenchRow(
        instance=inst.name,
        crossover=spec.name,
        best=best,
        best_q=quality_percent(best, opt) if opt else None,
        avg=avg,
        avg_q=quality_percent(avg, opt) if opt else None,
        worst=worst,
        worst_q=quality_percent(worst, opt) if opt else None,
        while_loops=round(sum(r.while_loop_count for r in results) / len(results), 6),
        seconds=round(sum(r.elapsed_seconds for r in results) / len(results), 6),
        runs=runs,
        seed=seed_base,
    )


def run_benchmark(
    instances: list[Instance | str],
    crossovers: list[CrossoverSpec],
    cfg: GaConfig,
    runs: int,
    workers: int = 1,
) -> BenchmarkReport:
    """Execute every (instance x crossover) cell and aggregate a report.

    ``instances`` may mix loaded :class:`Instance` objects with fixture
    names or file paths; an instance that fails to load contributes an
    error entry instead of aborting the whole benchmark.  ``cfg.seed`` is
    the seed base; run ``i`` of every cell uses ``cfg.seed + i``.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    loaded: list[Instance] = []
    errors: list[tuple[str, str]] = []
    for item in instances:
        if isinstance(item, Instance):
            loaded.append(item)
            continue
        try:
            loaded.append(resolve_instance(item))
        except (TsplibError, OSError) as exc:
            logger.error("skipping instance %s: %s", item, exc)
            errors.append((str(item), str(exc)))

    cells = [(inst, spec) for inst in loaded for spec in crossovers]
    jobs = [
        (inst, spec, cfg, cfg.seed + run_idx)
        for inst, spec in cells
        for run_idx in range(runs)
    ]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_run_cell_job, jobs, chunksize=1))
    else:
        flat = [_run_cell_job(job) for job in jobs]

    rows = []
    for i, (inst, spec) in enumerate(cells):
        cell_results = flat[i * runs : (i + 1) * runs]
        rows.append(_aggregate(inst, spec, cell_results, runs, cfg.seed))
        logger.info(
            "cell %s x %s: best=%d avg=%.1f", inst.name, spec.name, rows[-1].best, rows[-1].avg
        )
    rows.sort(key=lambda r: (r.instance, r.crossover, r.seed))
    return BenchmarkReport(rows=rows, errors=sorted(errors))


def _fmt_quality(q: float | None) -> str:
    if q is None:
        return ""
    return f"{q:.2f}".rstrip("0").rstrip(".") or "0"


def _fmt_float(x: float) -> str:
    return repr(x)


def emit_report(report: BenchmarkReport, format: str) -> str:
    """Render a report as ``csv`` or ``markdown`` text."""
    if format == "csv":
        return _emit_csv(report)
    if format == "markdown":
        return _emit_markdown(report)
    raise ValueError(f"unknown format {format!r}")


def _emit_csv(report: BenchmarkReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.rows:
        writer.writerow(
            [
                r.instance,
                r.crossover,
                r.best,
                _fmt_quality(r.best_q),
                _fmt_float(r.avg),
                _fmt_quality(r.avg_q),
                r.worst,
                _fmt_quality(r.worst_q),
                _fmt_float(r.while_loops),
                _fmt_float(r.seconds),
                r.runs,
                r.seed,
            ]
        )
    return out.getvalue()


def _cell(length: float, q: float | None) -> str:
    if isinstance(length, float) and length.is_integer():
        text = str(int(length))
    else:
        text = str(length) if isinstance(length, int) else _fmt_float(length)
    return f"{text}({_fmt_quality(q)})" if q is not None else text


def _emit_markdown(report: BenchmarkReport) -> str:
    header = (
        "| Problem | Crossover | Best length (quality) | Average length (quality) "
        "| Worst length (quality) | While loops | Time (s) | Runs |"
    )
    sep = "|---|---|---|---|---|---|---|---|"
    lines = [header, sep]
    for r in report.rows:
        lines.append(
            "| {} | {} | {} | {} | {} | {} | {:.3f} | {} |".format(
                r.instance,
                r.crossover,
                _cell(r.best, r.best_q),
                _cell(round(r.avg, 1), r.avg_q),
                _cell(r.worst, r.worst_q),
                _fmt_float(r.while_loops),
                r.seconds,
                r.runs,
            )
        )
    for spec, message in report.errors:
        lines.append(f"| {spec} | (load error) | {message} | | | | | |")
    return "\n".join(lines) + "\n"


def parse_report_csv(text: str) -> BenchmarkReport:
    """Parse CSV emitted by :func:`emit_report` back into a report."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns: {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            BenchRow(
                instance=rec["instance"],
                crossover=rec["crossover"],
                best=int(rec["best"]),
                best_q=float(rec["best_q"]) if rec["best_q"] else None,
                avg=float(rec["avg"]),
                avg_q=float(rec["avg_q"]) if rec["avg_q"] else None,
                worst=int(rec["worst"]),
                worst_q=float(rec["worst_q"]) if rec["worst_q"] else None,
                while_loops=float(rec["while_loops"]),
                seconds=float(rec["seconds"]),
                runs=int(rec["runs"]),
                seed=int(rec["seed"]),
            )
        )
    return BenchmarkReport(rows=rows, errors=[])
