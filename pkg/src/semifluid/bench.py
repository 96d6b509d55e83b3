"""Experiment harness: run methods over instance sets and compare them.

Emits the comparison artifacts used throughout: pairwise strictly-better
win matrices (and their antisymmetric differences), per-(family, size,
method) aggregates including best-found and optimality percentages, and
objective-versus-time curves sampled on a fixed grid.  All win counting
and aggregation compares exact rationals; no epsilons anywhere.

Desk-scale by default: the full-scale study (thousands of instances, long
per-run time limits) is a matter of passing larger suites and limits.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import search
from .generator import read_header
from .heuristics import Rule, ascent, pack
from .model import Instance, Solution, read_instance
from .rational import format_decimal, format_fraction, parse_fraction
from .search import Limits, SearchStats

log = logging.getLogger("semifluid.bench")

HEURISTIC_METHODS = ("BF", "LFF", "LBF", "WFF", "WBF", "LA")
SEARCH_METHODS = ("BB", "BFD", "LDS")
ALL_METHODS = HEURISTIC_METHODS + SEARCH_METHODS


class BenchError(ValueError):
    pass


@dataclass
class RunRecord:
    instance_id: str
    family: str
    size: int
    method: str
    objective: Fraction
    optimal: bool
    stats: SearchStats | None
    wall_time: float
    trace: list[tuple[float, Fraction]]
    solution: Solution | None = None


@dataclass
class PairwiseMatrix:
    """wins[i][j] counts instances where method i beat method j strictly."""

    methods: tuple[str, ...]
    wins: list[list[int]]

    def difference(self) -> list[list[int]]:
        n = len(self.methods)
        return [[self.wins[i][j] - self.wins[j][i] for j in range(n)] for i in range(n)]


@dataclass
class SuiteResult:
    records: list[RunRecord]
    failures: list[tuple[str, str, str]]      # (instance_id, method, error)


def solve_with(method: str, instance: Instance,
               limits: Limits = search.NO_LIMITS,
               enforce_symmetry: bool = True) -> RunRecord:
    """Run one method on one in-memory instance; id fields filled by caller."""
    name = method.upper()
    start = time.perf_counter()
    if name in ("BF", "LFF", "LBF", "WFF", "WBF"):
        solution = pack(instance, Rule(name.lower()))
        outcome = None
    elif name == "LA":
        solution = ascent(instance, Rule.LBF)
        outcome = None
    elif name in ("BB", "BFD", "LDS"):
        runner = {"BB": search.branch_and_bound, "BFD": search.bfd,
                  "LDS": search.lds}[name]
        outcome = runner(instance, limits, enforce_symmetry=enforce_symmetry)
        solution = outcome.solution
    else:
        raise BenchError(f"unknown method {method!r}")
    elapsed = time.perf_counter() - start
    if outcome is None:
        return RunRecord(instance_id="", family="", size=len(instance.items),
                         method=name, objective=solution.value, optimal=False,
                         stats=None, wall_time=elapsed,
                         trace=[(elapsed, solution.value)], solution=solution)
    return RunRecord(instance_id="", family="", size=len(instance.items),
                     method=name, objective=solution.value, optimal=outcome.optimal,
                     stats=outcome.stats, wall_time=outcome.stats.wall_time,
                     trace=outcome.trace, solution=solution)


def _run_one(path_text: str, method: str, limits: Limits) -> RunRecord:
    path = Path(path_text)
    instance = read_instance(path)
    meta = read_header(path)
    record = solve_with(method, instance, limits)
    record.instance_id = path.stem
    record.family = meta.get("family", "unknown")
    return record


def run_suite(paths: Sequence[str | Path], methods: Sequence[str],
              limits: Limits = search.NO_LIMITS, workers: int = 1) -> SuiteResult:
    """One record per (instance, method); failures are isolated and logged."""
    jobs = [(str(path), method.upper()) for path in paths for method in methods]
    records: list[RunRecord] = []
    failures: list[tuple[str, str, str]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(job, pool.submit(_run_one, job[0], job[1], limits))
                       for job in jobs]
            for (path_text, method), future in futures:
                try:
                    records.append(future.result())
                except Exception as exc:
                    log.error("run failed: %s %s: %s", path_text, method, exc)
                    failures.append((Path(path_text).stem, method, str(exc)))
    else:
        for path_text, method in jobs:
            try:
                records.append(_run_one(path_text, method, limits))
            except Exception as exc:
                log.error("run failed: %s %s: %s", path_text, method, exc)
                failures.append((Path(path_text).stem, method, str(exc)))
    return SuiteResult(records=records, failures=failures)


def _objectives_by_instance(records: Iterable[RunRecord]) -> dict[str, dict[str, Fraction]]:
    table: dict[str, dict[str, Fraction]] = {}
    for record in records:
        table.setdefault(record.instance_id, {})[record.method] = record.objective
    return table


def pairwise(records: Sequence[RunRecord],
             methods: Sequence[str] | None = None) -> PairwiseMatrix:
    """Strict-win counts over every instance; errors on missing pairs."""
    if methods is None:
        methods = tuple(dict.fromkeys(record.method for record in records))
    else:
        methods = tuple(m.upper() for m in methods)
    table = _objectives_by_instance(records)
    for instance_id, per_method in sorted(table.items()):
        for method in methods:
            if method not in per_method:
                raise BenchError(f"missing run: instance {instance_id} method {method}")
    n = len(methods)
    wins = [[0] * n for _ in range(n)]
    for per_method in table.values():
        for i, mi in enumerate(methods):
            for j, mj in enumerate(methods):
                if i != j and per_method[mi] > per_method[mj]:
                    wins[i][j] += 1
    return PairwiseMatrix(methods=methods, wins=wins)


def _trace_value_at(trace: list[tuple[float, Fraction]], t: float) -> Fraction:
    value = Fraction(0)
    for elapsed, objective in trace:
        if elapsed <= t:
            value = objective
        else:
            break
    return value


@dataclass
class SummaryRow:
    family: str
    size: int
    method: str
    instances: int
    best_found_pct: float
    optimal_pct: float
    mean_wall_time: float
    mean_explored: float | None
    mean_in_queue: float | None
    mean_created: float | None
    mean_objective: Fraction
    curve: list[tuple[float, Fraction]]


def summarize(records: Sequence[RunRecord],
              time_grid: Sequence[float] | None = None) -> list[SummaryRow]:
    """Aggregates per (family, size, method); order-independent."""
    table = _objectives_by_instance(records)
    best = {instance_id: max(per.values()) for instance_id, per in table.items()}
    if time_grid is None:
        horizon = max((record.wall_time for record in records), default=0.0)
        time_grid = [horizon * k / 10 for k in range(11)] if horizon > 0 else [0.0]

    groups: dict[tuple[str, int, str], list[RunRecord]] = {}
    for record in records:
        groups.setdefault((record.family, record.size, record.method), []).append(record)

    rows = []
    for (family, size, method), group in sorted(groups.items()):
        group = sorted(group, key=lambda r: r.instance_id)
        count = len(group)
        best_found = sum(r.objective == best[r.instance_id] for r in group)
        optimal = sum(r.optimal for r in group)
        explored = [r.stats.nodes_explored for r in group if r.stats is not None]
        in_queue = [r.stats.nodes_in_queue_at_end for r in group if r.stats is not None]
        created = [r.stats.nodes_created for r in group if r.stats is not None]
        curve = [(t, sum((_trace_value_at(r.trace, t) for r in group), Fraction(0))
                  / count) for t in time_grid]
        rows.append(SummaryRow(
            family=family, size=size, method=method, instances=count,
            best_found_pct=100.0 * best_found / count,
            optimal_pct=100.0 * optimal / count,
            mean_wall_time=sum(r.wall_time for r in group) / count,
            mean_explored=sum(explored) / len(explored) if explored else None,
            mean_in_queue=sum(in_queue) / len(in_queue) if in_queue else None,
            mean_created=sum(created) / len(created) if created else None,
            mean_objective=sum((r.objective for r in group), Fraction(0)) / count,
            curve=curve))
    return rows


# ---------------------------------------------------------------------------
# File emission: TSV for matrices and aggregates, JSON lines for raw records.
# ---------------------------------------------------------------------------

def _matrix_tsv(methods: Sequence[str], matrix: Sequence[Sequence[int]]) -> str:
    lines = ["\t".join(("",) + tuple(methods))]
    for method, row in zip(methods, matrix):
        lines.append("\t".join([method] + [str(x) for x in row]))
    return "\n".join(lines) + "\n"


def write_pairwise_tsv(matrix: PairwiseMatrix, wins_path: str | Path,
                       diff_path: str | Path) -> None:
    Path(wins_path).write_text(_matrix_tsv(matrix.methods, matrix.wins))
    Path(diff_path).write_text(_matrix_tsv(matrix.methods, matrix.difference()))


def write_summary_tsv(rows: Sequence[SummaryRow], path: str | Path) -> None:
    header = ["family", "size", "method", "instances", "best_found_pct",
              "optimal_pct", "mean_wall_time", "mean_explored", "mean_in_queue",
              "mean_created", "mean_objective"]
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join([
            row.family, str(row.size), row.method, str(row.instances),
            f"{row.best_found_pct:.1f}", f"{row.optimal_pct:.1f}",
            f"{row.mean_wall_time:.4f}",
            "" if row.mean_explored is None else f"{row.mean_explored:.2f}",
            "" if row.mean_in_queue is None else f"{row.mean_in_queue:.2f}",
            "" if row.mean_created is None else f"{row.mean_created:.2f}",
            format_decimal(row.mean_objective)]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_curves_tsv(rows: Sequence[SummaryRow], path: str | Path) -> None:
    lines = ["\t".join(["family", "size", "method", "time", "mean_objective"])]
    for row in rows:
        for t, value in row.curve:
            lines.append("\t".join([row.family, str(row.size), row.method,
                                    f"{t:.4f}", format_decimal(value)]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_records_jsonl(records: Sequence[RunRecord], path: str | Path) -> None:
    with Path(path).open("w") as stream:
        for record in records:
            stats = None
            if record.stats is not None:
                stats = {"explored": record.stats.nodes_explored,
                         "created": record.stats.nodes_created,
                         "in_queue": record.stats.nodes_in_queue_at_end,
                         "pruned_or_chopped": record.stats.nodes_pruned_or_chopped}
            stream.write(json.dumps({
                "instance": record.instance_id,
                "family": record.family,
                "size": record.size,
                "method": record.method,
                "objective": format_fraction(record.objective),
                "optimal": record.optimal,
                "wall_time": record.wall_time,
                "stats": stats,
                "trace": [[t, format_fraction(v)] for t, v in record.trace],
            }) + "\n")


def read_records_jsonl(path: str | Path) -> list[RunRecord]:
    records = []
    for line in Path(path).read_text().splitlines():
        data = json.loads(line)
        stats = None
        if data["stats"] is not None:
            stats = SearchStats(nodes_explored=data["stats"]["explored"],
                                nodes_created=data["stats"]["created"],
                                nodes_in_queue_at_end=data["stats"]["in_queue"],
                                nodes_pruned_or_chopped=data["stats"]["pruned_or_chopped"],
                                wall_time=data["wall_time"])
        records.append(RunRecord(
            instance_id=data["instance"], family=data["family"], size=data["size"],
            method=data["method"], objective=parse_fraction(data["objective"]),
            optimal=data["optimal"], stats=stats, wall_time=data["wall_time"],
            trace=[(t, parse_fraction(v)) for t, v in data["trace"]]))
    return records
