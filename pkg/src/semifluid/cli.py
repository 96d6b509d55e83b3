"""Command line front end: generate, solve, validate, compare, render.

Every subcommand is deterministic given its flags (seeds included) and
prints machine-parseable ``key = value`` lines; objectives appear both as
an exact fraction and as an approximate decimal.  Exit code 0 means the
operation fully succeeded.  The environment variable SEMIFLUID_OUT_DIR
sets the default output directory for files whose paths are not given.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bench, search
from .generator import EASY, HARD, GenSpec, generate
from .heuristics import Rule, ascent, pack
from .model import (read_instance, read_solution, validate, write_instance,
                    write_solution)
from .rational import format_decimal, format_fraction, parse_fraction
from .render import ReplayError, render_svg

METHOD_CHOICES = tuple(m.lower() for m in bench.ALL_METHODS)


def _out_dir(explicit: str | None) -> Path:
    if explicit is not None:
        return Path(explicit)
    return Path(os.environ.get("SEMIFLUID_OUT_DIR", "."))


def _print_objective(value: Fraction) -> None:
    print(f"objective = {format_fraction(value)} (~{format_decimal(value)})")


def _add_generate(subparsers) -> None:
    p = subparsers.add_parser("generate", help="write a random instance file")
    p.add_argument("--family", required=True, choices=(EASY, HARD))
    p.add_argument("--n", required=True, type=int, help="number of items")
    p.add_argument("--digits", type=int, default=2, choices=(2, 3),
                   help="digits in item lengths")
    p.add_argument("--factor", type=parse_fraction, default=Fraction(1),
                   help="hard only: total volume as a fraction of the container")
    p.add_argument("--value-digits", type=int, default=3)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", help="output file (default: derived from the flags)")
    p.add_argument("--out-dir", help="directory for derived output paths")


def _cmd_generate(args) -> int:
    spec = GenSpec(family=args.family, n_items=args.n, length_digits=args.digits,
                   volume_factor=args.factor, value_digits=args.value_digits,
                   seed=args.seed)
    result = generate(spec)
    if args.out is not None:
        path = Path(args.out)
    else:
        path = _out_dir(args.out_dir) / f"{spec.family}_{spec.n_items}_{spec.seed}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    write_instance(result.instance, path, header=result.header)
    print(f"instance = {path}")
    if result.layout is not None:
        _print_objective(result.layout.value)
    return 0


def _add_solve(subparsers) -> None:
    p = subparsers.add_parser("solve", help="run one method on one instance")
    p.add_argument("instance")
    p.add_argument("--method", required=True, choices=METHOD_CHOICES)
    p.add_argument("--time-limit", type=float, help="wall-clock seconds")
    p.add_argument("--max-queue", type=int)
    p.add_argument("--max-discrepancy", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--no-symmetry", action="store_true",
                   help="disable the symmetry-breaking rules (tree search only)")
    p.add_argument("--out", help="solution file (default: derived from the instance)")
    p.add_argument("--out-dir", help="directory for derived output paths")
    p.add_argument("--trace", help="write (elapsed, incumbent) TSV trace here")


def _cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    limits = search.Limits(time_limit=args.time_limit, max_queue=args.max_queue,
                           max_discrepancy=args.max_discrepancy,
                           max_nodes=args.max_nodes)
    record = bench.solve_with(args.method, instance, limits,
                              enforce_symmetry=not args.no_symmetry)
    print(f"method = {record.method}")
    _print_objective(record.objective)
    print(f"optimal = {'yes' if record.optimal else 'no'}")
    if record.stats is not None:
        s = record.stats
        print(f"nodes explored/created/in-queue/pruned = {s.nodes_explored} / "
              f"{s.nodes_created} / {s.nodes_in_queue_at_end} / "
              f"{s.nodes_pruned_or_chopped}")
    print(f"wall_time = {record.wall_time:.4f}")

    if args.out is not None:
        out = Path(args.out)
    else:
        stem = Path(args.instance).stem
        out = _out_dir(args.out_dir) / f"{stem}.{record.method.lower()}.sol"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_solution(record.solution, out,
                   header=[f"semifluid solution method={record.method} "
                           f"instance={Path(args.instance).name}"])
    print(f"solution = {out}")
    if args.trace is not None:
        lines = [f"{t:.6f}\t{format_fraction(v)}" for t, v in record.trace]
        Path(args.trace).write_text("\n".join(lines) + "\n")
        print(f"trace = {args.trace}")
    return 0


def _add_validate(subparsers) -> None:
    p = subparsers.add_parser("validate", help="check a solution file")
    p.add_argument("instance")
    p.add_argument("solution")


def _cmd_validate(args) -> int:
    instance = read_instance(args.instance)
    solution = read_solution(args.solution)
    violations = validate(instance, solution)
    if violations:
        for violation in violations:
            print(f"violation: {violation}")
        print(f"result = invalid ({len(violations)} violations)")
        return 1
    _print_objective(solution.value)
    print("result = ok")
    return 0


def _add_compare(subparsers) -> None:
    p = subparsers.add_parser("compare", help="run methods over instances and tabulate")
    p.add_argument("instances", nargs="+")
    p.add_argument("--methods", default="lbf,la,lds",
                   help="comma-separated subset of " + ",".join(METHOD_CHOICES))
    p.add_argument("--time-limit", type=float, default=5.0,
                   help="per-run wall-clock limit for tree searches")
    p.add_argument("--max-queue", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", help="where to write TSV/JSONL outputs")


def _cmd_compare(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for method in methods:
        if method.lower() not in METHOD_CHOICES:
            print(f"error: unknown method {method!r}", file=sys.stderr)
            return 2
    limits = search.Limits(time_limit=args.time_limit, max_queue=args.max_queue)
    result = bench.run_suite(args.instances, methods, limits, workers=args.workers)
    out_dir = _out_dir(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    matrix = bench.pairwise(result.records, methods)
    rows = bench.summarize(result.records)
    bench.write_pairwise_tsv(matrix, out_dir / "pairwise_wins.tsv",
                             out_dir / "pairwise_diff.tsv")
    bench.write_summary_tsv(rows, out_dir / "summary.tsv")
    bench.write_curves_tsv(rows, out_dir / "curves.tsv")
    bench.write_records_jsonl(result.records, out_dir / "records.jsonl")

    print("strict wins (row beats column):")
    print(bench._matrix_tsv(matrix.methods, matrix.wins), end="")
    print("difference (wins minus losses):")
    print(bench._matrix_tsv(matrix.methods, matrix.difference()), end="")
    print(f"outputs = {out_dir}")
    if result.failures:
        for instance_id, method, error in result.failures:
            print(f"failed run: {instance_id} {method}: {error}", file=sys.stderr)
        return 1
    return 0


def _add_render(subparsers) -> None:
    p = subparsers.add_parser("render", help="draw a solution's cross section as SVG")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--out", required=True)


def _cmd_render(args) -> int:
    instance = read_instance(args.instance)
    solution = read_solution(args.solution)
    violations = validate(instance, solution)
    if violations:
        for violation in violations:
            print(f"violation: {violation}", file=sys.stderr)
        print("error: refusing to render an invalid solution", file=sys.stderr)
        return 1
    try:
        svg = render_svg(instance, solution)
    except ReplayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    Path(args.out).write_text(svg)
    print(f"svg = {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="semifluid",
        description="Exact heuristics and tree search for packing semifluids "
                    "(length-rigid, otherwise fluid materials) into a container.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_generate(subparsers)
    _add_solve(subparsers)
    _add_validate(subparsers)
    _add_compare(subparsers)
    _add_render(subparsers)
    args = parser.parse_args(argv)
    command = {"generate": _cmd_generate, "solve": _cmd_solve,
               "validate": _cmd_validate, "compare": _cmd_compare,
               "render": _cmd_render}[args.command]
    try:
        return command(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
