"""Command-line report runner.

Exit codes: 0 when every check lands in a benign status and matches its
declared expectation, 1 on any violation, theorem inconsistency, or
expectation mismatch, 2 on configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import sys

from .errors import GeoinvexError, SchemaError, UnknownProblem
from .problems import builtin_names, load_problem
from .report import run_suite, to_json, witnesses_csv
from .sampling import VIOLATION_TOL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="geoinvex",
        description="Run verification suites for invexity/monotonicity classes and write a JSON report.",
    )
    src = p.add_mutually_exclusive_group()
    src.add_argument("--problem", help="built-in problem name (see --list-problems)")
    src.add_argument("--config", help="path to a JSON config document, or '-' for stdin")
    p.add_argument("--list-problems", action="store_true", help="list built-in problems and exit")
    p.add_argument("--suite", help="comma-separated check ids overriding the problem's suite")
    p.add_argument("--seed", type=int, help="sampling seed")
    p.add_argument("--grid", type=int, help="grid points per axis")
    p.add_argument("--box", help="sampling box: 'lo,hi' for all axes or 'lo1,hi1,lo2,hi2'")
    p.add_argument("--m", type=int, help="order of the strength penalty")
    p.add_argument("--delta", type=float, help="strength constant for construction checks")
    p.add_argument("--tol", type=float, default=VIOLATION_TOL, help="violation tolerance (default 1e-9)")
    p.add_argument("--out", help="write the JSON report to this path instead of stdout")
    p.add_argument("--witnesses", help="also write per-check witnesses as CSV to this path")
    p.add_argument("--geodesic-mode", choices=["eta", "from_v", "from_u"],
                   help="override the geodesic mode of chord checks in the suite")
    p.add_argument("--dominance-mode", choices=["strict", "pareto"],
                   help="reading of componentwise '<' in minimizer/inequality checks")
    p.add_argument("--scan-grid", type=int, help="grid points per axis for the equivalence scan")
    return p


def _parse_box(text: str):
    vals = [float(x) for x in text.split(",")]
    if len(vals) == 2:
        return [vals]  # broadcast to every axis downstream
    if len(vals) % 2 != 0:
        raise SchemaError("box needs an even number of values", field="box")
    return [[vals[i], vals[i + 1]] for i in range(0, len(vals), 2)]


def _overrides(args) -> dict:
    ov = {}
    if args.seed is not None:
        ov["seed"] = args.seed
    if args.grid is not None:
        ov["grid"] = args.grid
    if args.scan_grid is not None:
        ov["scan_grid"] = args.scan_grid
    if args.m is not None:
        ov["m"] = args.m
    if args.delta is not None:
        ov["delta"] = args.delta
    if args.box is not None:
        box = _parse_box(args.box)
        ov["box"] = box
    if args.suite:
        ov["suite"] = [s.strip() for s in args.suite.split(",") if s.strip()]
    if args.dominance_mode:
        ov["dominance_mode"] = args.dominance_mode
    return ov


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.list_problems:
        for name in builtin_names():
            print(name)
        return 0

    if not args.problem and not args.config:
        parser.print_usage(sys.stderr)
        print("geoinvex: error: one of --problem or --config is required", file=sys.stderr)
        return 2

    try:
        source = args.problem
        if args.config:
            source = sys.stdin.read() if args.config == "-" else _read_text(args.config)
        ov = _overrides(args)
        if "box" in ov and len(ov["box"]) == 1:
            # broadcast a single 'lo,hi' to the chart dimension
            probe = load_problem(source, {k: v for k, v in ov.items() if k != "box"})
            ov["box"] = [ov["box"][0]] * probe.chart.dim
        problem = load_problem(source, ov)
        if args.geodesic_mode:
            problem = _override_geodesic_mode(problem, args.geodesic_mode)
    except (UnknownProblem, SchemaError) as exc:
        print(f"geoinvex: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"geoinvex: i/o error reading config: {exc}", file=sys.stderr)
        return 2

    report = run_suite(problem, tol=args.tol)
    text = to_json(report)

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text + "\n")
        else:
            print(text)
        if args.witnesses:
            with open(args.witnesses, "w", encoding="utf-8") as f:
                f.write(witnesses_csv(report))
    except OSError as exc:
        print(f"geoinvex: i/o error writing output: {exc}", file=sys.stderr)
        return 2

    return int(report["exit_code"])


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _override_geodesic_mode(problem, mode: str):
    from dataclasses import replace

    specs = []
    for spec in problem.suite:
        if spec.kind == "preinvex":
            opts = dict(spec.options)
            opts["mode"] = mode
            specs.append(replace(spec, options=opts))
        else:
            specs.append(spec)
    return replace(problem, suite=tuple(specs))


if __name__ == "__main__":
    raise SystemExit(main())
