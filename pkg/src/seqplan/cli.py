"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid waypoints,
3 unsupported regime (r < 2), 4 validation or probe failure, 5 a figure
was requested for d > 2 without choosing the plotted coordinates.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .configuration import ProblemSpec, UnsupportedRegimeError
from .harness import all_strata, check_strata, continuity_probe, deformation_safety_probe, realized_regions, semicontinuity_probe
from .planner import InvalidWaypointError, plan
from .problem_file import ProblemFileError, load_problem, report_dict, summary_dict, trajectory_csv

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_REGIME, EXIT_VALIDATION, EXIT_PROJECTION = range(6)

CONTINUITY_BOUND = 1e-3


def _err(msg: str) -> None:
    print(f"seqplan: {msg}", file=sys.stderr)


def _load_and_plan(args):
    """Returns ``(request, report)`` or an exit code."""
    try:
        request = load_problem(args.problem)
    except UnsupportedRegimeError as exc:
        _err(str(exc))
        return EXIT_REGIME
    except ProblemFileError as exc:
        _err(str(exc))
        return EXIT_PARSE
    try:
        report = plan(request, validation_samples=args.validation_samples)
    except InvalidWaypointError as exc:
        _err(str(exc))
        return EXIT_INVALID
    return request, report


def _parse_axes(text: str | None, d: int) -> tuple[int, int] | None:
    if text is None:
        return None
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 2 or not all(1 <= p <= d for p in parts) or parts[0] == parts[1]:
        raise ValueError(f"--axes needs two distinct coordinates in 1..{d}, got {text!r}")
    return parts[0] - 1, parts[1] - 1


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_plan(args) -> int:
    result = _load_and_plan(args)
    if isinstance(result, int):
        return result
    request, report = result
    if args.format == "csv":
        _write(trajectory_csv(report, args.samples), args.output)
        summary = json.dumps(summary_dict(request, report), indent=2) + "\n"
        if args.output is None:
            sys.stderr.write(summary)
        else:
            Path(args.output).with_suffix(".summary.json").write_text(summary, encoding="utf-8")
    else:
        _write(json.dumps(report_dict(request, report, args.samples)) + "\n", args.output)
    if args.figure:
        from .figures import render_trajectories

        if request.spec.d > 2:
            _err("figure skipped: use the svg command with --axes for d > 2")
        else:
            render_trajectories(request.spec, report.path, request.waypoints, args.figure)
    if not report.validation.passed:
        _err(f"validation failed: {report.validation}")
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_svg(args) -> int:
    result = _load_and_plan(args)
    if isinstance(result, int):
        return result
    request, report = result
    d = request.spec.d
    try:
        axes = _parse_axes(args.axes, d)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_PARSE
    if axes is None:
        if d > 2:
            _err(f"d={d}: pass --axes i,j to choose the plotted coordinates")
            return EXIT_PROJECTION
        axes = (0, 1)
    from .figures import render_trajectories

    render_trajectories(
        request.spec, report.path, request.waypoints, args.output,
        samples=args.samples, axes=axes, width=args.width, height=args.height,
    )
    return EXIT_OK if report.validation.passed else EXIT_VALIDATION


def _spec_from_flags(args) -> ProblemSpec:
    return ProblemSpec(args.d, args.k, args.r, args.n)


def cmd_regions(args) -> int:
    try:
        spec = _spec_from_flags(args)
    except UnsupportedRegimeError as exc:
        _err(str(exc))
        return EXIT_REGIME
    except ValueError as exc:
        _err(str(exc))
        return EXIT_PARSE
    found = realized_regions(spec, seed=args.seed, trials=args.trials)
    lo, hi = spec.region_range
    for ell, strata in found.items():
        print(f"region {ell}: strata {list(strata)}")
    print(f"count {len(found)} (expected nk+1 = {spec.region_count}, range [{lo}, {hi}])")
    ok = len(found) == spec.region_count and set(found) == set(range(lo, hi + 1))
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_probe(args) -> int:
    try:
        spec = _spec_from_flags(args)
    except UnsupportedRegimeError as exc:
        _err(str(exc))
        return EXIT_REGIME
    except ValueError as exc:
        _err(str(exc))
        return EXIT_PARSE

    if args.probe == "continuity":
        try:
            tuples = [check_strata(spec, [int(s) for s in args.strata.split(",")])] if args.strata else all_strata(spec)
        except ValueError as exc:
            _err(str(exc))
            return EXIT_PARSE
        worst = 0.0
        for m, strata in enumerate(tuples):
            value = continuity_probe(spec, strata, args.delta, args.trials, seed=(args.seed, m))
            print(f"strata {list(strata)}: sup distance {value!r}")
            worst = max(worst, value)
        print(f"max sup distance {worst!r} (bound {CONTINUITY_BOUND})")
        return EXIT_OK if worst <= CONTINUITY_BOUND else EXIT_VALIDATION
    if args.probe == "semicontinuity":
        count = semicontinuity_probe(spec, args.trials, seed=args.seed)
        print(f"violations {count}")
        return EXIT_OK if count == 0 else EXIT_VALIDATION
    clearance = deformation_safety_probe(spec, args.trials, args.t_samples, seed=args.seed)
    print(f"min clearance {clearance!r}")
    return EXIT_OK if clearance > 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqplan",
        description="Sequential collision-free motion planning for point robots among point obstacles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--validation-samples", type=int, default=10_000)

    p = sub.add_parser("plan", help="plan a path and write the trajectory report")
    problem_args(p)
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--samples", type=int, default=201, help="uniform trajectory samples (breakpoints are added)")
    p.add_argument("--figure", help="also render the trajectories to this image file (d = 2 only)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("svg", help="render the planned trajectories as SVG")
    problem_args(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--samples", type=int, default=801)
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=600)
    p.add_argument("--axes", help="two 1-based coordinates to plot, e.g. 1,3 (required when d > 2)")
    p.set_defaults(func=cmd_svg)

    def spec_args(p):
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--r", type=int, default=2)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("regions", help="exhibit the realizable region indices")
    spec_args(p)
    p.add_argument("--trials", type=int, default=200, help="extra requests with random strata")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("probe", help="run a property probe")
    p.add_argument("probe", choices=("continuity", "semicontinuity", "safety"))
    spec_args(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--strata", help="comma-separated strata tuple (continuity; default: all)")
    p.add_argument("--t-samples", type=int, default=257)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
