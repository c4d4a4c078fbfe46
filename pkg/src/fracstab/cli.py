"""Command-line front end: classify, curve, qscan, roots, simulate.

Every command prints one structured record to stdout (mirrored as single-line
JSON with --json); the data-producing commands write CSV with 17 significant
digits (full double round-trip) plus a run manifest JSON next to each output
file. Exit codes: 0 stable/success, 1 unstable, 2 marginal/unclassified,
64 usage, 65 data error, 70 internal.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

from . import __version__
from .chareq import CharParams, SystemSpec
from .classify import VerdictKind, classify, qscan_verdicts
from .curve import CurveParams, sample_curve
from .errors import (
    BracketFailure,
    ContourThroughRoot,
    DeltaNotPositive,
    DeltaZeroUnclassified,
    DomainError,
    NotDecaying,
    RefinementLimit,
    StepCap,
)
from .roots import count_unstable_roots
from .simulate import estimate_decay, integrate

__all__ = ["main", "RunManifest", "VERDICT_EXIT_CODES", "EXIT_USAGE", "EXIT_DATA", "EXIT_INTERNAL"]

EXIT_STABLE = 0
EXIT_UNSTABLE = 1
EXIT_MARGINAL = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

VERDICT_EXIT_CODES = {
    VerdictKind.StableAllOrders: EXIT_STABLE,
    VerdictKind.StableForOrders: EXIT_STABLE,
    VerdictKind.UnstableAllOrders: EXIT_UNSTABLE,
    VerdictKind.UnstableForOrders: EXIT_UNSTABLE,
    VerdictKind.MarginalOnCurve: EXIT_MARGINAL,
}


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written next to each emitted data file."""

    command: str
    inputs: dict
    outputs: list
    tool_version: str
    timestamp: str


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _print_record(record: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(_json_ready(record)))
        return
    parts = []
    for key, value in record.items():
        if value is None:
            continue
        if isinstance(value, float):
            parts.append(f"{key}={_fmt(value)}")
        else:
            parts.append(f"{key}={value}")
    print(" ".join(parts))


def _write_manifest(out_path: str, command: str, args: argparse.Namespace) -> None:
    skip = {"func", "command", "json"}
    inputs = {
        k: _json_ready(v)
        for k, v in vars(args).items()
        if k not in skip and not callable(v)
    }
    manifest = RunManifest(
        command=command,
        inputs=inputs,
        outputs=[out_path],
        tool_version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh)
        fh.write("\n")


def _err(message: str) -> None:
    print(f"fracstab: {message}", file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the documented usage code is 64
    def error(self, message):
        self.print_usage(sys.stderr)
        _err(f"error: {message}")
        raise SystemExit(EXIT_USAGE)


def _resolve_delta(args) -> float:
    """--delta wins; otherwise derive det(A) from the full matrix."""
    if getattr(args, "delta", None) is not None:
        return args.delta
    if args.a12 is None or args.a21 is None:
        raise ValueError("provide either --delta or both --a12 and --a21")
    return args.a11 * args.a22 - args.a12 * args.a21


def _cmd_classify(args) -> int:
    spec = SystemSpec(args.a11, args.a12, args.a21, args.a22, args.q1, args.q2)
    verdict = classify(spec)
    record = {
        "kind": verdict.kind.value,
        "reason": verdict.reason.value,
        "margin": verdict.margin,
        "decay_exponent": verdict.decay_exponent,
        "phi_value": verdict.phi_value,
        "delta": spec.delta(),
    }
    _print_record(record, args.json)
    return VERDICT_EXIT_CODES[verdict.kind]


def _cmd_curve(args) -> int:
    cp = CurveParams(args.delta, args.q1, args.q2)
    points = sample_curve(cp, args.omega_min, args.omega_max, args.n)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega,a11,a22\n")
        for pt in points:
            fh.write(f"{_fmt(pt.omega)},{_fmt(pt.a11)},{_fmt(pt.a22)}\n")
    _write_manifest(args.out, "curve", args)
    _print_record({"rows": len(points), "out": args.out}, args.json)
    return EXIT_STABLE


def _cmd_qscan(args) -> int:
    delta = _resolve_delta(args)
    grid = qscan_verdicts(args.a11, args.a22, delta, args.grid)
    lines = ["q1,q2,stable"]
    n = args.grid
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            lines.append(f"{_fmt(j / n)},{_fmt(k / n)},{int(grid[j - 1, k - 1])}")
    body = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
        _write_manifest(args.out, "qscan", args)
    else:
        sys.stdout.write(body)
    record = {
        "cells": int(n * n),
        "stable": int((grid == 1).sum()),
        "unstable": int((grid == 0).sum()),
        "marginal": int((grid == 2).sum()),
        "out": args.out,
    }
    _print_record(record, args.json)
    return EXIT_STABLE


def _cmd_roots(args) -> int:
    delta = _resolve_delta(args)
    params = CharParams(args.a11, args.a22, delta, args.q1, args.q2)
    try:
        report = count_unstable_roots(params)
    except DeltaNotPositive as exc:
        _err(f"data error: {exc}; delta <= 0 systems are classified directly, "
             "see 'fracstab classify'")
        return EXIT_DATA
    record = {
        "n_unstable": report.n_unstable,
        "winding_turns": report.winding_turns,
        "l": report.bounds.l,
        "L": report.bounds.L,
        "contour_samples": report.contour_samples,
        "refinement_depth": report.refinement_depth,
    }
    _print_record(record, args.json)
    return EXIT_STABLE if report.n_unstable == 0 else EXIT_UNSTABLE


def _cmd_simulate(args) -> int:
    spec = SystemSpec(args.a11, args.a12, args.a21, args.a22, args.q1, args.q2)
    traj = integrate(spec, (args.x0, args.y0), args.t_end, args.h)
    if args.out:
        norms = traj.norms()
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,x,y,norm\n")
            for i in range(len(traj.times)):
                fh.write(
                    f"{_fmt(traj.times[i])},{_fmt(traj.states[i, 0])},"
                    f"{_fmt(traj.states[i, 1])},{_fmt(norms[i])}\n"
                )
        _write_manifest(args.out, "simulate", args)
    try:
        est = estimate_decay(traj, args.tail_fraction)
    except NotDecaying as exc:
        record = {
            "decaying": False,
            "overflowed": traj.overflowed,
            "final_norm": float(traj.norms()[-1]),
            "detail": str(exc),
            "out": args.out,
        }
        _print_record(record, args.json)
        return EXIT_UNSTABLE
    record = {
        "decaying": True,
        "slope": est.slope,
        "tail_fraction": est.tail_fraction,
        "r_squared": est.r_squared,
        "overflowed": traj.overflowed,
        "out": args.out,
    }
    _print_record(record, args.json)
    return EXIT_STABLE


def _add_matrix_flags(p: argparse.ArgumentParser, full: bool) -> None:
    p.add_argument("--a11", type=float, required=True)
    p.add_argument("--a22", type=float, required=True)
    if full:
        p.add_argument("--a12", type=float, required=True)
        p.add_argument("--a21", type=float, required=True)
    else:
        p.add_argument("--a12", type=float, default=None)
        p.add_argument("--a21", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)


def _add_order_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q1", type=float, required=True)
    p.add_argument("--q2", type=float, required=True)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="mirror the record as single-line JSON")
    common.add_argument("--seed", type=int, default=None,
                        help="recorded in manifests; reserved for randomized subcommands")

    parser = _Parser(prog="fracstab",
                     description="Stability engine for 2D multi-order fractional systems")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common],
                       help="decide stability of a system")
    _add_matrix_flags(p, full=True)
    _add_order_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("curve", parents=[common],
                       help="sample the critical curve to CSV")
    p.add_argument("--delta", type=float, required=True)
    _add_order_flags(p)
    p.add_argument("--omega-min", type=float, required=True)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("qscan", parents=[common],
                       help="stability raster over order pairs (q1, q2)")
    _add_matrix_flags(p, full=False)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_qscan)

    p = sub.add_parser("roots", parents=[common],
                       help="count closed-right-half-plane characteristic roots")
    _add_matrix_flags(p, full=False)
    _add_order_flags(p)
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("simulate", parents=[common],
                       help="integrate the IVP and estimate the decay slope")
    _add_matrix_flags(p, full=True)
    _add_order_flags(p)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DeltaNotPositive, DomainError) as exc:
        _err(f"data error: {exc}")
        return EXIT_DATA
    except (DeltaZeroUnclassified, ContourThroughRoot) as exc:
        _err(f"unclassified: {exc}")
        return EXIT_MARGINAL
    except StepCap as exc:
        _err(f"usage error: {exc}")
        return EXIT_USAGE
    except NotDecaying as exc:
        _err(f"not decaying: {exc}")
        return EXIT_UNSTABLE
    except ValueError as exc:
        _err(f"usage error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _err(f"data error: {exc}")
        return EXIT_DATA
    except (BracketFailure, RefinementLimit) as exc:
        _err(f"internal error: {exc}")
        return EXIT_INTERNAL
    except Exception as exc:  # last-resort guard so scripts see a stable code
        _err(f"internal error: {type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
