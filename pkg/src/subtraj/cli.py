"""Command line interface.

Exit codes: 0 success, 1 infeasible or failed verification, 2 usage error,
3 input/output error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import curves
from .clustering import ALGORITHMS, ClusteringConfig, cluster, phi
from .cover import InfeasibleError
from .frechet import compute_frechet, decide_frechet
from .io import BREAKPOINT_MODES, IngestError, ResultDocument, ingest
from .svg import emit_svg

OK, FAILED, USAGE, IO_ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _input_args(p):
    p.add_argument("--input", required=True, help="trajectory file (CSV or JSON)")
    p.add_argument("--format", choices=("csv", "json"), help="input format (default: from file extension)")
    p.add_argument("--breakpoints", choices=BREAKPOINT_MODES, default="every-vertex")
    p.add_argument("--every", type=int, help="step for --breakpoints every-k")
    p.add_argument("--breakpoint-params", help="comma-separated parameters for --breakpoints explicit-params")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subtraj", description="Subtrajectory clustering under the Fréchet distance.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cluster", help="compute centers covering the trajectory")
    _input_args(c)
    c.add_argument("--delta", type=float, required=True)
    c.add_argument("--ell", type=int, default=2, help="center complexity")
    c.add_argument("--algorithm", choices=ALGORITHMS, default="greedy-r0")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", help="result JSON path (default: stdout)")
    c.add_argument("--svg", help="also write an SVG rendering (2-D input only)")

    v = sub.add_parser("verify", help="check a result's coverage certificate")
    _input_args(v)
    v.add_argument("--result", required=True)
    v.add_argument("--radius", type=float, help="radius to check (default: the labeled radius)")

    f = sub.add_parser("phi", help="clustering cost of a result's centers")
    _input_args(f)
    f.add_argument("--result", required=True)
    f.add_argument("--tol", type=float)

    d = sub.add_parser("frechet", help="Fréchet distance between two curves")
    d.add_argument("first")
    d.add_argument("second")
    d.add_argument("--format", choices=("csv", "json"))
    d.add_argument("--tol", type=float)
    return parser


def _load(args):
    params = None
    if getattr(args, "breakpoint_params", None):
        try:
            params = [float(x) for x in args.breakpoint_params.split(",")]
        except ValueError:
            raise _UsageError("--breakpoint-params must be comma-separated numbers") from None
    return ingest(args.input, args.format, args.breakpoints, every=args.every, params=params)


def check_certificate(P, doc: ResultDocument, radius: float) -> tuple[bool, str]:
    centers = doc.center_curves()
    cursor = 0.0
    for iv in sorted(doc.intervals, key=lambda r: (r["t_i"], r["t_j"])):
        q = iv["center"]
        if not 0 <= q < len(centers):
            return False, f"interval ({iv['i']}, {iv['j']}) names missing center {q}"
        if iv["t_i"] > cursor:
            return False, f"gap in coverage at parameter {cursor!r}"
        if not decide_frechet(curves.subcurve(P, iv["t_i"], iv["t_j"]), centers[q], radius):
            return False, f"interval ({iv['i']}, {iv['j']}) is farther than {radius!r} from center {q}"
        cursor = max(cursor, iv["t_j"])
    if cursor < 1.0:
        return False, f"coverage stops at parameter {cursor!r}"
    return True, "ok"


def _cmd_cluster(args) -> int:
    P, bps = _load(args)
    try:
        cfg = ClusteringConfig(args.delta, args.ell, args.algorithm, args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    try:
        result = cluster(P, bps, cfg)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return FAILED
    doc = ResultDocument.from_result(result, bps)
    text = doc.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"{len(doc.centers)} centers, labeled radius {doc.labeled_radius:g}, "
              f"verified radius {doc.verified_radius:g}")
    else:
        sys.stdout.write(text)
    if args.svg:
        if P.dim != 2:
            print(f"warning: SVG output needs 2-D input, got dimension {P.dim}; skipped", file=sys.stderr)
        else:
            emit_svg(P, bps, doc, args.svg)
    return OK


def _cmd_verify(args) -> int:
    P, _ = _load(args)
    doc = _load_result(args.result)
    radius = doc.labeled_radius if args.radius is None else args.radius
    ok, why = check_certificate(P, doc, radius)
    print(("pass" if ok else "fail") + f": {why}")
    return OK if ok else FAILED


def _load_result(path) -> ResultDocument:
    try:
        return ResultDocument.load(path)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise IngestError(f"cannot read result {path}: {exc}") from None


def _cmd_phi(args) -> int:
    P, bps = _load(args)
    centers = _load_result(args.result).center_curves()
    if not centers:
        print("result has no centers", file=sys.stderr)
        return FAILED
    print(repr(phi(P, bps, centers, args.tol)))
    return OK


def _read_curve(path, fmt):
    return ingest(path, fmt, "every-vertex")[0]


def _cmd_frechet(args) -> int:
    A = _read_curve(args.first, args.format)
    B = _read_curve(args.second, args.format)
    print(repr(compute_frechet(A, B, args.tol)))
    return OK


COMMANDS = {"cluster": _cmd_cluster, "verify": _cmd_verify, "phi": _cmd_phi, "frechet": _cmd_frechet}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (OSError, IngestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run_cli())
