"""Trajectory ingestion and the JSON result document."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve

BREAKPOINT_MODES = ("flags", "every-vertex", "every-k", "explicit-params")
SCHEMA = 1


class IngestError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _parse_csv(text: str):
    points, flags = [], []
    dim = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        flag = False
        if cells[-1] == "*":
            flag = True
            cells = cells[:-1]
        elif cells[-1].endswith("*"):
            flag = True
            cells[-1] = cells[-1][:-1].strip()
        try:
            row = [float(c) for c in cells]
        except ValueError:
            raise IngestError(f"non-numeric cell in {raw!r}", lineno) from None
        if not row or not all(math.isfinite(v) for v in row):
            raise IngestError(f"expected finite coordinates, got {raw!r}", lineno)
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise IngestError(f"expected {dim} coordinates, got {len(row)}", lineno)
        points.append(row)
        flags.append(flag)
    if not points:
        raise IngestError("no points found")
    return np.array(points), flags, None, None


def _parse_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if isinstance(doc, list):
        doc = {"points": doc}
    if not isinstance(doc, dict) or "points" not in doc:
        raise IngestError("JSON trajectory needs a 'points' list")
    rows = doc["points"]
    if not isinstance(rows, list) or not rows:
        raise IngestError("no points found")
    dim = None
    for k, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row):
            raise IngestError(f"point {k} is not a list of numbers")
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise IngestError(f"point {k} has {len(row)} coordinates, expected {dim}")
    pts = np.array(rows, dtype=float)
    if pts.shape[1] == 0 or not np.all(np.isfinite(pts)):
        raise IngestError("coordinates must be finite numbers")
    flagged = set(doc.get("flags", []))
    flags = [k in flagged for k in range(len(rows))]
    return pts, flags, doc.get("params"), doc.get("breakpoints")


def ingest(path, format: str | None = None, breakpoint_mode: str = "every-vertex", every: int | None = None,
           params=None) -> tuple[PolygonalCurve, BreakpointSet]:
    """Read a trajectory file and its breakpoints.

    CSV: one point per line, an optional trailing ``*`` marks a breakpoint.
    JSON: ``{"points": [...], "params": [...]?, "breakpoints": [...]?, "flags": [...]?}``.
    The end points are always breakpoints in ``flags`` and ``every-k`` modes.
    """
    path = Path(path)
    fmt = format or ("json" if path.suffix.lower() == ".json" else "csv")
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if breakpoint_mode not in BREAKPOINT_MODES:
        raise ValueError(f"unknown breakpoint mode {breakpoint_mode!r}")
    text = path.read_text()
    pts, flags, curve_params, file_bps = (_parse_json if fmt == "json" else _parse_csv)(text)
    try:
        if curve_params is not None:
            P = curves.build_curve(pts, curve_params)
            raw = np.asarray(curve_params, float)
        else:
            P = curves.build_curve(pts)
            raw = curves.chord_length_params(pts)
    except ValueError as exc:
        raise IngestError(str(exc)) from None

    if breakpoint_mode == "every-vertex":
        values = list(P.params)
    elif breakpoint_mode == "every-k":
        if every is None or every < 1:
            raise ValueError("every-k mode needs a step k >= 1")
        values = [raw[k] for k in range(0, len(raw), every)] + [raw[-1]]
    elif breakpoint_mode == "flags":
        values = [0.0] + [raw[k] for k, f in enumerate(flags) if f] + [1.0]
    else:
        given = params if params is not None else file_bps
        if given is None:
            raise IngestError("explicit-params mode needs breakpoint parameters")
        values = [float(v) for v in given]
        if any(not (0.0 <= v <= 1.0) for v in values):
            raise IngestError("breakpoints must lie in [0, 1]")
        values = [0.0] + values + [1.0]
    values = sorted(set(float(v) for v in values))
    if len(values) < 2 or P.n < 2:
        raise IngestError("fewer than two breakpoints")
    return P, BreakpointSet(values)


def write_csv(path, P: PolygonalCurve, bps: BreakpointSet | None = None) -> None:
    """Write vertices one per line, flagging those that sit on a breakpoint."""
    marked = set()
    if bps is not None:
        marked = {int(k) for k in np.flatnonzero(np.isin(P.params, bps.values))}
    lines = [",".join(repr(float(v)) for v in row) + (",*" if k in marked else "")
             for k, row in enumerate(P.vertices)]
    Path(path).write_text("\n".join(lines) + "\n")


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


@dataclass
class ResultDocument:
    config: dict
    centers: list  # vertex lists
    pairs: list  # selected candidate pairs
    intervals: list  # {"i", "j", "t_i", "t_j", "center"}
    labeled_radius: float
    verified_radius: float
    diagnostics: dict = field(default_factory=dict)
    seed: int = 0
    schema: int = SCHEMA

    @classmethod
    def from_result(cls, result, bps: BreakpointSet) -> "ResultDocument":
        cfg = result.config.echo() if result.config is not None else {}
        intervals = [{"i": i, "j": j, "t_i": bps.t(i), "t_j": bps.t(j), "center": q} for i, j, q in result.intervals]
        return cls(
            config=_plain(cfg),
            centers=[_plain(c.vertices) for c in result.centers],
            pairs=[list(map(int, p)) for p in result.pairs],
            intervals=_plain(intervals),
            labeled_radius=float(result.labeled_radius),
            verified_radius=float(result.verified_radius),
            diagnostics=_plain(result.diagnostics),
            seed=int(cfg.get("seed", 0)),
        )

    def center_curves(self) -> list:
        return [curves.build_curve(np.asarray(c, float)) for c in self.centers]

    def to_json(self) -> str:
        return json.dumps(_plain(asdict(self)), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported result schema {doc.get('schema')!r}")
        fields = {k: doc[k] for k in ("config", "centers", "pairs", "intervals", "labeled_radius",
                                      "verified_radius", "diagnostics", "seed", "schema")}
        return cls(**fields)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "ResultDocument":
        return cls.from_json(Path(path).read_text())
