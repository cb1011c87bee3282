"""Polygonal curves, breakpoints and subcurve extraction.

Breakpoint indices are 1-based throughout the package: a BreakpointSet with
values t_1..t_m has ground set Z = {1, ..., m-1}, and element z is the piece
[t_z, t_{z+1}].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# Absolute tolerance for point equality and interval tests.
EPS = 1e-9


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("a curve needs at least one point")
    if arr.shape[1] == 0:
        raise ValueError("points must have at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def chord_length_params(points) -> np.ndarray:
    """Cumulative Euclidean length normalized to [0, 1]."""
    pts = _as_points(points)
    if len(pts) == 1:
        return np.zeros(1)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total <= 0.0:
        return np.zeros(len(pts))
    cum /= total
    cum[-1] = 1.0
    return cum


@dataclass(frozen=True, eq=False)
class PolygonalCurve:
    vertices: np.ndarray
    params: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        s = np.array(self.params, dtype=float)
        v.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "params", s)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"PolygonalCurve(n={self.n}, dim={self.dim})"

    def same_as(self, other: "PolygonalCurve", tol: float = EPS) -> bool:
        return (
            self.vertices.shape == other.vertices.shape
            and np.allclose(self.vertices, other.vertices, atol=tol, rtol=0)
            and np.allclose(self.params, other.params, atol=tol, rtol=0)
        )


def _dedup(pts: np.ndarray, params: np.ndarray, eps: float):
    """Drop consecutive duplicates; the final vertex keeps parameter 1."""
    keep_pts = [pts[0]]
    keep_s = [params[0]]
    for p, s in zip(pts[1:], params[1:]):
        if np.linalg.norm(p - keep_pts[-1]) <= eps:
            continue
        keep_pts.append(p)
        keep_s.append(s)
    if len(keep_pts) > 1:
        keep_s[-1] = params[-1]
    else:
        keep_s = [0.0]
    return np.array(keep_pts), np.array(keep_s)


def build_curve(points, params: Sequence[float] | None = None, eps: float = EPS) -> PolygonalCurve:
    """Build a curve with chord-length parameters, or explicit ``params``.

    Consecutive duplicate points are removed. Identical input points collapse
    to a single-point curve unless explicit params ask for more than one vertex.
    """
    pts = _as_points(points)
    if params is None:
        s = chord_length_params(pts)
    else:
        s = np.asarray(params, dtype=float)
        if s.shape != (len(pts),):
            raise ValueError("need exactly one parameter per point")
        if len(pts) == 1:
            if s[0] != 0.0:
                raise ValueError("a single-point curve has parameter 0")
        else:
            if s[0] != 0.0 or s[-1] != 1.0:
                raise ValueError("explicit params must start at 0 and end at 1")
            if np.any(np.diff(s) <= 0):
                raise ValueError("explicit params must be strictly increasing")
    v, s = _dedup(pts, s, eps)
    if params is not None and len(pts) > 1 and len(v) == 1:
        raise ValueError("all points identical but a multi-vertex curve was requested")
    return PolygonalCurve(v, s)


def point_curve(point) -> PolygonalCurve:
    return PolygonalCurve(np.asarray(point, dtype=float).reshape(1, -1), np.zeros(1))


def segment_curve(a, b, eps: float = EPS) -> PolygonalCurve:
    return build_curve(np.vstack([np.asarray(a, float), np.asarray(b, float)]), eps=eps)


def _check_t(t: float) -> None:
    if not (-EPS <= t <= 1.0 + EPS):
        raise ValueError(f"parameter {t} outside [0, 1]")


def locate(P: PolygonalCurve, t: float) -> tuple[int, float]:
    """Edge index and local ratio of parameter t (edge e spans params[e]..params[e+1])."""
    if P.n == 1:
        return 0, 0.0
    t = min(max(t, 0.0), 1.0)
    e = int(np.searchsorted(P.params, t, side="right")) - 1
    e = min(max(e, 0), P.n - 2)
    s0, s1 = P.params[e], P.params[e + 1]
    lam = 0.0 if s1 <= s0 else (t - s0) / (s1 - s0)
    return e, min(max(lam, 0.0), 1.0)


def point_at(P: PolygonalCurve, t: float) -> np.ndarray:
    _check_t(t)
    if P.n == 1:
        return P.vertices[0].copy()
    idx = np.searchsorted(P.params, t)
    if idx < P.n and P.params[idx] == t:
        return P.vertices[idx].copy()
    e, lam = locate(P, t)
    return (1.0 - lam) * P.vertices[e] + lam * P.vertices[e + 1]


def subcurve(P: PolygonalCurve, a: float, b: float, eps: float = EPS) -> PolygonalCurve:
    """P[a, b] with interpolated endpoints and params mapped affinely to [0, 1]."""
    _check_t(a)
    _check_t(b)
    if a > b:
        raise ValueError("subcurve needs a <= b")
    a = min(max(a, 0.0), 1.0)
    b = min(max(b, 0.0), 1.0)
    if b - a <= 0.0 or P.n == 1:
        return point_curve(point_at(P, a))
    inner = (P.params > a) & (P.params < b)
    pts = np.vstack([point_at(P, a), P.vertices[inner], point_at(P, b)])
    s = np.concatenate([[0.0], (P.params[inner] - a) / (b - a), [1.0]])
    v, s = _dedup(pts, s, eps)
    return PolygonalCurve(v, s)


def reverse(P: PolygonalCurve) -> PolygonalCurve:
    return PolygonalCurve(P.vertices[::-1], (1.0 - P.params[::-1]) if P.n > 1 else P.params)


def concat(*curves: PolygonalCurve, eps: float = EPS) -> PolygonalCurve:
    """Join curves end to start; parameters follow chord length of the result."""
    parts = [curves[0].vertices]
    for c in curves[1:]:
        if np.linalg.norm(c.start - parts[-1][-1]) > 1e-6 * (1.0 + np.abs(c.start).max()):
            raise ValueError("curves do not share endpoints")
        parts.append(c.vertices[1:])
    return build_curve(np.vstack(parts), eps=eps)


def length(P: PolygonalCurve) -> float:
    if P.n == 1:
        return 0.0
    return float(np.linalg.norm(np.diff(P.vertices, axis=0), axis=1).sum())


@dataclass(frozen=True, eq=False)
class BreakpointSet:
    values: np.ndarray = field()

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or len(v) < 2:
            raise ValueError("need at least two breakpoints")
        if v[0] != 0.0 or v[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(v) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def ground(self) -> range:
        return range(1, self.m)

    def t(self, i: int) -> float:
        if not 1 <= i <= self.m:
            raise IndexError(f"breakpoint index {i} out of range 1..{self.m}")
        return float(self.values[i - 1])

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"BreakpointSet(m={self.m})"


def breakpoint_points(P: PolygonalCurve, bps: BreakpointSet) -> np.ndarray:
    """Array (m, d) of P(t_i); row i-1 holds breakpoint i."""
    return np.array([point_at(P, t) for t in bps.values])


def piece(P: PolygonalCurve, bps: BreakpointSet, i: int, j: int) -> PolygonalCurve:
    """P[t_i, t_j]."""
    return subcurve(P, bps.t(i), bps.t(j))


def vertex_breakpoints(P: PolygonalCurve) -> BreakpointSet:
    if P.n < 2:
        raise ValueError("a single-point curve has no pieces")
    return BreakpointSet(P.params)


def bbox_diagonal(*curves: PolygonalCurve) -> float:
    pts = np.vstack([c.vertices for c in curves])
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
