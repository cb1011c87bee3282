"""Continuous Fréchet distance via free-space diagrams.

The first curve runs along the horizontal axis of a diagram and the second
along the vertical one. ``left[s, t]`` is the free part of the vertical line
through vertex s of the first curve, restricted to edge t of the second;
``bottom[s, t]`` is the free part of the horizontal line through vertex t of
the second curve, restricted to edge s of the first. Intervals are in local
edge coordinates, NaN marks an empty interval.

Thresholds are inflated by the tolerance ``eps`` so that tangencies count
as feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve

Interval = tuple  # (lo, hi) in [0, 1], or None when empty


def _verts(P: PolygonalCurve) -> np.ndarray:
    # A single point behaves like a zero-length edge.
    v = P.vertices
    return np.vstack([v, v]) if len(v) == 1 else v


def edge_intervals(points, starts, ends, r: float) -> np.ndarray:
    """Parameters along each edge within distance r of each point.

    Returns an array of shape (len(points), len(starts), 2).
    """
    pts = np.asarray(points, float)
    a = np.asarray(starts, float)
    d = np.asarray(ends, float) - a
    A = np.einsum("ed,ed->e", d, d)
    w = a[None, :, :] - pts[:, None, :]
    B = np.einsum("ked,ed->ke", w, d)
    C = np.einsum("ked,ked->ke", w, w) - r * r
    out = np.full(B.shape + (2,), np.nan)
    flat = A <= 1e-300
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = B * B - A[None, :] * C
        sq = np.sqrt(np.maximum(disc, 0.0))
        lo = (-B - sq) / A[None, :]
        hi = (-B + sq) / A[None, :]
    lo = np.maximum(lo, 0.0)
    hi = np.minimum(hi, 1.0)
    ok = (disc >= 0.0) & (lo <= hi) & ~flat[None, :]
    out[..., 0] = np.where(ok, lo, np.nan)
    out[..., 1] = np.where(ok, hi, np.nan)
    if flat.any():
        near = (C <= 0.0) & flat[None, :]
        out[..., 0] = np.where(near, 0.0, out[..., 0])
        out[..., 1] = np.where(near, 1.0, out[..., 1])
    return out


def point_segment_interval(p, a, b, r: float) -> Interval:
    iv = edge_intervals(np.asarray(p, float)[None], np.asarray(a, float)[None], np.asarray(b, float)[None], r)[0, 0]
    return None if np.isnan(iv[0]) else (float(iv[0]), float(iv[1]))


def _to_lists(arr: np.ndarray) -> list:
    lo = arr[..., 0].tolist()
    hi = arr[..., 1].tolist()
    return [
        [None if l != l else (l, h) for l, h in zip(lrow, hrow)]
        for lrow, hrow in zip(lo, hi)
    ]


@dataclass
class FreeSpaceDiagram:
    P: PolygonalCurve
    Q: PolygonalCurve
    delta: float
    left: np.ndarray  # (nP, nQ - 1, 2)
    bottom: np.ndarray  # (nP - 1, nQ, 2)

    def __post_init__(self):
        self._left = _to_lists(self.left)
        self._bottom = _to_lists(self.bottom)

    @property
    def columns(self) -> int:
        return self.bottom.shape[0]

    @property
    def rows(self) -> int:
        return self.left.shape[1]

    def sweep(self, entries: list, record: bool = False):
        """Propagate reachability upward from bottom-row entry intervals.

        ``entries[c]`` is a reachable interval on the bottom boundary of
        column c (or None). Returns the reachable intervals on the top
        boundary, one per column; with ``record`` a ReachabilityFront as well.
        """
        LF, BF = self._left, self._bottom
        nc, nr = self.columns, self.rows
        cur = list(entries)
        first = next((c for c, e in enumerate(cur) if e is not None), nc)
        front = ReachabilityFront([[None] * nr for _ in range(nc + 1)], [[None] * (nr + 1) for _ in range(nc)]) if record else None
        if record:
            for c in range(nc):
                front.bottom[c][0] = cur[c]
        for j in range(nr):
            nxt = [None] * nc
            left = None
            alive = False
            for i in range(first, nc):
                b = cur[i]
                if b is None and left is None:
                    continue
                lf = LF[i + 1][j]
                if b is not None:
                    new_left = lf
                elif lf is not None and max(left[0], lf[0]) <= lf[1]:
                    new_left = (max(left[0], lf[0]), lf[1])
                else:
                    new_left = None
                bf = BF[i][j + 1]
                if bf is not None:
                    if left is not None:
                        nxt[i] = bf
                    else:
                        lo = max(b[0], bf[0])
                        if lo <= bf[1]:
                            nxt[i] = (lo, bf[1])
                    if nxt[i] is not None:
                        alive = True
                left = new_left
                if record:
                    front.left[i + 1][j] = new_left
            if record:
                for c in range(nc):
                    front.bottom[c][j + 1] = nxt[c]
            cur = nxt
            if not alive:
                # Nothing reaches this row's top; the rest stays empty.
                cur = [None] * nc
                break
            first = next(c for c, e in enumerate(cur) if e is not None)
        return (cur, front) if record else cur


@dataclass
class ReachabilityFront:
    """Reachable sub-intervals of the free boundary intervals (None = empty)."""

    left: list  # left[s][t]
    bottom: list  # bottom[s][t]


def free_space(P: PolygonalCurve, Q: PolygonalCurve, delta: float, eps: float | None = None) -> FreeSpaceDiagram:
    if delta < 0:
        raise ValueError("delta must be non-negative")
    eps = curves.EPS if eps is None else eps
    r = delta + eps
    pv, qv = _verts(P), _verts(Q)
    left = edge_intervals(pv, qv[:-1], qv[1:], r)
    bottom = edge_intervals(qv, pv[:-1], pv[1:], r).transpose(1, 0, 2)
    return FreeSpaceDiagram(P, Q, delta, left, np.ascontiguousarray(bottom))


def _decide_general(P, Q, delta, eps=None) -> bool:
    fsd = free_space(P, Q, delta, eps)
    start = fsd._bottom[0][0]
    if start is None or start[0] > 0.0:
        return False
    entries = [None] * fsd.columns
    entries[0] = start
    top = fsd.sweep(entries)
    last = top[-1]
    return last is not None and last[1] >= 1.0


def decide_segment(a, b, pts, delta: float, eps: float | None = None) -> bool:
    """d_F(segment a-b, polyline through pts) <= delta, in linear time.

    With a single row of cells the path only has to pick nondecreasing
    crossing heights on the vertical lines through the polyline vertices.
    """
    eps = curves.EPS if eps is None else eps
    r = delta + eps
    pts = np.asarray(pts, float)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if np.linalg.norm(pts[0] - a) > r or np.linalg.norm(pts[-1] - b) > r:
        return False
    iv = edge_intervals(pts, a[None], b[None], r)[:, 0, :]
    lo, hi = iv[:, 0], iv[:, 1]
    if np.isnan(lo).any():
        return False
    lo = lo.copy()
    lo[0] = 0.0
    climb = np.maximum.accumulate(lo)
    return bool(np.all(climb <= hi) and hi[-1] >= 1.0)


def decide_frechet(P: PolygonalCurve, Q: PolygonalCurve, delta: float, eps: float | None = None) -> bool:
    if delta < 0:
        raise ValueError("delta must be non-negative")
    eps = curves.EPS if eps is None else eps
    if P.n == 1 or Q.n == 1:
        point, other = (P.vertices[0], Q) if P.n == 1 else (Q.vertices[0], P)
        return bool(np.linalg.norm(other.vertices - point, axis=1).max() <= delta + eps)
    if Q.n == 2:
        return decide_segment(Q.vertices[0], Q.vertices[1], P.vertices, delta, eps)
    if P.n == 2:
        return decide_segment(P.vertices[0], P.vertices[1], Q.vertices, delta, eps)
    return _decide_general(P, Q, delta, eps)


def max_vertex_distance(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    d = P.vertices[:, None, :] - Q.vertices[None, :, :]
    return float(np.sqrt((d * d).sum(axis=2)).max())


def compute_frechet(P: PolygonalCurve, Q: PolygonalCurve, tol: float | None = None) -> float:
    """Fréchet distance by bisection; default tol is 1e-7 of the bounding-box diagonal."""
    if tol is None:
        tol = 1e-7 * curves.bbox_diagonal(P, Q)
        if tol == 0.0:
            return 0.0
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo = max(float(np.linalg.norm(P.start - Q.start)), float(np.linalg.norm(P.end - Q.end)))
    if decide_frechet(P, Q, lo):
        return lo
    hi = max_vertex_distance(P, Q)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if decide_frechet(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return hi


def breakpoint_positions(P: PolygonalCurve, bps: BreakpointSet) -> list:
    """For each breakpoint, the (edge, ratio) positions it occupies on P.

    A breakpoint on an interior vertex sits at the end of one edge and the
    start of the next; the start position is listed first.
    """
    out = []
    ne = max(P.n - 1, 1)
    for t in bps.values:
        e, lam = curves.locate(P, float(t))
        pos = [(e, lam)]
        if lam == 0.0 and e > 0:
            pos.append((e - 1, 1.0))
        if P.n == 1:
            pos = [(0, 0.0)]
        out.append([(min(c, ne - 1), l) for c, l in pos])
    return out


def _inside(iv, lam, slack=1e-12) -> bool:
    return iv is not None and iv[0] - slack <= lam <= iv[1] + slack


def max_reachable_breakpoints(mu: PolygonalCurve, P: PolygonalCurve, bps: BreakpointSet, delta: float,
                              eps: float | None = None, positions: list | None = None) -> list:
    """For every start breakpoint i, the largest j > i such that the
    subcurve P[t_i, t_j] is within delta of mu, or i - 1 when there is none.

    Returns a list of (i, j_max) pairs with 1-based indices.
    """
    fsd = free_space(P, mu, delta, eps)
    pos = breakpoint_positions(P, bps) if positions is None else positions
    m = bps.m
    out = []
    base = fsd._bottom
    for i in range(1, m + 1):
        best = i - 1
        if i < m:
            c, lam = pos[i - 1][0]
            iv = base[c][0]
            if _inside(iv, lam):
                entries = [None] * fsd.columns
                entries[c] = (max(lam, iv[0]), iv[1])
                top = fsd.sweep(entries)
                for j in range(m, i, -1):
                    if any(_inside(top[cc], ll) for cc, ll in pos[j - 1]):
                        best = j
                        break
        out.append((i, best))
    return out


def segment_pair_test(a, b, u, v, bound: float, eps: float | None = None) -> bool:
    """Whether points a, b can be matched to u-v at parameters lam <= lam'
    with both distances at most bound."""
    eps = curves.EPS if eps is None else eps
    r = bound + eps
    ia = point_segment_interval(a, u, v, r)
    ib = point_segment_interval(b, u, v, r)
    return ia is not None and ib is not None and ia[0] <= ib[1]
