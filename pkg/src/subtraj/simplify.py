"""Curve simplification.

* ``agarwal_simplify``: greedy vertex-restricted simplification where each
  shortcut is found by exponential then binary search.
* ``ell_simplification``: a curve of at most ell vertices close to a given
  curve; used as the center candidate of the explicit set systems.
* ``build_sigma_family``: capped simplifications starting at every breakpoint
  (forward and backward) and of every piece, with prefix extraction.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve
from .frechet import decide_segment, point_segment_interval


@dataclass(eq=False)
class Simplification:
    curve: PolygonalCurve
    source_anchor: np.ndarray  # source parameter of each vertex
    indices: list  # source vertex index of each vertex
    complete: bool  # whether the last vertex is the end of the source
    edge_breakpoints: list = field(default_factory=list)  # per edge (first, last) or None

    @property
    def n(self) -> int:
        return self.curve.n


def agarwal_simplify(P: PolygonalCurve, eps: float, max_vertices: int | None = None,
                     tol: float | None = None) -> Simplification:
    """Greedy vertex-restricted eps-simplification of P.

    From the current vertex the search doubles the shortcut length while the
    shortcut stays within eps, then binary searches between the last good and
    first bad length. With ``max_vertices`` the run stops once that many
    vertices are placed; ``complete`` tells whether the end was reached.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if max_vertices is not None and max_vertices < 2:
        raise ValueError("max_vertices must be at least 2")
    V = P.vertices
    last = P.n - 1

    def ok(i: int, j: int) -> bool:
        return j == i + 1 or decide_segment(V[i], V[j], V[i:j + 1], eps, tol)

    def advance(i: int) -> int:
        step = 1
        while True:
            cand = min(2 * step, last - i)
            if cand == step:
                return i + step
            if not ok(i, i + cand):
                break
            if cand == last - i:
                return last
            step = cand
        good, bad = step, cand
        while bad - good > 1:
            mid = (good + bad) // 2
            if ok(i, i + mid):
                good = mid
            else:
                bad = mid
        return i + good

    idx = [0]
    while idx[-1] < last:
        if max_vertices is not None and len(idx) >= max_vertices:
            break
        idx.append(advance(idx[-1]))
    curve = PolygonalCurve(V[idx], P.params[idx] if len(idx) > 1 else np.zeros(1))
    return Simplification(curve, P.params[idx].copy(), idx, idx[-1] == last)


def _ball(support: list) -> tuple[np.ndarray, float]:
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    D = np.array([p - p0 for p in support[1:]])
    G = 2.0 * D @ D.T
    rhs = np.einsum("ij,ij->i", D, D)
    alpha = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = p0 + alpha @ D
    return c, float(max(np.linalg.norm(p - c) for p in support))


def _welzl(points: list, boundary: list, dim: int):
    c, r = _ball(boundary) if boundary else (None, -1.0)
    for k, p in enumerate(points):
        if c is not None and np.linalg.norm(p - c) <= r * (1 + 1e-12) + 1e-15:
            continue
        if len(boundary) == dim:
            c, r = _ball(boundary + [p])
        else:
            c, r = _welzl(points[:k], boundary + [p], dim)
    return c, r


def min_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Smallest enclosing ball (Welzl's algorithm, deterministic order)."""
    pts = np.unique(np.asarray(points, float), axis=0)
    order = np.random.default_rng(0).permutation(len(pts))
    c, _ = _welzl([pts[k] for k in order], [], pts.shape[1])
    return c, float(np.linalg.norm(pts - c, axis=1).max())


def ell_simplification(P_sub: PolygonalCurve, ell: int, tol: float | None = None) -> PolygonalCurve:
    """A curve with at most ell vertices near P_sub.

    ell = 1: the center of the smallest enclosing ball of the vertices, which
    is optimal. ell >= 2: the capped greedy simplification at the smallest eps
    (found by bisection to ``tol``) for which it completes. For ell = 2 this
    is the chord, whose error is at most twice the optimum.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if P_sub.n <= ell:
        return P_sub
    if ell == 1:
        c, _ = min_enclosing_ball(P_sub.vertices)
        return curves.point_curve(c)
    diag = curves.bbox_diagonal(P_sub)
    tol = 1e-7 * diag if tol is None else tol
    if ell == 2:
        return PolygonalCurve(P_sub.vertices[[0, -1]], np.array([0.0, 1.0]))
    lo, hi = 0.0, diag * (1 + 1e-9) + tol
    best = agarwal_simplify(P_sub, hi, ell)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = agarwal_simplify(P_sub, mid, ell)
        if s.complete:
            hi, best = mid, s
        else:
            lo = mid
    return best.curve


def mu_factor(ell: int) -> float:
    """Approximation factor of ``ell_simplification`` relative to the optimum.

    Exact for ell = 1 and at most 2 for the chord at ell = 2. For larger ell
    the value 4 is the nominal factor of the greedy, not a proven bound.
    """
    return 1.0 if ell == 1 else 2.0 if ell == 2 else 4.0


@dataclass(eq=False)
class Branch:
    """Capped simplification from one breakpoint in one direction.

    ``simp`` lives on the directed curve (P[t_z, 1] forward or the reversal
    of P[0, t_z] backward). ``limit`` is the last breakpoint reachable in
    the branch direction (y_z forward, x_z backward).
    """

    anchor: int
    forward: bool
    simp: Simplification
    limit: int
    u: dict  # breakpoint -> parameter on the directed curve
    ratio: dict  # breakpoint -> endpoint ratio on its edge

    def covers(self, y: int) -> bool:
        return (self.anchor <= y <= self.limit) if self.forward else (self.limit <= y <= self.anchor)

    def edge_of(self, y: int) -> int:
        anchors = self.simp.source_anchor
        if len(anchors) == 1:
            return 0
        e = bisect.bisect_left(anchors, self.u[y]) - 1
        return min(max(e, 0), len(anchors) - 2)

    def position(self, y: int) -> tuple[int, float] | None:
        if not self.covers(y):
            return None
        return self.edge_of(y), self.ratio[y]

    def prefix(self, y: int) -> PolygonalCurve | None:
        """Prefix of the directed simplification ending at breakpoint y."""
        pos = self.position(y)
        if pos is None:
            return None
        V = self.simp.curve.vertices
        if len(V) == 1:
            return curves.point_curve(V[0])
        e, lam = pos
        end = (1 - lam) * V[e] + lam * V[e + 1]
        return curves.build_curve(np.vstack([V[:e + 1], end[None]]))


def _branch(P: PolygonalCurve, bps: BreakpointSet, z: int, forward: bool, radius: float, cap: int,
            bp_points: np.ndarray) -> Branch:
    tz = bps.t(z)
    if forward:
        Q = curves.subcurve(P, tz, 1.0)
        order = list(range(z, bps.m + 1))
        u = {y: (0.0 if tz >= 1.0 else (bps.t(y) - tz) / (1.0 - tz)) for y in order}
    else:
        Q = curves.reverse(curves.subcurve(P, 0.0, tz))
        order = list(range(z, 0, -1))
        u = {y: (0.0 if tz <= 0.0 else 1.0 - bps.t(y) / tz) for y in order}
    simp = agarwal_simplify(Q, radius, cap)
    cap_u = simp.source_anchor[-1] if simp.n > 1 else 0.0
    window = [y for y in order if u[y] <= cap_u or y == z]
    limit = window[-1]
    br = Branch(z, forward, simp, limit, u, {})
    V = simp.curve.vertices
    n_edges = max(simp.n - 1, 1)
    per_edge: list = [[] for _ in range(n_edges)]
    for y in window:
        per_edge[br.edge_of(y)].append(y)
    for e, ys in enumerate(per_edge):
        # Clamp each endpoint to the suffix minimum along the edge so that
        # prefixes for later breakpoints contain those for earlier ones.
        running = 1.0
        for y in reversed(ys):
            if y == z or simp.n == 1:
                lam = 0.0
            else:
                iv = point_segment_interval(bp_points[y - 1], V[e], V[e + 1], radius)
                if iv is None:
                    d = V[e + 1] - V[e]
                    lam = float(np.clip(np.dot(bp_points[y - 1] - V[e], d) / max(np.dot(d, d), 1e-300), 0, 1))
                else:
                    lam = iv[1]
            running = min(running, lam)
            br.ratio[y] = running
    simp.edge_breakpoints = [(min(ys), max(ys)) if ys else None for ys in per_edge]
    return br


@dataclass(eq=False)
class SigmaFamily:
    P: PolygonalCurve
    bps: BreakpointSet
    delta: float
    ell: int
    plus_branches: list  # index z - 1
    minus_branches: list  # index z - 1
    circ: list  # index z - 1, PolygonalCurve or None

    @property
    def radius(self) -> float:
        return 4.0 * self.delta

    def y_limit(self, z: int) -> int:
        return self.plus_branches[z - 1].limit

    def x_limit(self, z: int) -> int:
        return self.minus_branches[z - 1].limit

    def plus(self, i: int, j: int) -> PolygonalCurve | None:
        return extract_sigma_plus(self, i, j)

    def minus(self, x: int, z: int) -> PolygonalCurve | None:
        return extract_sigma_minus(self, x, z)

    def sigma_circ(self, z: int) -> PolygonalCurve | None:
        return self.circ[z - 1]

    def kappa(self, z: int, x: int, y: int) -> PolygonalCurve | None:
        """Proxy curve sigma-(x, z) + sigma-circ(z, z+1) + sigma+(z+1, y)."""
        a = extract_sigma_minus(self, x, z, allow_equal=True)
        b = self.sigma_circ(z)
        c = extract_sigma_plus(self, z + 1, y, allow_equal=True)
        if a is None or b is None or c is None:
            return None
        return curves.concat(a, b, c)


def build_sigma_family(P: PolygonalCurve, bps: BreakpointSet, delta: float, ell: int) -> SigmaFamily:
    if delta <= 0:
        raise ValueError("delta must be positive")
    if ell < 1:
        raise ValueError("ell must be at least 1")
    radius = 4.0 * delta
    cap = 2 * ell
    pts = curves.breakpoint_points(P, bps)
    plus = [_branch(P, bps, z, True, radius, cap, pts) for z in range(1, bps.m + 1)]
    minus = [_branch(P, bps, z, False, radius, cap, pts) for z in range(1, bps.m + 1)]
    circ = []
    for z in range(1, bps.m):
        s = agarwal_simplify(curves.piece(P, bps, z, z + 1), radius, cap)
        circ.append(s.curve if s.complete else None)
    return SigmaFamily(P, bps, delta, ell, plus, minus, circ)


def extract_sigma_plus(family: SigmaFamily, i: int, j: int, allow_equal: bool = False) -> PolygonalCurve | None:
    """Prefix of the forward simplification from breakpoint i ending near
    P(t_j), or None when j lies beyond the limit y_i."""
    if not (i < j or (allow_equal and i == j)):
        raise ValueError("need i < j")
    if not 1 <= i <= j <= family.bps.m:
        raise IndexError("breakpoint index out of range")
    return family.plus_branches[i - 1].prefix(j)


def extract_sigma_minus(family: SigmaFamily, x: int, z: int, allow_equal: bool = False) -> PolygonalCurve | None:
    """Backward counterpart: a curve from near P(t_x) to P(t_z), or None."""
    if not (x < z or (allow_equal and x == z)):
        raise ValueError("need x < z")
    if not 1 <= x <= z <= family.bps.m:
        raise IndexError("breakpoint index out of range")
    c = family.minus_branches[z - 1].prefix(x)
    return None if c is None else curves.reverse(c)
