"""Implicit set systems answering "is piece z in the set of pair (i, j)?".

SegmentOracle (centers are segments between breakpoints, constant time per
query) and GeneralOracle (centers are forward simplifications with at most
2*ell vertices, one small free-space sweep per query).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve
from .frechet import decide_segment, free_space, segment_pair_test
from .simplify import SigmaFamily, build_sigma_family


def next_near_matrix(points: np.ndarray, radius: float, eps: float | None = None) -> np.ndarray:
    """M[i, j] = first breakpoint k >= j with |p_k - p_i| <= radius, else m + 1.

    1-based: the result has shape (m + 2, m + 2) and row/column 0 is unused.
    """
    eps = curves.EPS if eps is None else eps
    m = len(points)
    D = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    near = D <= radius + eps
    M = np.full((m + 2, m + 2), m + 1, dtype=np.int64)
    for j in range(m, 0, -1):
        M[1:m + 1, j] = np.where(near[:, j - 1], j, M[1:m + 1, j + 1])
    return M


def _check(m: int, z: int, i: int, j: int) -> None:
    if not 1 <= z < m:
        raise IndexError(f"element {z} outside 1..{m - 1}")
    if not 1 <= i < j <= m:
        raise IndexError(f"invalid candidate pair ({i}, {j}) for m={m}")


@dataclass(eq=False)
class SegmentOracle:
    P: PolygonalCurve
    bps: BreakpointSet
    delta: float
    points: np.ndarray  # (m, d) breakpoint positions
    x_limits: np.ndarray  # x_limits[z] for z in 1..m-1 (index 0 unused)
    y_limits: np.ndarray  # forward scan limit started at z + 1
    M: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.bps.m

    @property
    def pairs(self) -> list:
        return [(i, j) for i in range(1, self.m) for j in range(i + 1, self.m + 1)]

    def center(self, pair) -> PolygonalCurve:
        i, j = pair
        return curves.build_curve(self.points[[i - 1, j - 1]])

    def contains(self, z: int, pair) -> bool:
        key = (z, pair[0], pair[1])
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = segment_query(self, z, pair[0], pair[1])
        return hit


def build_segment_oracle(P: PolygonalCurve, bps: BreakpointSet, delta: float) -> SegmentOracle:
    if delta <= 0:
        raise ValueError("delta must be positive")
    m = bps.m
    pts = curves.breakpoint_points(P, bps)
    reach = 4.0 * delta

    def fits(a: int, b: int) -> bool:
        return decide_segment(pts[a - 1], pts[b - 1], curves.piece(P, bps, a, b).vertices, reach)

    xs = np.zeros(m, dtype=np.int64)
    ys = np.zeros(m, dtype=np.int64)
    for z in range(1, m):
        x = z
        while x > 1 and fits(x - 1, z):
            x -= 1
        y = z + 1
        while y < m and fits(z + 1, y + 1):
            y += 1
        xs[z], ys[z] = x, y
    return SegmentOracle(P, bps, delta, pts, xs, ys, next_near_matrix(pts, 2.0 * delta))


def segment_query(o: SegmentOracle, z: int, i: int, j: int) -> bool:
    _check(o.m, z, i, j)
    p = o.points
    return bool(
        o.M[i, o.x_limits[z]] <= z
        and o.M[j, z + 1] <= o.y_limits[z]
        and segment_pair_test(p[z - 1], p[z], p[i - 1], p[j - 1], 2.0 * o.delta)
    )


@dataclass(eq=False)
class GeneralOracle:
    family: SigmaFamily
    M18: np.ndarray
    delta: float
    ell: int
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.family.bps.m

    @property
    def pairs(self) -> list:
        f = self.family
        return [(i, j) for i in range(1, self.m) for j in range(i + 1, f.y_limit(i) + 1)]

    def center(self, pair) -> PolygonalCurve | None:
        return self.family.plus(*pair)

    def contains(self, z: int, pair) -> bool:
        key = (z, pair[0], pair[1])
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = general_query(self, z, pair[0], pair[1])
        return hit


def build_general_oracle(P: PolygonalCurve, bps: BreakpointSet, delta: float, ell: int) -> GeneralOracle:
    family = build_sigma_family(P, bps, delta, ell)
    pts = curves.breakpoint_points(P, bps)
    return GeneralOracle(family, next_near_matrix(pts, 18.0 * delta), delta, ell)


def _directed(branch) -> np.ndarray:
    V = branch.simp.curve.vertices
    return np.vstack([V, V]) if len(V) == 1 else V


def _window(branch, y: int):
    """Vertices of the branch prefix ending at y, keeping every edge (even
    zero-length ones) so column indices match branch edges."""
    V = _directed(branch)
    e, lam = branch.position(y)
    end = (1 - lam) * V[e] + lam * V[e + 1]
    return np.vstack([V[:e + 1], end[None]]), e


def _active(branch, edge: int, target: int, M18: np.ndarray) -> bool:
    span = branch.simp.edge_breakpoints[edge]
    return span is not None and M18[target, span[0]] <= span[1]


def general_query(o: GeneralOracle, z: int, i: int, j: int) -> bool:
    """Approximate membership: True implies a witness at 46*delta, False rules
    out a witness at 10*delta."""
    _check(o.m, z, i, j)
    f = o.family
    S = f.plus(i, j)
    circ = f.sigma_circ(z)
    if S is None or circ is None:
        return False
    before = f.minus_branches[z - 1]
    after = f.plus_branches[z]
    head, e_head = _window(before, before.limit)
    tail, e_tail = _window(after, after.limit)
    # Forward order of the backward branch: edge k of the window is edge
    # e_head - k of the branch.
    K = np.vstack([head[::-1], circ.vertices[1:], tail[1:]])
    n_head = e_head + 1
    first_exit = n_head + circ.n - 1
    fsd = free_space(PolygonalCurve(K, np.linspace(0.0, 1.0, len(K))), S, 10.0 * o.delta)
    entries = [None] * fsd.columns
    for k in range(n_head):
        if _active(before, e_head - k, i, o.M18):
            entries[k] = fsd._bottom[k][0]
    if all(e is None for e in entries):
        return False
    exits = [first_exit + g for g in range(e_tail + 1) if _active(after, g, j, o.M18)]
    if not exits:
        return False
    top = fsd.sweep(entries)
    return any(top[c] is not None for c in exits)
