"""Small synthetic trajectories with known structure, shared by tests and scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve


@dataclass(eq=False)
class PlantedInstance:
    curve: PolygonalCurve
    breakpoints: BreakpointSet
    delta: float
    motif: PolygonalCurve  # every copy is within delta / 4 of motif or its reverse
    copy_bounds: list  # breakpoint indices at copy boundaries


def _densify(points: np.ndarray, per_edge: int) -> np.ndarray:
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        for s in np.linspace(0, 1, per_edge + 1)[1:]:
            out.append(a + s * (b - a))
    return np.array(out)


def planted_instance(rng, ell: int = 2, copies: int | None = None, delta: float = 1.0,
                     max_vertices: int = 60, max_breakpoints: int = 12) -> PlantedInstance:
    """Alternate copies of a random motif and its reverse, with bounded vertex noise.

    Copy k runs forward for even k and backward for odd k, so consecutive
    copies share an end point. Interior vertices are moved by less than
    delta / 4, so the motif covers each copy at delta. Breakpoints sit at all
    copy boundaries plus a few random interior vertices.
    """
    if ell < 2:
        raise ValueError("planted motifs need at least two vertices")
    rng = np.random.default_rng(rng)
    if copies is None:
        copies = int(rng.integers(2, 5))
    motif = rng.uniform(-4, 4, size=(ell, 2)) * delta
    while np.min(np.linalg.norm(np.diff(motif, axis=0), axis=1)) < delta:
        motif = rng.uniform(-4, 4, size=(ell, 2)) * delta
    budget = max(1, (max_vertices - 1) // copies)
    per_edge = max(1, min(3, budget // max(1, ell - 1)))
    base = _densify(motif, per_edge)
    pts = []
    bounds_vertex = [0]
    for k in range(copies):
        seg = base if k % 2 == 0 else base[::-1]
        noisy = seg.copy()
        inner = len(noisy) - 2
        if inner > 0:
            angle = rng.uniform(0, 2 * np.pi, inner)
            radius = rng.uniform(0, 0.24 * delta, inner)
            noisy[1:-1] += np.c_[np.cos(angle), np.sin(angle)] * radius[:, None]
        pts.extend(noisy if k == 0 else noisy[1:])
        bounds_vertex.append(len(pts) - 1)
    pts = np.array(pts)
    P = curves.build_curve(pts)
    keep = sorted(set(bounds_vertex))
    interior = [v for v in range(len(pts)) if v not in keep]
    extra = max(0, min(len(interior), max_breakpoints - len(keep)))
    if extra:
        keep = sorted(set(keep) | set(rng.choice(interior, size=int(rng.integers(0, extra + 1)), replace=False).tolist()))
    values = [float(P.params[v]) for v in keep]
    bps = BreakpointSet(values)
    bound_params = {float(P.params[v]) for v in bounds_vertex}
    copy_bounds = [i + 1 for i, t in enumerate(values) if t in bound_params]
    return PlantedInstance(P, bps, delta, curves.build_curve(motif),
                           copy_bounds)


BUMP = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [0.0, 0.0]])


def bump_loops(repeats: int = 8) -> tuple[PolygonalCurve, BreakpointSet]:
    """A closed triangular bump traversed ``repeats`` times, breakpoints at each return."""
    pts = np.vstack([BUMP] + [BUMP[1:]] * (repeats - 1))
    P = curves.build_curve(pts)
    values = [float(P.params[3 * k]) for k in range(repeats + 1)]
    return P, BreakpointSet(values)


def interleaved_motifs(repeats: int = 2, width: float = 10.0, height: float = 10.0) -> tuple[PolygonalCurve, BreakpointSet]:
    """Motif A goes over the top from (0,0) to (width,0), motif B returns
    underneath; the trajectory is A, B, A, B, ... with breakpoints at the joins."""
    top = [(width / 2, height), (width, 0.0)]
    bottom = [(width / 2, -height), (0.0, 0.0)]
    pts = [(0.0, 0.0)] + (top + bottom) * repeats
    P = curves.build_curve(np.array(pts))
    values = [float(P.params[2 * k]) for k in range(2 * repeats + 1)]
    return P, BreakpointSet(values)


def straight_line(n: int = 6, length: float = 10.0) -> tuple[PolygonalCurve, BreakpointSet]:
    pts = np.c_[np.linspace(0, length, n), np.zeros(n)]
    P = curves.build_curve(pts)
    return P, BreakpointSet(list(P.params))


def zigzag(apexes: int = 1, height: float = 1.0) -> PolygonalCurve:
    """(0,0), (1,h), (2,0), (3,h), ... with ``apexes`` peaks."""
    xs = np.arange(2 * apexes + 1, dtype=float)
    ys = np.where(np.arange(len(xs)) % 2 == 1, height, 0.0)
    return curves.build_curve(np.c_[xs, ys])


def random_curve(rng, n: int, dim: int = 2, scale: float = 5.0) -> PolygonalCurve:
    rng = np.random.default_rng(rng)
    return curves.build_curve(rng.uniform(-scale, scale, size=(n, dim)))
