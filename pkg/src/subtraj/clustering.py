"""End-to-end subtrajectory clustering and cover verification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curves
from .cover import InfeasibleError, bg_cover_search, check_feasible, greedy_cover
from .curves import BreakpointSet, PolygonalCurve
from .explicit import SubcurveDistanceOracle, build_r0, build_r1
from .frechet import breakpoint_positions, max_reachable_breakpoints
from .oracles import build_general_oracle, build_segment_oracle

ALGORITHMS = ("greedy-r0", "greedy-r1", "bg-segment", "bg-general")


@dataclass
class ClusteringConfig:
    delta: float
    ell: int = 2
    algorithm: str = "greedy-r0"
    seed: int = 0
    phi_tol: float = 1e-6  # relative to the bounding-box diagonal
    prune: bool = True  # drop redundant sets from hitting-set covers
    oracle: SubcurveDistanceOracle | None = None  # greedy-r1 only
    workers: int | None = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if int(self.ell) != self.ell or self.ell < 1:
            raise ValueError("ell must be a positive integer")
        self.ell = int(self.ell)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.algorithm == "bg-segment" and self.ell != 2:
            raise ValueError("bg-segment works with segment centers only (ell = 2)")
        if not self.phi_tol > 0:
            raise ValueError("phi_tol must be positive")

    def echo(self) -> dict:
        return {"delta": self.delta, "ell": self.ell, "algorithm": self.algorithm, "seed": self.seed,
                "phi_tol": self.phi_tol, "prune": self.prune}


@dataclass(eq=False)
class ClusteringResult:
    centers: list  # PolygonalCurve per selected pair
    pairs: list  # selected candidate pairs, aligned with centers
    intervals: list  # (i, j, center index) certified at verified_radius
    labeled_radius: float
    verified_radius: float
    diagnostics: dict = field(default_factory=dict)
    config: ClusteringConfig | None = None


def _reach_table(P, bps, centers, radius):
    pos = breakpoint_positions(P, bps)
    return [[j for _, j in max_reachable_breakpoints(c, P, bps, radius, positions=pos)] for c in centers]


def verify_cover(P: PolygonalCurve, bps: BreakpointSet, centers: list, radius: float):
    """Certify that every piece lies in an interval within ``radius`` of a center.

    Returns (ok, intervals) with intervals as (i, j, center index). Walking
    left to right, each step takes the reachable interval starting at or
    before the current frontier that extends farthest.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if not centers:
        return False, []
    reach = _reach_table(P, bps, centers, radius)
    m = bps.m
    frontier = 1
    best = (0, 0, -1)  # (j, i, q) best reach among starts seen so far
    seen = 0
    out = []
    while frontier < m:
        while seen < frontier:
            seen += 1
            for q, row in enumerate(reach):
                j = row[seen - 1]
                if j > best[0]:
                    best = (j, seen, q)
        if best[0] <= frontier:
            return False, out
        out.append((best[1], best[0], best[2]))
        frontier = best[0]
    return True, out


def _phi_upper(P, centers) -> float:
    pts = np.vstack([c.vertices for c in centers])
    d = P.vertices[:, None, :] - pts[None, :, :]
    return float(np.sqrt((d * d).sum(axis=2)).max())


def phi(P: PolygonalCurve, bps: BreakpointSet, centers: list, tol: float | None = None) -> float:
    """Smallest radius (to within tol) at which verify_cover succeeds."""
    if not centers:
        raise ValueError("need at least one center")
    if tol is None:
        tol = 1e-6 * max(curves.bbox_diagonal(P, *centers), 1e-300)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if verify_cover(P, bps, centers, 0.0)[0]:
        return 0.0
    lo, hi = 0.0, _phi_upper(P, centers)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if verify_cover(P, bps, centers, mid)[0]:
            hi = mid
        else:
            lo = mid
    return hi


def _solve(P, bps, cfg: ClusteringConfig):
    d = cfg.delta
    if cfg.algorithm in ("greedy-r0", "greedy-r1"):
        if cfg.algorithm == "greedy-r0":
            M = build_r0(P, bps, d, cfg.ell, workers=cfg.workers)
        else:
            M = build_r1(P, bps, d, cfg.ell, oracle=cfg.oracle, workers=cfg.workers)
        check_feasible(M.bits)
        sol = greedy_cover(M)
        centers = [M.centers[M.row_index(p)] for p in sol.pairs]
        return sol, centers, M.threshold, {"candidate_sets": len(M.rows)}
    if cfg.algorithm == "bg-segment":
        o = build_segment_oracle(P, bps, d)
        label = 6.0 * d
    else:
        o = build_general_oracle(P, bps, d, cfg.ell)
        missing = [z for z in bps.ground if o.family.sigma_circ(z) is None]
        if missing:
            raise InfeasibleError(missing[0], f"piece {missing[0]} has no {2 * cfg.ell}-vertex simplification "
                                              f"within {4 * d:g}; no cover exists at this delta")
        label = 50.0 * d
    sol = bg_cover_search(o, cfg.seed, prune=cfg.prune)
    centers = [o.center(p) for p in sol.pairs]
    return sol, centers, label, {"candidate_sets": len(o.pairs)}


def cluster(P: PolygonalCurve, bps: BreakpointSet, cfg: ClusteringConfig) -> ClusteringResult:
    """Run the configured pipeline and certify its cost.

    Raises InfeasibleError naming an uncoverable piece.
    """
    sol, centers, label, info = _solve(P, bps, cfg)
    tol = cfg.phi_tol * max(curves.bbox_diagonal(P, *centers), 1e-300)
    verified = phi(P, bps, centers, tol)
    ok, intervals = verify_cover(P, bps, centers, verified)
    label_ok, _ = verify_cover(P, bps, centers, label)
    diag = dict(info)
    diag.update({
        "selected": sol.size,
        "raw_selected": sol.raw_size if sol.raw_size is not None else sol.size,
        "k_guess": sol.k_guess,
        "reweight_rounds": sol.rounds,
        "iterations": sol.iterations,
        "sample_size": sol.sample_size,
        "labeled_radius_verified": bool(label_ok),
        "max_center_vertices": max(c.n for c in centers),
    })
    if not ok:
        raise RuntimeError("verify_cover failed at the bisected radius")
    return ClusteringResult(centers, list(sol.pairs), intervals, float(label), float(verified), diag, cfg)
