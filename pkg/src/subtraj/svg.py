"""Deterministic SVG rendering of a clustering (2-D only)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"]
WIDTH = 800
MARGIN = 20


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def tint_partition(intervals) -> list:
    """Cut overlapping (t0, t1, center) intervals into a left-to-right partition."""
    out = []
    cursor = 0.0
    for t0, t1, q in sorted(intervals):
        a = max(t0, cursor)
        if t1 > a:
            out.append((a, t1, q))
            cursor = t1
    return out


def render_svg(P: PolygonalCurve, bps: BreakpointSet, centers: list, intervals: list) -> str:
    """``intervals`` holds (t0, t1, center index) in curve parameters."""
    if P.dim != 2 or any(c.dim != 2 for c in centers):
        raise ValueError(f"SVG output needs 2-D curves, got dimension {P.dim}")
    pts = np.vstack([P.vertices] + [c.vertices for c in centers])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max((hi - lo).max(), 1e-12))
    scale = (WIDTH - 2 * MARGIN) / span
    height = int(np.ceil((hi[1] - lo[1]) * scale)) + 2 * MARGIN

    def xy(p):
        return _fmt(MARGIN + (p[0] - lo[0]) * scale), _fmt(height - MARGIN - (p[1] - lo[1]) * scale)

    def poly(vs):
        vs = np.asarray(vs)
        if len(vs) == 1:
            vs = np.vstack([vs, vs])
        return " ".join(",".join(xy(p)) for p in vs)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g class="intervals" fill="none" stroke-width="9" stroke-opacity="0.3" stroke-linecap="round">',
    ]
    for t0, t1, q in tint_partition(intervals):
        sub = curves.subcurve(P, t0, t1)
        color = PALETTE[q % len(PALETTE)]
        out.append(f'<polyline class="interval" data-t0="{t0!r}" data-t1="{t1!r}" data-center="{q}" '
                   f'stroke="{color}" points="{poly(sub.vertices)}"/>')
    out.append("</g>")
    out.append(f'<polyline class="trajectory" fill="none" stroke="black" stroke-width="1.2" '
               f'points="{poly(P.vertices)}"/>')
    for k, c in enumerate(centers):
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<polyline class="center" data-center="{k}" fill="none" stroke="{color}" stroke-width="2.5" '
                   f'stroke-dasharray="6,3" points="{poly(c.vertices)}"/>')
    out.append('<g class="breakpoints" fill="black">')
    for t in bps.values:
        x, y = xy(curves.point_at(P, float(t)))
        out.append(f'<circle class="breakpoint" cx="{x}" cy="{y}" r="3" data-t="{float(t)!r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(P: PolygonalCurve, bps: BreakpointSet, result, path) -> None:
    """Write the SVG for a ClusteringResult or ResultDocument."""
    if hasattr(result, "center_curves"):
        centers = result.center_curves()
        intervals = [(iv["t_i"], iv["t_j"], iv["center"]) for iv in result.intervals]
    else:
        centers = result.centers
        intervals = [(bps.t(i), bps.t(j), q) for i, j, q in result.intervals]
    Path(path).write_text(render_svg(P, bps, centers, intervals))
