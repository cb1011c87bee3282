"""Explicit set systems over candidate pairs.

Row (i, j) holds the pieces z for which some interval [t_a, t_b] with
a <= z < b is within the row threshold of a low-complexity curve mu(i, j)
fitted to P[t_i, t_j]. Rows are boolean arrays over Z = {1..m-1}; column
z - 1 stores element z.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations

import numpy as np

from . import curves
from .curves import BreakpointSet, PolygonalCurve
from .frechet import breakpoint_positions, compute_frechet, decide_frechet, max_reachable_breakpoints
from .parallel import pmap
from .simplify import ell_simplification, mu_factor

MAGIC = b"STRJ"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIId")


@dataclass(eq=False)
class IncidenceMatrix:
    m: int
    rows: list  # candidate pairs (i, j), sorted
    bits: np.ndarray  # (len(rows), m - 1) bool
    threshold: float
    centers: list = field(default_factory=list)  # mu(i, j) per row, when known
    witnesses: list | None = None  # per row: the (a, b) intervals whose union is the row
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.rows = [tuple(map(int, r)) for r in self.rows]
        self.bits = np.asarray(self.bits, dtype=bool).reshape(len(self.rows), self.m - 1)
        self._index = {r: k for k, r in enumerate(self.rows)}

    @property
    def ground(self) -> range:
        return range(1, self.m)

    def row_index(self, pair) -> int | None:
        return self._index.get(tuple(pair))

    def members(self, pair) -> list:
        k = self.row_index(pair)
        return [] if k is None else [z + 1 for z in np.flatnonzero(self.bits[k])]

    def contains(self, z: int, pair) -> bool:
        return query(self, pair, z)

    def same_as(self, other: "IncidenceMatrix") -> bool:
        return (self.m == other.m and self.rows == other.rows and self.threshold == other.threshold
                and np.array_equal(self.bits, other.bits))


def query(matrix: IncidenceMatrix, pair, z: int) -> bool:
    i, j = pair
    if not (1 <= i < j <= matrix.m):
        raise IndexError(f"invalid candidate pair {pair!r} for m={matrix.m}")
    if not 1 <= z < matrix.m:
        raise IndexError(f"element {z} outside 1..{matrix.m - 1}")
    k = matrix.row_index((i, j))
    return False if k is None else bool(matrix.bits[k, z - 1])


def candidate_pairs(m: int) -> list:
    return list(combinations(range(1, m + 1), 2))


def _intervals_to_bits(reach, m: int):
    row = np.zeros(m - 1, dtype=bool)
    spans = []
    for a, b in reach:
        if b > a:
            row[a - 1:b - 1] = True
            spans.append((a, b))
    return row, spans


def default_r0_threshold(delta: float, ell: int) -> float:
    """(2 + f) * delta with f the mu approximation factor; 3 * delta when mu is exact."""
    return (2.0 + mu_factor(ell)) * delta


def _r0_row(pair, P, bps, ell, threshold, positions):
    i, j = pair
    mu = ell_simplification(curves.piece(P, bps, i, j), ell)
    reach = max_reachable_breakpoints(mu, P, bps, threshold, positions=positions)
    row, spans = _intervals_to_bits(reach, bps.m)
    return mu, row, spans


def build_r0(P: PolygonalCurve, bps: BreakpointSet, delta: float, ell: int, threshold: float | None = None,
             debug: bool = False, workers: int | None = None) -> IncidenceMatrix:
    if delta <= 0:
        raise ValueError("delta must be positive")
    if ell < 1:
        raise ValueError("ell must be at least 1")
    threshold = default_r0_threshold(delta, ell) if threshold is None else threshold
    pairs = candidate_pairs(bps.m)
    pos = breakpoint_positions(P, bps)
    out = pmap(partial(_r0_row, P=P, bps=bps, ell=ell, threshold=threshold, positions=pos), pairs, workers)
    bits = np.array([o[1] for o in out], dtype=bool).reshape(len(pairs), bps.m - 1)
    return IncidenceMatrix(bps.m, pairs, bits, threshold, [o[0] for o in out],
                           [o[2] for o in out] if debug else None)


class SubcurveDistanceOracle:
    """Approximate distance between P[t_a, t_b] and a query curve.

    Implementations promise d_F <= distance(...) <= c * d_F.
    """

    c: float = 1.0

    def __init__(self, P: PolygonalCurve, bps: BreakpointSet):
        self.P = P
        self.bps = bps

    def distance(self, a: int, b: int, Q: PolygonalCurve) -> float:
        raise NotImplementedError

    def within(self, a: int, b: int, Q: PolygonalCurve, r: float) -> bool:
        return self.distance(a, b, Q) <= r + curves.EPS


class ExactOracle(SubcurveDistanceOracle):
    c = 1.0

    def __init__(self, P, bps, tol: float | None = None):
        super().__init__(P, bps)
        self.tol = tol

    def distance(self, a, b, Q):
        return compute_frechet(curves.piece(self.P, self.bps, a, b), Q, self.tol)

    def within(self, a, b, Q, r):
        return decide_frechet(curves.piece(self.P, self.bps, a, b), Q, r)


def _r1_row(pair, P, bps, ell, threshold, oracle):
    i, j = pair
    m = bps.m
    mu = ell_simplification(curves.piece(P, bps, i, j), ell)
    reach = []
    for a in range(1, m):
        best = a - 1
        for b in range(m, a, -1):
            if oracle.within(a, b, mu, threshold):
                best = b
                break
        reach.append((a, best))
    row, spans = _intervals_to_bits(reach, m)
    return mu, row, spans


def build_r1(P: PolygonalCurve, bps: BreakpointSet, delta: float, ell: int,
             oracle: SubcurveDistanceOracle | None = None, threshold: float | None = None,
             debug: bool = False, workers: int | None = None) -> IncidenceMatrix:
    """Like build_r0 but membership comes from oracle queries at c times the R0 threshold."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    oracle = ExactOracle(P, bps) if oracle is None else oracle
    if threshold is None:
        threshold = oracle.c * default_r0_threshold(delta, ell)
    pairs = candidate_pairs(bps.m)
    out = pmap(partial(_r1_row, P=P, bps=bps, ell=ell, threshold=threshold, oracle=oracle), pairs, workers)
    bits = np.array([o[1] for o in out], dtype=bool).reshape(len(pairs), bps.m - 1)
    return IncidenceMatrix(bps.m, pairs, bits, threshold, [o[0] for o in out],
                           [o[2] for o in out] if debug else None)


def dump_matrix(matrix: IncidenceMatrix, path) -> None:
    """Binary layout: header, then (i, j) as uint32 per row, then the row
    bitsets as little-endian uint64 words (bit z - 1 holds element z)."""
    words = max(1, -(-(matrix.m - 1) // 64))
    packed = np.zeros((len(matrix.rows), words), dtype="<u8")
    for k in range(len(matrix.rows)):
        for z in np.flatnonzero(matrix.bits[k]):
            packed[k, z // 64] |= np.uint64(1) << np.uint64(z % 64)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, matrix.m, len(matrix.rows), float(matrix.threshold)))
        fh.write(np.asarray(matrix.rows, dtype="<u4").reshape(-1, 2).tobytes())
        fh.write(packed.tobytes())


def load_matrix(path) -> IncidenceMatrix:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise ValueError("truncated incidence matrix file")
    magic, version, m, nrows, threshold = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError("not an incidence matrix file")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported incidence matrix version {version}")
    words = max(1, -(-(m - 1) // 64))
    off = _HEADER.size
    need = off + nrows * 8 + nrows * words * 8
    if len(data) != need:
        raise ValueError("incidence matrix file has the wrong size")
    rows = np.frombuffer(data, dtype="<u4", count=2 * nrows, offset=off).reshape(nrows, 2)
    off += nrows * 8
    packed = np.frombuffer(data, dtype="<u8", count=nrows * words, offset=off).reshape(nrows, words)
    bits = np.zeros((nrows, m - 1), dtype=bool)
    for z in range(m - 1):
        bits[:, z] = (packed[:, z // 64] >> np.uint64(z % 64)) & np.uint64(1)
    return IncidenceMatrix(m, [tuple(r) for r in rows.tolist()], bits, threshold)
