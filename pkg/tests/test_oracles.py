import dataclasses

import numpy as np
import pytest

import brute
from subtraj import curves, fixtures
from subtraj.curves import BreakpointSet, build_curve
from subtraj.frechet import compute_frechet, decide_frechet
from subtraj.oracles import (build_general_oracle, build_segment_oracle, general_query, next_near_matrix,
                             segment_query)


def _fits(P, bps, a, b, r):
    tau = build_curve(curves.breakpoint_points(P, bps)[[a - 1, b - 1]])
    return decide_frechet(tau, curves.piece(P, bps, a, b), r)


def _random(rng, n_lo=3, n_hi=9, scale=3.0):
    P = fixtures.random_curve(rng, int(rng.integers(n_lo, n_hi)), scale=scale)
    return P, curves.vertex_breakpoints(P)


def test_collinear_scans_reach_the_ends():
    P, bps = fixtures.straight_line(7)
    o = build_segment_oracle(P, bps, 0.3)
    assert all(o.x_limits[z] == 1 and o.y_limits[z] == bps.m for z in range(1, bps.m))


def test_spike_stops_the_scans():
    delta = 0.2
    pts = [(0, 0), (1, 0), (2, 0), (3, 0), (3.5, 10 * delta), (4, 0), (5, 0), (6, 0)]
    P = build_curve(pts)
    bps = BreakpointSet([P.params[k] for k in (0, 1, 2, 3, 5, 6, 7)])
    o = build_segment_oracle(P, bps, delta)
    assert not _fits(P, bps, 4, 5, 4 * delta)
    assert [int(o.y_limits[z]) for z in range(1, 7)] == [4, 4, 4, 7, 7, 7]
    assert [int(o.x_limits[z]) for z in range(1, 7)] == [1, 1, 1, 1, 5, 5]


def test_scan_semantics_random():
    rng = np.random.default_rng(41)
    for _ in range(15):
        P, bps = _random(rng)
        d = float(rng.uniform(0.2, 1.0))
        o = build_segment_oracle(P, bps, d)
        r = 4 * d
        for z in range(1, bps.m):
            x = int(o.x_limits[z])
            assert all(_fits(P, bps, a, z, r) for a in range(x, z))
            assert x == 1 or not _fits(P, bps, x - 1, z, r)
            y = int(o.y_limits[z])
            assert all(_fits(P, bps, z + 1, b, r) for b in range(z + 2, y + 1))
            assert y == bps.m or not _fits(P, bps, z + 1, y + 1, r)


def test_next_near_matrix_semantics():
    rng = np.random.default_rng(42)
    pts = rng.uniform(0, 5, size=(9, 2))
    M = next_near_matrix(pts, 1.5)
    m = len(pts)
    for i in range(1, m + 1):
        assert all(M[i, j] <= M[i, j + 1] for j in range(1, m))
        for j in range(1, m + 1):
            near = [k for k in range(j, m + 1) if np.linalg.norm(pts[k - 1] - pts[i - 1]) <= 1.5]
            assert M[i, j] == (near[0] if near else m + 1)


def test_matrix_sentinel_for_isolated_breakpoint():
    pts = np.array([[0.0, 0.0], [10.0, 0.0], [0.5, 0.0], [20.0, 0.0]])
    M = next_near_matrix(pts, 1.0)
    assert M[2, 3] == 5 and M[4, 1] == 4 and M[1, 2] == 3 and M[1, 4] == 5


def test_segment_query_collinear_true():
    P, bps = fixtures.straight_line(6, length=1.0)
    o = build_segment_oracle(P, bps, 0.3)
    assert segment_query(o, 3, 2, 5)


def test_segment_query_fails_on_far_end():
    pts = [(0, 0), (1, 0), (2, 0), (3, 0), (3, 8)]
    P = build_curve(pts)
    bps = curves.vertex_breakpoints(P)
    o = build_segment_oracle(P, bps, 0.3)
    # P(t_5) is far from every breakpoint in the window after piece 1
    assert o.M[5, 2] > o.y_limits[1]
    assert not segment_query(o, 1, 1, 5)


def test_segment_query_index_checks():
    P, bps = fixtures.straight_line(4)
    o = build_segment_oracle(P, bps, 0.5)
    for z, i, j in ((0, 1, 2), (4, 1, 2), (1, 2, 2), (1, 0, 3), (1, 1, 5)):
        with pytest.raises(IndexError):
            segment_query(o, z, i, j)


def test_segment_query_matches_witness_search():
    rng = np.random.default_rng(43)
    seen = {True: 0, False: 0}
    for _ in range(20):
        P, bps = _random(rng)
        o = build_segment_oracle(P, bps, float(rng.uniform(0.3, 2.0)))
        for _ in range(20):
            z = int(rng.integers(1, bps.m))
            i = int(rng.integers(1, bps.m))
            j = int(rng.integers(i + 1, bps.m + 1))
            got = segment_query(o, z, i, j)
            assert got == brute.segment_membership(o, z, i, j)
            seen[got] += 1
    assert min(seen.values()) > 20


def test_segment_query_ignores_points_outside_window():
    rng = np.random.default_rng(44)
    P, bps = _random(rng, 8, 12)
    o = build_segment_oracle(P, bps, 0.8)
    for z in range(1, bps.m):
        lo, hi = int(o.x_limits[z]), int(o.y_limits[z])
        for i in range(1, bps.m):
            for j in range(i + 1, bps.m + 1):
                keep = set(range(lo, hi + 1)) | {i, j}
                moved = o.points.copy()
                for k in range(1, bps.m + 1):
                    if k not in keep:
                        moved[k - 1] += 100.0
                o2 = dataclasses.replace(o, points=moved, _cache={})
                assert segment_query(o2, z, i, j) == segment_query(o, z, i, j)


def test_shortcut_monotonicity():
    """A segment within alpha of a subcurve stays within 2 alpha on nested sub-intervals."""
    rng = np.random.default_rng(45)
    checked = 0
    for _ in range(40):
        P, bps = _random(rng, 4, 10)
        m = bps.m
        for _ in range(10):
            i0, j0 = sorted(rng.choice(np.arange(1, m + 1), 2, replace=False))
            i = int(rng.integers(i0, j0))
            j = int(rng.integers(i + 1, j0 + 1))
            tau = build_curve(curves.breakpoint_points(P, bps)[[i0 - 1, j0 - 1]])
            alpha = compute_frechet(tau, curves.piece(P, bps, i0, j0), 1e-9)
            assert _fits(P, bps, i, j, 2 * alpha + 1e-8)
            checked += 1
    assert checked == 400


def test_general_collinear_answers_yes():
    P, bps = fixtures.straight_line(6, length=1.0)
    for ell in (1, 2):
        o = build_general_oracle(P, bps, 0.2, ell)
        assert all(s.n == 2 for s in (o.family.plus(1, k) for k in range(2, bps.m + 1)))
        assert general_query(o, 3, 2, 5)
        assert general_query(o, 1, 1, 6)


def test_general_far_pair_answers_no():
    pts = [(0, 0), (1, 0), (2, 0), (3, 0), (100, 0), (200, 0)]
    P = build_curve(pts)
    bps = curves.vertex_breakpoints(P)
    o = build_general_oracle(P, bps, 0.1, 2)
    assert not general_query(o, 1, 5, 6)
    assert not o.contains(2, (4, 6))


def test_general_matrix_contains_segment_matrix():
    rng = np.random.default_rng(46)
    P, bps = _random(rng, 6, 10)
    delta = 0.3
    small = build_segment_oracle(P, bps, delta).M
    big = build_general_oracle(P, bps, delta, 2).M18
    assert np.all(big <= small)


def test_general_query_contract():
    rng = np.random.default_rng(47)
    counts = {True: 0, False: 0}
    for _ in range(60):
        P, bps = _random(rng, 3, 10)
        delta = float(rng.uniform(0.05, 0.5))
        o = build_general_oracle(P, bps, delta, int(rng.integers(1, 4)))
        for _ in range(5):
            z = int(rng.integers(1, bps.m))
            if o.family.sigma_circ(z) is None:
                continue
            i = int(rng.integers(1, bps.m))
            j = int(rng.integers(i + 1, bps.m + 1))
            yes = general_query(o, z, i, j)
            counts[yes] += 1
            if yes:
                assert brute.general_witness(o, z, i, j, 46 * delta)
            else:
                assert not brute.general_witness(o, z, i, j, 10 * delta)
    assert min(counts.values()) > 20


def test_general_sets_contain_exact_sets():
    rng = np.random.default_rng(48)
    for _ in range(10):
        P, bps = _random(rng, 4, 8)
        delta = float(rng.uniform(0.05, 0.4))
        o = build_general_oracle(P, bps, delta, 2)
        for pair in o.pairs:
            for z in range(1, bps.m):
                if o.family.sigma_circ(z) is not None and brute.general_witness(o, z, *pair, 10 * delta):
                    assert o.contains(z, pair)


def test_general_pairs_are_within_limits():
    rng = np.random.default_rng(49)
    P, bps = _random(rng, 6, 10)
    o = build_general_oracle(P, bps, 0.2, 2)
    for i, j in o.pairs:
        assert j <= o.family.y_limit(i) and o.center((i, j)) is not None
