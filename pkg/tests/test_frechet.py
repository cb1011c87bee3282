import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import brute
from subtraj import curves, fixtures
from subtraj.curves import BreakpointSet, build_curve
from subtraj.frechet import (compute_frechet, decide_frechet, free_space, max_reachable_breakpoints,
                             segment_pair_test)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
small_curves = st.integers(2, 5).flatmap(lambda n: arrays(float, (n, 2), elements=coords)).map(build_curve)

OFFSET_A = build_curve([(0, 0), (2, 0)])
OFFSET_B = build_curve([(0, 1), (2, 1)])
ZIGZAG = fixtures.zigzag()
CHORD = build_curve([(0, 0), (2, 0)])


def test_identical_segments_free_diagonal():
    fsd = free_space(OFFSET_A, OFFSET_A, 0.0)
    assert fsd.left.shape == (2, 1, 2)
    assert np.allclose(fsd.left[0, 0], [0, 0], atol=1e-4)
    assert np.allclose(fsd.left[1, 0], [1, 1], atol=1e-4)


def test_offset_segments_touch_only_at_corners():
    fsd = free_space(OFFSET_A, OFFSET_B, 1.0)
    assert np.allclose(fsd.left[0, 0], [0, 0], atol=1e-4)
    assert np.allclose(fsd.bottom[0, 1], [1, 1], atol=1e-4)


def test_saturated_free_space():
    P = build_curve([(0, 0), (1, 2), (3, 1)])
    Q = build_curve([(1, 1), (2, 0)])
    fsd = free_space(P, Q, 100.0)
    assert np.all(fsd.left[..., 0] == 0) and np.all(fsd.left[..., 1] == 1)
    assert np.all(fsd.bottom[..., 0] == 0) and np.all(fsd.bottom[..., 1] == 1)


def test_free_space_transpose_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(20):
        P, Q = fixtures.random_curve(rng, 4), fixtures.random_curve(rng, 3)
        a, b = free_space(P, Q, 3.0), free_space(Q, P, 3.0)
        np.testing.assert_array_equal(np.isnan(a.left), np.isnan(b.bottom.transpose(1, 0, 2)))
        np.testing.assert_allclose(a.left, b.bottom.transpose(1, 0, 2), atol=1e-12)


def test_decide_identity_at_zero():
    P = build_curve([(0, 0), (1, 3), (4, 1), (2, 2)])
    assert decide_frechet(P, P, 0.0)


def test_decide_offset_segments():
    assert decide_frechet(OFFSET_A, OFFSET_B, 1.0)
    assert not decide_frechet(OFFSET_A, OFFSET_B, 0.99)


def test_decide_zigzag():
    assert decide_frechet(ZIGZAG, CHORD, 1.0)
    assert not decide_frechet(ZIGZAG, CHORD, 0.999)
    assert brute.discrete_frechet(ZIGZAG, CHORD) == pytest.approx(1.0, abs=2e-3)


def test_decide_backtracking_curve():
    # going back and forth along a line is far from moving straight
    P = build_curve([(0, 0), (3, 0), (1, 0), (4, 0)])
    Q = build_curve([(0, 0), (4, 0)])
    assert not decide_frechet(P, Q, 0.99)
    assert decide_frechet(P, Q, 1.0)


def test_point_curve_against_curve():
    p = curves.point_curve([0.0, 0.0])
    Q = build_curve([(1, 0), (0, 2)])
    assert decide_frechet(p, Q, 2.0) and not decide_frechet(p, Q, 1.99)


def test_compute_frechet_fixtures():
    assert compute_frechet(OFFSET_A, OFFSET_B) == pytest.approx(1.0, abs=1e-6)
    assert compute_frechet(ZIGZAG, CHORD) == pytest.approx(1.0, abs=1e-6)
    assert compute_frechet(ZIGZAG, ZIGZAG) == pytest.approx(0.0, abs=1e-6)


def test_compute_frechet_rejects_bad_tol():
    with pytest.raises(ValueError):
        compute_frechet(OFFSET_A, OFFSET_B, 0.0)


def test_negative_delta_rejected():
    with pytest.raises(ValueError):
        decide_frechet(OFFSET_A, OFFSET_B, -1.0)


def test_max_reachable_identity():
    P = build_curve([(0, 0), (1, 1), (2, 0)])
    assert max_reachable_breakpoints(P, P, BreakpointSet([0, 1]), 0.0) == [(1, 2), (2, 1)]


def test_max_reachable_far_center():
    P = build_curve([(0, 0), (1, 0)])
    mu = build_curve([(0, 10), (1, 10)])
    bps = BreakpointSet([0, 0.5, 1])
    assert max_reachable_breakpoints(mu, P, bps, 1.0) == [(1, 0), (2, 1), (3, 2)]


def test_max_reachable_partial_overlap():
    P = build_curve([(0, 0), (4, 0)])
    bps = BreakpointSet([0, 0.25, 0.5, 0.75, 1])
    mu = build_curve([(1, 0), (3, 0)])
    out = max_reachable_breakpoints(mu, P, bps, 0.0)
    assert out == [(1, 0), (2, 4), (3, 2), (4, 3), (5, 4)]
    for i, j in out:
        for jj in range(i + 1, bps.m + 1):
            assert decide_frechet(curves.piece(P, bps, i, jj), mu, 0.0) == (jj == j)


def test_max_reachable_matches_pairwise_decisions():
    rng = np.random.default_rng(9)
    for _ in range(30):
        P = fixtures.random_curve(rng, int(rng.integers(3, 8)), scale=3)
        mu = fixtures.random_curve(rng, int(rng.integers(1, 4)), scale=3)
        bps = curves.vertex_breakpoints(P)
        d = float(rng.uniform(0.5, 4))
        for i, j in max_reachable_breakpoints(mu, P, bps, d):
            ok = [jj for jj in range(i + 1, bps.m + 1) if decide_frechet(curves.piece(P, bps, i, jj), mu, d)]
            assert j == (max(ok) if ok else i - 1)


def test_segment_pair_endpoints_coincide():
    assert segment_pair_test((0, 0), (1, 0), (0, 0), (1, 0), 0.0)


def test_segment_pair_perpendicular_offset():
    assert segment_pair_test((0, 1), (1, 1), (0, 0), (1, 0), 1.0)
    assert not segment_pair_test((0, 1), (1, 1), (0, 0), (1, 0), 0.99)


def _grid_minimax(a, b, u, v, steps=1001):
    lam = np.linspace(0, 1, steps)
    pts = u[None] + lam[:, None] * (v - u)[None]
    da = np.linalg.norm(pts - a, axis=1)
    db = np.linalg.norm(pts - b, axis=1)
    # best lam' >= lam for b: suffix minimum
    db_suffix = np.minimum.accumulate(db[::-1])[::-1]
    return float(np.max([da, db_suffix], axis=0).min())


def test_segment_pair_reversed_order_threshold():
    a, b, u, v = map(np.array, [(1.0, 1.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)])
    exact = math.sqrt(5) / 2  # both matched to u-v at 1/2
    assert _grid_minimax(a, b, u, v) == pytest.approx(exact, abs=1e-3)
    assert segment_pair_test(a, b, u, v, exact + 1e-7)
    assert not segment_pair_test(a, b, u, v, exact - 1e-4)


def test_segment_pair_matches_grid_oracle():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        a, b, u, v = rng.uniform(-2, 2, size=(4, 2))
        ref = _grid_minimax(a, b, u, v)
        slack = 1e-3 * np.linalg.norm(v - u) + 1e-9
        assert segment_pair_test(a, b, u, v, ref + slack)
        assert not segment_pair_test(a, b, u, v, ref - slack - 1e-6)


@settings(max_examples=80, deadline=None)
@given(small_curves, small_curves, st.floats(0.01, 20), st.floats(0.0, 5))
def test_decide_monotone_in_delta(P, Q, d, extra):
    if decide_frechet(P, Q, d):
        assert decide_frechet(P, Q, d + extra)


@settings(max_examples=80, deadline=None)
@given(small_curves, small_curves, st.floats(0.01, 20))
def test_decide_symmetric(P, Q, d):
    assert decide_frechet(P, Q, d) == decide_frechet(Q, P, d)


@settings(max_examples=60, deadline=None)
@given(small_curves, small_curves, st.floats(0, 2 * np.pi), arrays(float, 2, elements=coords))
def test_compute_invariant_under_rigid_motion(P, Q, angle, shift):
    R = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    moved = lambda C: build_curve(C.vertices @ R.T + shift)
    tol = 1e-6
    assert compute_frechet(moved(P), moved(Q), tol) == pytest.approx(compute_frechet(P, Q, tol), abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(small_curves, small_curves, small_curves)
def test_triangle_inequality(P, Q, R):
    tol = 1e-6
    assert compute_frechet(P, R, tol) <= compute_frechet(P, Q, tol) + compute_frechet(Q, R, tol) + 3 * tol


def test_compute_matches_discrete_oracle():
    rng = np.random.default_rng(13)
    for _ in range(40):
        P = fixtures.random_curve(rng, int(rng.integers(2, 5)))
        Q = fixtures.random_curve(rng, int(rng.integers(2, 5)))
        tol = 1e-7
        value = compute_frechet(P, Q, tol)
        ref = brute.discrete_frechet(P, Q, 300)
        spacing = max(np.linalg.norm(np.diff(C.vertices, axis=0), axis=1).max() for C in (P, Q)) / 300
        assert value - 2 * tol <= ref <= value + spacing + 2 * tol
