import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from subtraj import curves
from subtraj.curves import BreakpointSet, build_curve

coords = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
point_arrays = st.integers(2, 8).flatmap(lambda n: arrays(float, (n, 2), elements=coords))


def test_two_point_chord_params():
    P = build_curve([(0, 0), (1, 0)])
    assert P.params.tolist() == [0.0, 1.0]


def test_chord_params_follow_cumulative_length():
    P = build_curve([(0, 0), (1, 0), (3, 0)])
    assert np.allclose(P.params, [0, 1 / 3, 1])


def test_consecutive_duplicates_dropped():
    P = build_curve([(0, 0), (0, 0), (1, 0)])
    assert P.n == 2
    assert P.params.tolist() == [0.0, 1.0]


def test_all_identical_points_give_single_point_curve():
    P = build_curve([(2, 3), (2, 3), (2, 3)])
    assert P.n == 1 and P.params.tolist() == [0.0]


def test_identical_points_with_explicit_params_rejected():
    with pytest.raises(ValueError):
        build_curve([(1, 1), (1, 1)], [0.0, 1.0])


@pytest.mark.parametrize("params", [[0.0, 0.5], [0.1, 1.0], [0.0, 0.7, 0.5, 1.0], [0.0, 0.0, 1.0]])
def test_bad_explicit_params_rejected(params):
    pts = np.arange(2 * len(params), dtype=float).reshape(-1, 2)
    with pytest.raises(ValueError):
        build_curve(pts, params)


def test_explicit_params_kept():
    P = build_curve([(0, 0), (1, 0), (3, 0)], [0.0, 0.5, 1.0])
    assert P.params.tolist() == [0.0, 0.5, 1.0]


@pytest.mark.parametrize("bad", [[], [[np.nan, 0]], [[np.inf, 1], [0, 0]], np.zeros((2, 0))])
def test_invalid_points_rejected(bad):
    with pytest.raises(ValueError):
        build_curve(bad)


def test_curve_arrays_are_read_only():
    P = build_curve([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        P.vertices[0, 0] = 5.0


def test_subcurve_identity():
    P = build_curve([(0, 0), (1, 2), (3, 1)])
    assert curves.subcurve(P, 0, 1).same_as(P)


def test_subcurve_inside_one_edge():
    P = build_curve([(0, 0), (2, 0)])
    S = curves.subcurve(P, 0.25, 0.75)
    assert np.allclose(S.vertices, [(0.5, 0), (1.5, 0)])


def test_degenerate_subcurve_is_a_point():
    P = build_curve([(0, 0), (2, 0), (2, 2)])
    S = curves.subcurve(P, 0.5, 0.5)
    assert S.n == 1 and np.allclose(S.vertices[0], (2, 0))


def test_subcurve_argument_checks():
    P = build_curve([(0, 0), (2, 0)])
    with pytest.raises(ValueError):
        curves.subcurve(P, 0.6, 0.4)
    with pytest.raises(ValueError):
        curves.subcurve(P, -0.5, 0.4)


def test_point_at_vertices_exact():
    P = build_curve([(0, 0), (1, 0), (1, 5)])
    for v, t in zip(P.vertices, P.params):
        assert np.array_equal(curves.point_at(P, t), v)


def test_breakpoint_set_validation():
    with pytest.raises(ValueError):
        BreakpointSet([0.0])
    with pytest.raises(ValueError):
        BreakpointSet([0.0, 0.5])
    with pytest.raises(ValueError):
        BreakpointSet([0.0, 0.5, 0.5, 1.0])
    b = BreakpointSet([0.0, 0.3, 1.0])
    assert b.m == 3 and list(b.ground) == [1, 2] and b.t(2) == 0.3
    with pytest.raises(IndexError):
        b.t(0)


def test_concat_requires_shared_endpoint():
    A = build_curve([(0, 0), (1, 0)])
    B = build_curve([(1, 0), (1, 1)])
    C = curves.concat(A, B)
    assert np.allclose(C.vertices, [(0, 0), (1, 0), (1, 1)])
    with pytest.raises(ValueError):
        curves.concat(A, build_curve([(5, 5), (6, 6)]))


@settings(max_examples=150, deadline=None)
@given(point_arrays, st.floats(0, 1), st.floats(0, 1))
def test_subcurve_endpoints_and_params(pts, a, b):
    P = build_curve(pts)
    a, b = min(a, b), max(a, b)
    S = curves.subcurve(P, a, b)
    assert np.allclose(S.start, curves.point_at(P, a), atol=1e-6)
    assert np.allclose(S.end, curves.point_at(P, b), atol=1e-6)
    if S.n > 1:
        assert S.params[0] == 0.0 and S.params[-1] == 1.0
        assert np.all(np.diff(S.params) > 0)


@settings(max_examples=150, deadline=None)
@given(point_arrays, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_subcurve_points_lie_on_curve(pts, a, b, s):
    P = build_curve(pts)
    a, b = min(a, b), max(a, b)
    S = curves.subcurve(P, a, b)
    if P.n > 1 and b > a and S.n > 1:
        # chord params of P make the inner parameter map affine
        assert np.allclose(curves.point_at(S, s), curves.point_at(P, a + s * (b - a)), atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(point_arrays)
def test_reverse_is_an_involution(pts):
    P = build_curve(pts)
    R = curves.reverse(P)
    assert np.array_equal(R.start, P.end)
    assert curves.reverse(R).same_as(P)
    if R.n > 1:
        assert np.all(np.diff(R.params) > 0)


@settings(max_examples=100, deadline=None)
@given(point_arrays)
def test_no_consecutive_duplicates_survive(pts):
    P = build_curve(np.repeat(pts, 2, axis=0))
    if P.n > 1:
        assert np.all(np.linalg.norm(np.diff(P.vertices, axis=0), axis=1) > curves.EPS)
