import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from steklov.rootfind import (
    DEFAULT_TOL, NU_COTH, NU_TANH, Bracket, MaxIterations, NoSignChange, NoSolution,
    forward_map, invert_monotone_map, solve_monotone,
)


def test_bracket_rejects_empty_interval():
    with pytest.raises(ValueError):
        Bracket(1.0, 1.0)


def test_probe_records_signs():
    b = Bracket.probe(lambda x: x - 1.0, 0.0, 2.0)
    assert (b.f_lo_sign, b.f_hi_sign) == (-1, 1)


def test_probe_without_sign_change():
    with pytest.raises(NoSignChange):
        Bracket.probe(lambda x: x * x + 1.0, -1.0, 1.0)


@pytest.mark.parametrize("f, lo, hi, root, tol", [
    (lambda v: math.tan(v) - 1 / math.tanh(v), 0.0, math.pi / 2, 0.9375520, 1e-7),
    (lambda v: v - 1.0, 0.0, 2.0, 1.0, 1e-11),
    (lambda v: math.tan(v) + math.tanh(v), math.pi / 2, math.pi, 2.3650203, 1e-7),
])
def test_solve_monotone_known_roots(f, lo, hi, root, tol):
    res = solve_monotone(f, Bracket(lo, hi))
    assert res.converged
    assert lo < res.root < hi
    assert res.root == pytest.approx(root, abs=tol)


def test_solve_monotone_same_sign():
    with pytest.raises(NoSignChange):
        solve_monotone(lambda x: x + 5.0, Bracket(0.0, 1.0))


def test_solve_monotone_iteration_cap():
    with pytest.raises(MaxIterations):
        solve_monotone(lambda x: x - 0.3, Bracket(0.0, 1.0), tol=1e-15, max_iter=5)


def test_solve_monotone_rejects_bad_tol():
    with pytest.raises(ValueError):
        solve_monotone(lambda x: x, Bracket(-1.0, 1.0), tol=0.0)


def test_deterministic():
    f = lambda v: math.tan(v) - 1 / math.tanh(v)  # noqa: E731
    a = solve_monotone(f, Bracket(0.0, math.pi / 2))
    b = solve_monotone(f, Bracket(0.0, math.pi / 2))
    assert a == b


@given(st.floats(-50, 50), st.floats(0.1, 20))
@settings(max_examples=200, deadline=None)
def test_residual_consistency(root, slope):
    # |f(root)| < 10 tol max(1, |f'|) for linear and cubic monotone maps
    for f in (lambda x: slope * (x - root), lambda x: (x - root) ** 3 + slope * (x - root)):
        res = solve_monotone(f, Bracket(root - 3.0, root + 7.0))
        h = 1e-6
        deriv = (f(res.root + h) - f(res.root - h)) / (2 * h)
        assert abs(res.residual) < 10 * DEFAULT_TOL * max(1.0, abs(deriv))


def test_invert_tanh_square_eigenvalue():
    assert invert_monotone_map(NU_TANH, 1.0, 0.6882527) == pytest.approx(0.9375520, abs=1e-6)


def test_invert_coth_below_range():
    with pytest.raises(NoSolution):
        invert_monotone_map(NU_COTH, 1.0, 0.5)


def test_invert_coth_degenerate_limit():
    assert invert_monotone_map(NU_COTH, 2.0, 0.5) == 0.0
    assert invert_monotone_map(NU_COTH, 2.0, 0.5 * (1 + 5e-10)) == 0.0


def test_invert_nonpositive_sigma():
    with pytest.raises(NoSolution):
        invert_monotone_map(NU_TANH, 1.0, 0.0)


def test_invert_tanh_half_scale_against_brent():
    # independent oracle: Brent's method on nu*tanh(nu/2) - 1
    expected = brentq(lambda v: v * math.tanh(0.5 * v) - 1.0, 0.1, 10.0, xtol=1e-14)
    got = invert_monotone_map(NU_TANH, 0.5, 1.0)
    assert got == pytest.approx(expected, abs=1e-11)
    assert got * math.tanh(0.5 * got) == pytest.approx(1.0, abs=1e-12)


def test_forward_map_continuous_at_zero():
    assert forward_map(NU_COTH, 0.25, 0.0) == 4.0
    assert forward_map(NU_COTH, 0.25, 1e-8) == pytest.approx(4.0)
    assert forward_map(NU_TANH, 0.25, 0.0) == 0.0


@given(st.sampled_from([NU_TANH, NU_COTH]), st.floats(0.05, 1.0), st.floats(1e-3, 50.0))
@settings(max_examples=1000, deadline=None)
def test_invert_round_trip(kind, s, sigma):
    if kind == NU_COTH:
        sigma = 1.0 / s + sigma  # stay inside the coth map's range
    nu = invert_monotone_map(kind, s, sigma)
    assert forward_map(kind, s, nu) == pytest.approx(sigma, rel=1e-10)
