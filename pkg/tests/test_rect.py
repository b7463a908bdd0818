import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from .precision import strict_gap_iii_ii

from steklov import factors as F
from steklov.rect import (
    CLASS_TAGS, CLASSES, XY, DomainError, RectDomain, determining_residual,
    first_branch_bracket, first_candidate, get_class, rect_eigenfunction_eval,
    rect_invariant, rect_spectrum, sweep_rect,
)

SQUARE = {  # (nu, sigma) per class on the square
    "I_i": (2.3650203, 2.3236377), "I_ii": (2.3650203, 2.3236377),
    "II_i": (3.9266023, 3.9296545), "II_ii": (3.9266023, 3.9296545),
    "III_i": (0.9375520, 0.6882527), "IV_ii": (0.9375520, 0.6882527),
    "III_ii": (2.3470455, 2.3903892), "IV_i": (2.3470455, 2.3903892),
}
A_GRID = [round(0.02 * k, 2) for k in range(1, 50)]


def _value_and_slope(kind, nu, t):
    return {
        F.COS: (np.cos(nu * t), -nu * np.sin(nu * t)),
        F.SIN: (np.sin(nu * t), nu * np.cos(nu * t)),
        F.COSH: (np.cosh(nu * t), nu * np.sinh(nu * t)),
        F.SINH: (np.sinh(nu * t), nu * np.cosh(nu * t)),
    }[kind]


def scan_oracle(cls, a, nu_max=None, step=1e-4):
    """Smallest positive root by dense scan, then Brent.

    The two face conditions f'/f = sigma are equated in the pole-free form
    T' H - H' T = 0, built from the factors alone.
    """
    st_, sh = cls.scales(a)
    if nu_max is None:
        nu_max = 2 * math.pi / min(st_, sh) + 10.0

    def g(nu):
        t, dt = _value_and_slope(cls.trig_factor, nu, st_)
        h, dh = _value_and_slope(cls.hyp_factor, nu, sh)
        return dt * h - dh * t

    nus = np.arange(step, nu_max, step)
    vals = g(nus)
    idx = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    nu = brentq(g, nus[idx], nus[idx + 1], xtol=1e-15)
    h, dh = _value_and_slope(cls.hyp_factor, nu, sh)
    return nu, dh / h


class TestDomain:
    @pytest.mark.parametrize("a", [0.0, -0.1, 1.5, math.nan])
    def test_invalid(self, a):
        with pytest.raises(ValueError):
            RectDomain(a)

    def test_from_sides(self):
        dom, scale = RectDomain.from_sides(4.0, 2.0)
        assert dom.a == 0.5 and scale == 2.0
        dom, scale = RectDomain.from_sides(2.0, 4.0)
        assert dom.a == 0.5 and scale == 2.0


class TestClasses:
    def test_eight_classes(self):
        assert len(CLASS_TAGS) == 8

    def test_unknown_tag(self):
        with pytest.raises(KeyError):
            get_class("V_i")

    @pytest.mark.parametrize("tag", CLASS_TAGS)
    def test_one_trig_one_hyperbolic(self, tag):
        kinds = CLASSES[tag].factors
        assert sum(k in F.TRIG for k in kinds) == 1
        assert sum(k in F.HYP for k in kinds) == 1


class TestDeterminingResidual:
    def test_iv_ii_square(self):
        assert abs(determining_residual(get_class("IV_ii"), 1.0, 0.9375520)) < 1e-6

    def test_ii_i_square(self):
        assert abs(determining_residual(get_class("II_i"), 1.0, 3.9266023)) < 1e-6

    def test_iv_ii_negative_near_zero(self):
        assert determining_residual(get_class("IV_ii"), 0.5, 1e-8) < -1e6

    def test_singular_tan(self):
        with pytest.raises(DomainError):
            determining_residual(get_class("IV_ii"), 1.0, math.pi / 2)

    def test_xy_has_none(self):
        with pytest.raises(ValueError):
            determining_residual(XY, 1.0, 1.0)


class TestBracket:
    @pytest.mark.parametrize("tag, a, lo, hi", [
        ("IV_ii", 0.5, 0.0, math.pi / 2),
        ("I_i", 1.0, math.pi / 2, math.pi),
        ("III_i", 0.5, 0.0, math.pi),
    ])
    def test_examples(self, tag, a, lo, hi):
        b = first_branch_bracket(get_class(tag), a)
        assert b.lo == pytest.approx(lo) and b.hi == pytest.approx(hi)

    @pytest.mark.parametrize("tag", CLASS_TAGS)
    @pytest.mark.parametrize("a", [0.1, 0.5, 0.9, 1.0])
    def test_bracket_holds_scan_root(self, tag, a):
        cls = get_class(tag)
        nu, _ = scan_oracle(cls, a)
        b = first_branch_bracket(cls, a)
        assert b.lo < nu < b.hi


class TestFirstCandidate:
    @pytest.mark.parametrize("tag", sorted(SQUARE))
    def test_square_table(self, tag):
        c = first_candidate(get_class(tag), 1.0)
        nu, sigma = SQUARE[tag]
        assert c.nu == pytest.approx(nu, abs=1e-6)
        assert c.sigma == pytest.approx(sigma, abs=1e-6)

    def test_xy_square_only(self):
        assert first_candidate(XY, 1.0).sigma == 1.0
        with pytest.raises(ValueError):
            first_candidate(XY, 0.9)

    @pytest.mark.parametrize("tag", CLASS_TAGS)
    @pytest.mark.parametrize("a", [0.05, 0.3, 0.5, 0.77, 1.0])
    def test_matches_scan_oracle(self, tag, a):
        cls = get_class(tag)
        nu, sigma = scan_oracle(cls, a)
        c = first_candidate(cls, a)
        assert c.nu == pytest.approx(nu, rel=1e-10)
        assert c.sigma == pytest.approx(sigma, rel=1e-10)

    @pytest.mark.parametrize("tag", CLASS_TAGS)
    def test_sigma_matches_eigenvalue_column(self, tag):
        cls = get_class(tag)
        c = first_candidate(cls, 0.6)
        _, sh = cls.scales(0.6)
        assert c.sigma == pytest.approx(F.face_ratio(cls.hyp_factor, c.nu, sh), abs=1e-10)
        assert c.sigma > 0


class TestSpectrum:
    def test_square(self):
        spec = rect_spectrum(1.0)
        assert spec.sigma1 == pytest.approx(0.6882527, abs=1e-6)
        assert {"III_i", "IV_ii"} <= set(spec.eigenspace)
        assert spec.invariant == pytest.approx(5.506, abs=1e-3)

    def test_square_pairs(self):
        spec = rect_spectrum(1.0)
        for x, y in (("I_i", "I_ii"), ("II_i", "II_ii"), ("III_i", "IV_ii"), ("III_ii", "IV_i")):
            assert spec.candidate(x).sigma == pytest.approx(spec.candidate(y).sigma, abs=1e-9)

    def test_half_against_scan(self):
        spec = rect_spectrum(0.5)
        assert spec.eigenspace == ["IV_ii"]
        oracle = min(scan_oracle(get_class(t), 0.5)[1] for t in CLASS_TAGS)
        assert spec.sigma1 == pytest.approx(oracle, rel=1e-10)

    @pytest.mark.parametrize("a", A_GRID)
    def test_iv_ii_strict_minimum(self, a):
        spec = rect_spectrum(a)
        iv = spec.candidate("IV_ii").sigma
        assert spec.sigma1 == iv
        assert spec.eigenspace == ["IV_ii"]
        others = [c.sigma for c in spec.candidates if c.tag != "IV_ii"]
        assert min(others) - iv > 1e-8

    @pytest.mark.parametrize("a", A_GRID + [1.0])
    def test_iii_i_below_ii_i(self, a):
        spec = rect_spectrum(a)
        lo, hi = spec.candidate("III_i").sigma, spec.candidate("II_i").sigma
        if lo < hi:
            return
        # the true gap ~4 nu exp(-2 nu) drops below one ulp for thin rectangles:
        # the float values must then tie to rounding and the 50-digit gap be positive
        assert abs(hi - lo) <= 4 * math.ulp(hi)
        assert strict_gap_iii_ii(a) > 0

    def test_iv_ii_meets_iii_i_only_at_square(self):
        for a in A_GRID:
            spec = rect_spectrum(a)
            assert spec.candidate("III_i").sigma - spec.candidate("IV_ii").sigma > 1e-9
        spec = rect_spectrum(1.0)
        assert abs(spec.candidate("III_i").sigma - spec.candidate("IV_ii").sigma) < 1e-9


class TestInvariant:
    def test_square(self):
        assert rect_invariant(1.0) == pytest.approx(5.506, abs=1e-3)

    def test_half_in_range(self):
        assert 0 < rect_invariant(0.5) < rect_invariant(1.0)

    def test_vanishes_for_thin(self):
        assert rect_invariant(1e-4) < 0.05

    def test_increasing(self):
        inv = [rect_invariant(a) for a in np.linspace(0.01, 1.0, 60)]
        assert all(b > a for a, b in zip(inv, inv[1:]))

    @given(st.floats(0.01, 1.0), st.floats(0.1, 10.0))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariance(self, a, s):
        # [-1/s,1/s] x [-a/s,a/s]: nu -> s*nu, sigma -> s*sigma, L -> L/s
        spec = rect_spectrum(a)
        sigma_scaled = s * spec.sigma1
        perimeter_scaled = 4 * (1 + a) / s
        assert sigma_scaled * perimeter_scaled == pytest.approx(spec.invariant, rel=1e-10)

    def test_from_sides_matches(self):
        dom, _ = RectDomain.from_sides(4.0, 4.0)
        assert rect_invariant(dom.a) == rect_invariant(1.0)


class TestSweep:
    def test_single_row(self):
        t = sweep_rect([1.0])
        assert len(t) == 1
        assert t.rows[0]["sigma1"] == rect_spectrum(1.0).sigma1

    def test_increasing_invariant(self):
        t = sweep_rect(np.linspace(0.1, 1.0, 10))
        inv = t.column("invariant")
        assert all(b > a for a, b in zip(inv, inv[1:]))

    def test_iv_ii_lowest(self):
        t = sweep_rect([0.25, 0.5, 0.75])
        assert t.column("attaining_family") == ["IV_ii"] * 3

    def test_bad_row_recorded(self):
        t = sweep_rect([0.5, 2.0])
        assert t.rows[1]["diagnostics"]
        assert t.rows[0]["diagnostics"] == ""


class TestEval:
    def test_zero_on_axis(self):
        c = first_candidate(get_class("IV_ii"), 1.0)
        y = np.linspace(-1, 1, 7)
        assert np.all(rect_eigenfunction_eval(c, 0.0, y) == 0.0)

    def test_xy(self):
        c = first_candidate(XY, 1.0)
        assert rect_eigenfunction_eval(c, 0.5, 0.5) == 0.25

    def test_corner_value(self):
        c = first_candidate(get_class("IV_ii"), 1.0)
        nu = c.nu
        expected = math.sin(nu) * math.cosh(nu)
        assert rect_eigenfunction_eval(c, 1.0, 1.0) == pytest.approx(expected, rel=1e-14)
        assert rect_eigenfunction_eval(c, 1.0, 1.0, normalized=True) == pytest.approx(
            math.sin(nu), rel=1e-14)
