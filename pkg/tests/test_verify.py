import math

import numpy as np
import pytest

from steklov.box import BoxDomain, box_eigenfunction_factors, box_spectrum
from steklov.rect import XY, first_candidate, get_class, rect_eigenfunction_factors, rect_spectrum
from steklov.verify import (
    GATE, DegenerateFunction, ResidualReport, _dtn_matrix, convergence_study, fd_dtn_rect,
    residual_check,
)

NU_IV = 0.9375520
SIGMA_IV = 0.6882527


def iv_ii_square(x, y):
    return np.sin(NU_IV * x) * np.cosh(NU_IV * y)


def rect_check(cand, a, sigma=None, **kw):
    gx, gy = rect_eigenfunction_factors(cand)
    sigma = cand.sigma if sigma is None else sigma
    return residual_check(lambda x, y: gx(x) * gy(y), sigma, (1.0, a), factors=(gx, gy), **kw)


def box_check(cand):
    g = box_eigenfunction_factors(cand)
    return residual_check(lambda x, y, z: g[0](x) * g[1](y) * g[2](z), cand.sigma,
                          cand.dims.dims, sample_density=16, factors=g)


class TestResidualCheck:
    def test_square_iv_ii(self):
        rep = residual_check(iv_ii_square, SIGMA_IV, (1.0, 1.0))
        assert rep.passes()
        assert max(rep.interior_residual, rep.boundary_residual, rep.rayleigh_gap) < 1e-5

    def test_xy(self):
        rep = residual_check(lambda x, y: x * y, 1.0, (1.0, 1.0))
        # exact zero up to the rounding floor eps / h**2 of the stencil
        assert rep.interior_residual < 1e-6
        assert rep.boundary_residual < 1e-8
        assert rep.rayleigh_gap < 1e-8

    def test_negative_control(self):
        rep = residual_check(iv_ii_square, SIGMA_IV + 0.1, (1.0, 1.0))
        assert rep.boundary_residual > 1e-2
        assert not rep.passes()

    def test_degenerate(self):
        with pytest.raises(DegenerateFunction):
            residual_check(lambda x, y: 0.0 * x, 1.0, (1.0, 1.0))

    @pytest.mark.parametrize("density", [0, 7])
    def test_bad_density(self, density):
        with pytest.raises(ValueError):
            residual_check(iv_ii_square, SIGMA_IV, (1.0, 1.0), sample_density=density)

    def test_fields_nonnegative(self):
        rep = residual_check(iv_ii_square, SIGMA_IV, (1.0, 1.0))
        assert all(v >= 0 for v in rep.as_dict().values())

    def test_tensor_and_separable_agree(self):
        c = first_candidate(get_class("IV_ii"), 0.5)
        gx, gy = rect_eigenfunction_factors(c)
        f = lambda x, y: gx(x) * gy(y)  # noqa: E731
        t = residual_check(f, c.sigma, (1.0, 0.5))
        s = residual_check(f, c.sigma, (1.0, 0.5), factors=(gx, gy))
        assert s.rayleigh_quotient == pytest.approx(t.rayleigh_quotient, rel=1e-9)

    def test_report_passes(self):
        assert ResidualReport(0.0, 0.0, 0.0).passes()
        assert not ResidualReport(0.0, 2 * GATE, 0.0).passes()


class TestGates:
    @pytest.mark.parametrize("a", [0.02, 0.1, 0.25, 0.5, 0.75, 1.0, 1e-3])
    def test_every_rect_candidate(self, a):
        spec = rect_spectrum(a)
        for c in spec.candidates:
            rep = rect_check(c, a)
            assert rep.passes(), (c.tag, rep)

    def test_xy_candidate(self):
        assert rect_check(first_candidate(XY, 1.0), 1.0).passes()

    @pytest.mark.parametrize("dims", [(1, 1, 1), (0.3, 0.7, 1), (0.05, 0.2, 1)])
    def test_every_box_candidate(self, dims):
        spec = box_spectrum(BoxDomain(*dims))
        for c in spec.candidates:
            rep = box_check(c)
            assert rep.passes(), (c.label, rep)

    def test_rayleigh_first_candidates(self):
        for a in (0.25, 0.5, 1.0):
            spec = rect_spectrum(a)
            c = spec.candidate(spec.attaining)
            assert rect_check(c, a).rayleigh_gap < 1e-4

    @pytest.mark.parametrize("a", [0.25, 0.5, 1.0])
    def test_negative_control_rect(self, a):
        spec = rect_spectrum(a)
        c = spec.candidate(spec.attaining)
        assert rect_check(c, a, sigma=c.sigma + 0.1).boundary_residual > 1e-2


class TestOracle:
    @pytest.mark.parametrize("a", [0.25, 0.5, 0.75, 1.0])
    def test_agreement(self, a):
        res = fd_dtn_rect(a, 64)
        assert res.a == a
        assert abs(res.sigma1_fd - rect_spectrum(a).sigma1) < 0.01

    def test_square_spectrum(self):
        res = fd_dtn_rect(1.0, 64)
        ev = res.eigenvalues
        assert abs(ev[0]) < 1e-8
        assert ev == sorted(ev)
        assert res.sigma1_fd == pytest.approx(0.688, abs=0.01)
        assert abs(ev[2] - ev[1]) < 0.01
        assert min(abs(v - 1.0) for v in ev) < 0.02
        assert res.max_imag < 1e-8

    def test_snapping(self):
        res = fd_dtn_rect(0.3, 16)
        assert res.a == round(0.3 * 16) / 16

    @pytest.mark.parametrize("a, n", [(0.0, 64), (1.5, 64), (0.5, 8)])
    def test_bad_input(self, a, n):
        with pytest.raises(ValueError):
            fd_dtn_rect(a, n)

    def test_constant_in_kernel(self):
        D, _, _, _ = _dtn_matrix(0.5, 16)
        assert np.max(np.abs(D @ np.ones(D.shape[0]))) < 1e-8


class TestConvergence:
    def test_square_order(self):
        rows = convergence_study(1.0, [16, 32, 64])
        assert rows[0].order is None
        for r in rows[1:]:
            assert 1.5 <= r.order <= 2.5

    def test_half_decreasing(self):
        rows = convergence_study(0.5, [32, 64])
        assert rows[1].error < rows[0].error

    def test_single(self):
        rows = convergence_study(1.0, [32])
        assert len(rows) == 1 and rows[0].order is None

    def test_unsorted(self):
        with pytest.raises(ValueError):
            convergence_study(1.0, [64, 32])


def test_oracle_ignores_catalogue():
    # the FD module only imports rect inside convergence_study
    import steklov.verify as v
    assert not hasattr(v, "rect_spectrum")
    assert math.isfinite(fd_dtn_rect(0.5, 32).sigma1_fd)
