"""Independent checks of computed eigenpairs.

``residual_check`` tests any vectorised evaluator against the Steklov
problem itself (harmonic inside, ``ds/dn = sigma*s`` on the faces) and
against the Rayleigh quotient, using nothing but point evaluations.

``fd_dtn_rect`` recomputes the low Steklov spectrum of a rectangle from a
finite-difference Dirichlet-to-Neumann matrix, without reference to the
separated families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

H_FD = 1e-4
GATE = 1e-5


class DegenerateFunction(ValueError):
    """The evaluator vanishes (numerically) on every sample point."""


class SingularSystem(ArithmeticError):
    """The interior Dirichlet problem could not be factorised."""


@dataclass
class ResidualReport:
    interior_residual: float
    boundary_residual: float
    rayleigh_gap: float
    rayleigh_quotient: float = math.nan

    def passes(self, gate: float = GATE) -> bool:
        return max(self.interior_residual, self.boundary_residual,
                   self.rayleigh_gap) < gate

    def as_dict(self) -> dict:
        return {
            "interior_residual": self.interior_residual,
            "boundary_residual": self.boundary_residual,
            "rayleigh_gap": self.rayleigh_gap,
            "rayleigh_quotient": self.rayleigh_quotient,
        }


GAUSS_POINTS = 6
# node caps: tensor grids stay tractable, 1-D factor integrals can afford more
MAX_AXIS_NODES = 600
MAX_FACTOR_NODES = 600_000
_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(GAUSS_POINTS)


def _gauss_nodes(d: float, sigma: float,
                 max_nodes: int = MAX_AXIS_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on ``[-d, d]``.

    Panels are at most ``2/max(sigma, 1)`` wide so exponential and trig
    factors (rate about sigma) stay resolved, up to ``max_nodes``.
    """
    panels = max(2, math.ceil(d * max(abs(sigma), 1.0)))
    panels = min(panels, max_nodes // GAUSS_POINTS)
    edges = np.linspace(-d, d, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _PANEL_X[None, :]).ravel()
    w = (half[:, None] * _PANEL_W[None, :]).ravel()
    return x, w


def _central(g, x: np.ndarray, h: float) -> np.ndarray:
    return (8 * (g(x + h) - g(x - h)) - (g(x + 2 * h) - g(x - 2 * h))) / (12 * h)


def _integrate_1d(vals: Callable[[np.ndarray], np.ndarray], d: float, sigma: float,
                  rtol: float = 1e-12) -> float:
    """Composite Gauss integral over ``[-d, d]``, panels doubled until stable."""
    panels = max(2, math.ceil(d * max(abs(sigma), 1.0)))
    prev = None
    while True:
        x, w = _gauss_nodes(d, panels / d, GAUSS_POINTS * panels)
        cur = float(np.sum(w * vals(x)))
        if prev is not None and abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        if GAUSS_POINTS * panels * 2 > MAX_FACTOR_NODES:
            return cur
        prev = cur
        panels *= 2


def _separable_rayleigh(factors: Sequence[Callable], dims: Sequence[float],
                        sigma: float, h: float) -> float:
    """Rayleigh quotient of ``prod_k g_k(t_k)`` from 1-D integrals only.

    ``int |grad s|^2 = sum_k int g_k'^2 prod_{j!=k} int g_j^2`` and the
    boundary integral is ``sum_k (g_k(d_k)^2 + g_k(-d_k)^2) prod_{j!=k} int g_j^2``.
    """
    sq, dsq, ends = [], [], []
    for g, d in zip(factors, dims):
        sq.append(_integrate_1d(lambda x, g=g: g(x) ** 2, d, sigma))
        dsq.append(_integrate_1d(lambda x, g=g: _central(g, x, h) ** 2, d, sigma))
        ends.append(float(g(np.array([d]))[0] ** 2 + g(np.array([-d]))[0] ** 2))
    num = den = 0.0
    for k in range(len(dims)):
        rest = math.prod(sq[j] for j in range(len(dims)) if j != k)
        num += dsq[k] * rest
        den += ends[k] * rest
    return num / den


def _lap(f, pts: list[np.ndarray], h: float) -> np.ndarray:
    centre = f(*pts)
    out = -2.0 * len(pts) * centre
    for k in range(len(pts)):
        for sgn in (1.0, -1.0):
            shifted = list(pts)
            shifted[k] = pts[k] + sgn * h
            out = out + f(*shifted)
    return out / h**2


def _grad_sq(f, pts: list[np.ndarray], h: float) -> np.ndarray:
    total = 0.0
    for k in range(len(pts)):
        def along(t, k=k):
            p = list(pts)
            p[k] = t
            return f(*p)
        g = _central(along, pts[k], h)
        total = total + g * g
    return total


def _outer_weights(ws: list[np.ndarray]) -> np.ndarray:
    w = ws[0]
    for wk in ws[1:]:
        w = np.multiply.outer(w, wk)
    return w


def residual_check(f: Callable, sigma: float, dims: Sequence[float],
                   sample_density: int = 64,
                   h_fd: Optional[float] = None,
                   factors: Optional[Sequence[Callable]] = None) -> ResidualReport:
    """Check a candidate eigenpair on the box ``prod [-d_k, d_k]``.

    Args:
        f: Vectorised evaluator taking one coordinate array per axis.
        sigma: Claimed eigenvalue.
        dims: Half-lengths (two for a rectangle, three for a box).
        sample_density: Sample points per unit length.
        h_fd: Finite-difference step.  Defaults to ``H_FD``, reduced for
            large sigma so the stencils resolve the factors.  Stencils may
            reach past the faces, so the evaluator must be analytic there.
        factors: Optional per-axis 1-D callables whose product is ``f``.
            When given, the Rayleigh quotient is assembled from 1-D
            integrals, which resolves the thin boundary layers of very
            high modes that a tensor grid cannot afford.

    Returns:
        ResidualReport with
        ``interior_residual = max|lap s| / (max|s| max(1, sigma**2))`` (5/7-point stencil at
        steps h and 2h, Richardson-combined),
        ``boundary_residual = max|ds/dn - sigma s| / (max|s| max(1, sigma))``
        with a one-sided 4-point derivative on face samples (edges and
        corners excluded), and ``rayleigh_gap = |R(s) - sigma| / sigma``
        where R is the Rayleigh quotient by composite Gauss-Legendre quadrature.

    Raises:
        DegenerateFunction: ``max|s| < 1e-14`` over the samples.
    """
    dims = [float(d) for d in dims]
    ndim = len(dims)
    if ndim not in (2, 3):
        raise ValueError("dims must have 2 or 3 entries")
    if sample_density < 8:
        raise ValueError("sample_density must be at least 8")
    if h_fd is None:
        h_fd = min(H_FD, 0.01 / max(abs(sigma), 1.0))
    nodes = [np.linspace(-d, d, 4 * max(4, math.ceil(2 * d * sample_density / 4)) + 1)
             for d in dims]
    grids = np.meshgrid(*nodes, indexing="ij")
    values = f(*grids) * np.ones_like(grids[0])
    scale = float(np.max(np.abs(values)))
    if scale < 1e-14:
        raise DegenerateFunction("evaluator vanishes on all samples")

    # interior: every node off the faces
    ig = np.meshgrid(*[x[1:-1] for x in nodes], indexing="ij")
    lap = (4 * _lap(f, ig, h_fd) - _lap(f, ig, 2 * h_fd)) / 3
    interior = float(np.max(np.abs(lap))) / (scale * max(1.0, sigma * sigma))

    # boundary: faces t_k = +-d_k, tangential nodes strictly inside
    bmax = 0.0
    for k in range(ndim):
        tang = [x[1:-1] for x in nodes]
        for side in (1.0, -1.0):
            face = list(tang)
            face[k] = np.array([side * dims[k]])
            fg = np.meshgrid(*face, indexing="ij")
            samples = []
            for m in range(4):
                p = list(fg)
                p[k] = fg[k] - side * m * h_fd
                samples.append(f(*p) * np.ones_like(fg[0]))
            f0, f1, f2, f3 = samples
            dn = (11 * f0 - 18 * f1 + 9 * f2 - 2 * f3) / (6 * h_fd)
            bmax = max(bmax, float(np.max(np.abs(dn - sigma * f0))))
    boundary = bmax / (scale * max(1.0, sigma))

    if factors is not None:
        if len(factors) != ndim:
            raise ValueError("need one factor per axis")
        rq = _separable_rayleigh(factors, dims, sigma, h_fd)
        gap = abs(rq - sigma) / abs(sigma) if sigma != 0 else abs(rq)
        return ResidualReport(interior, boundary, gap, rq)

    # Rayleigh quotient on a tensor grid
    gauss = [_gauss_nodes(d, sigma) for d in dims]
    qg = np.meshgrid(*[g[0] for g in gauss], indexing="ij")
    num = float(np.sum(_outer_weights([g[1] for g in gauss]) * _grad_sq(f, qg, h_fd)))
    den = 0.0
    for k in range(ndim):
        for side in (1.0, -1.0):
            face = [np.array([side * dims[k]]) if j == k else gauss[j][0]
                    for j in range(ndim)]
            fw = _outer_weights([np.ones(1) if j == k else gauss[j][1]
                                 for j in range(ndim)])
            fg = np.meshgrid(*face, indexing="ij")
            v = f(*fg) * np.ones_like(fg[0])
            den += float(np.sum(fw * v * v))
    rq = num / den
    gap = abs(rq - sigma) / abs(sigma) if sigma != 0 else abs(rq)
    return ResidualReport(interior, boundary, gap, rq)


@dataclass
class DtnOracleResult:
    grid_n: int
    sigma1_fd: float
    eigenvalues: list[float]
    h: float
    a: float
    max_imag: float = 0.0


def _dtn_matrix(a: float, grid_n: int):
    n = grid_n
    m = round(a * n)
    if m < 2:
        raise ValueError(f"grid_n={n} too coarse for a={a}")
    h = 1.0 / n
    nx, ny = 2 * n + 1, 2 * m + 1
    idx = -np.ones((nx, ny), dtype=int)
    ii, jj = np.meshgrid(np.arange(1, nx - 1), np.arange(1, ny - 1), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    n_int = ii.size
    idx[ii, jj] = np.arange(n_int)

    # boundary nodes, corners excluded: bottom, top, left, right
    bnodes = ([(i, 0) for i in range(1, nx - 1)] + [(i, ny - 1) for i in range(1, nx - 1)]
              + [(0, j) for j in range(1, ny - 1)] + [(nx - 1, j) for j in range(1, ny - 1)])
    bidx = -np.ones((nx, ny), dtype=int)
    for k, (i, j) in enumerate(bnodes):
        bidx[i, j] = k
    n_b = len(bnodes)

    rows, cols, vals = [np.arange(n_int)], [np.arange(n_int)], [np.full(n_int, -4.0)]
    brow, bcol = [], []
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = ii + di, jj + dj
        inside = idx[ni, nj] >= 0
        rows.append(np.flatnonzero(inside))
        cols.append(idx[ni, nj][inside])
        vals.append(np.ones(inside.sum()))
        brow.append(np.flatnonzero(~inside))
        bcol.append(bidx[ni, nj][~inside])
    A = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n_int, n_int))
    brow, bcol = np.concatenate(brow), np.concatenate(bcol)
    B = np.zeros((n_int, n_b))
    B[brow, bcol] = 1.0
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise SingularSystem(str(exc)) from exc
    U = -lu.solve(B)  # harmonic extension of each unit boundary vector
    if not np.all(np.isfinite(U)):
        raise SingularSystem("Dirichlet solve produced non-finite values")

    D = np.zeros((n_b, n_b))
    for k, (i, j) in enumerate(bnodes):
        if j == 0:
            q1, q2 = (i, 1), (i, 2)
        elif j == ny - 1:
            q1, q2 = (i, ny - 2), (i, ny - 3)
        elif i == 0:
            q1, q2 = (1, j), (2, j)
        else:
            q1, q2 = (nx - 2, j), (nx - 3, j)
        # outward derivative, second-order one-sided
        row = -4.0 * U[idx[q1]] + U[idx[q2]]
        row[k] += 3.0
        D[k] = row / (2 * h)
    weights = np.full(n_b, h)  # boundary measure per node
    return D, weights, m / n, h


def fd_dtn_rect(a: float, grid_n: int = 64, k_eigs: int = 8) -> DtnOracleResult:
    """Leading Steklov eigenvalues of ``[-1,1] x [-a,a]`` by finite differences.

    ``a`` is snapped to the mesh (``a*grid_n`` rounded); the snapped value is
    reported.  The DtN matrix is not symmetric with one-sided normal
    derivatives, so its eigenvalues are taken from the measure-weighted
    similarity transform directly; they come out real.
    """
    if not 0 < a <= 1:
        raise ValueError(f"need 0 < a <= 1, got a={a!r}")
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    D, w, a_snap, h = _dtn_matrix(a, grid_n)
    sq = np.sqrt(w)
    Dw = (sq[:, None] * D) / sq[None, :]
    ev = np.linalg.eigvals(Dw)
    order = np.argsort(ev.real)
    ev = ev[order]
    lead = ev[: k_eigs + 1]
    vals = [float(v) for v in lead.real]
    # first entry is the constant mode
    return DtnOracleResult(grid_n, vals[1], vals, h, a_snap,
                           float(np.max(np.abs(lead.imag))))


@dataclass
class ConvergenceRow:
    grid_n: int
    sigma1_fd: float
    error: float
    order: Optional[float] = None


def convergence_study(a: float, grids: Sequence[int]) -> list[ConvergenceRow]:
    """FD oracle error against the closed-form sigma_1 on a ladder of grids.

    The order column is ``log(e_prev/e) / log(n/n_prev)`` between successive
    grids.
    """
    from .rect import rect_spectrum

    grids = list(grids)
    if grids != sorted(grids):
        raise ValueError("grids must be ascending")
    rows: list[ConvergenceRow] = []
    for n in grids:
        res = fd_dtn_rect(a, n)
        exact = rect_spectrum(res.a).sigma1
        err = abs(res.sigma1_fd - exact)
        order = None
        if rows and err > 0 and rows[-1].error > 0:
            order = math.log(rows[-1].error / err) / math.log(n / rows[-1].grid_n)
        rows.append(ConvergenceRow(n, res.sigma1_fd, err, order))
    return rows
