"""Steklov candidates on the box ``[-a, a] x [-b, b] x [-c, c]``.

Separated eigenfunctions are products of three one-dimensional factors.
Harmonicity forces the squared frequencies of the hyperbolic factors to sum
to those of the trig factors, so every two-parameter family has one axis
carrying ``mu = sqrt(l1**2 + l2**2)``:

* trig on the ``mu`` axis, hyperbolic on the other two, or
* hyperbolic on the ``mu`` axis, trig on the other two.

Each parity class (odd/even per axis) therefore has six two-parameter
families.  In addition there are linear-in-coordinate families
``t * f(l u) g(l v)`` whose eigenvalue is pinned to ``1/d_t`` and which exist
only when two scalar conditions in ``l`` happen to agree, the constant (sigma
= 0) and, on the cube, ``xyz``.

Solving a family uses sigma as the unknown: for a trial sigma every factor's
face condition is inverted for its frequency (monotone on each branch), and
``D(sigma) = sum(k_hyp**2) - sum(k_trig**2)`` must vanish.  ``D`` is strictly
increasing in sigma on every branch combination, so the smallest eigenvalue
of the family is a single bracketed root.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import factors as F
from .rootfind import Bracket, NoSignChange, NoSolution, solve_monotone
from .sweep import SweepTable

AXES = "xyz"
DEFAULT_MULT_TOL = 1e-9
DEFAULT_CONSISTENCY_TOL = 1e-8
DEFAULT_LINEAR_BRANCHES = 8
CUBE_TOL = 1e-12
SIGMA_TOL = 1e-13


@dataclass(frozen=True)
class BoxDomain:
    """Half side lengths of the box."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(math.isfinite(d) and d > 0 for d in self.dims):
            raise ValueError(f"half-lengths must be positive and finite, got {self.dims}")

    @property
    def dims(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def surface_area(self) -> float:
        a, b, c = self.dims
        return 8.0 * (a * b + b * c + c * a)

    @property
    def is_cube(self) -> bool:
        a, b, c = self.dims
        m = max(self.dims)
        return abs(a - b) <= CUBE_TOL * m and abs(b - c) <= CUBE_TOL * m

    @property
    def is_normalized(self) -> bool:
        return self.a <= self.b <= self.c == 1.0

    def normalized(self) -> tuple["BoxDomain", float]:
        """Sort the sides and rescale so the longest is 1.

        Returns the normalised box and the scale ``s`` with
        ``original = s * normalised``; eigenvalues map back as ``sigma / s``.
        """
        a, b, c = sorted(self.dims)
        return BoxDomain(a / c, b / c, 1.0), c

    def scaled(self, s: float) -> "BoxDomain":
        return BoxDomain(s * self.a, s * self.b, s * self.c)


def _parity(factors) -> str:
    return "".join("1" if F.is_odd(k) else "0" for k in factors)


def _factor_label(kind: str, arg: str, axis: str) -> str:
    if kind == F.LIN:
        return axis
    return f"{kind}({arg} {axis})"


@dataclass(frozen=True)
class BoxFamily:
    """Two-parameter separated family.

    ``factors`` gives the factor kind on x, y, z.  The ``mu`` axis carries
    ``sqrt(l1**2 + l2**2)``; ``l1`` sits on the lower-indexed remaining axis.
    """

    factors: tuple[str, str, str]
    mu_axis: int

    @property
    def parity(self) -> str:
        return _parity(self.factors)

    @property
    def lambda_axes(self) -> tuple[int, int]:
        i, j = (k for k in range(3) if k != self.mu_axis)
        return i, j

    @property
    def trig_on_mu(self) -> bool:
        return self.factors[self.mu_axis] in F.TRIG

    @property
    def trig_axis(self) -> int:
        """Axis of the mu factor when it is trig; otherwise the first trig axis."""
        if self.trig_on_mu:
            return self.mu_axis
        return self.lambda_axes[0]

    @property
    def hyp_kinds(self) -> tuple[str, ...]:
        return tuple(k for k in self.factors if k in F.HYP)

    @property
    def label(self) -> str:
        i, j = self.lambda_axes
        args = {i: "l1", j: "l2", self.mu_axis: "mu"}
        return " ".join(_factor_label(self.factors[k], args[k], AXES[k]) for k in range(3))

    @property
    def category(self) -> tuple:
        """Axis-free signature: (mu factor, sorted lambda factors)."""
        i, j = self.lambda_axes
        return (self.factors[self.mu_axis], tuple(sorted((self.factors[i], self.factors[j]))))


@dataclass(frozen=True)
class LinearFamily:
    """``t * f(l u) * g(l v)`` with a bare coordinate on ``linear_axis``."""

    factors: tuple[str, str, str]

    @property
    def linear_axis(self) -> int:
        return self.factors.index(F.LIN)

    @property
    def hyp_axis(self) -> int:
        return next(k for k in range(3) if self.factors[k] in F.HYP)

    @property
    def trig_axis(self) -> int:
        return next(k for k in range(3) if self.factors[k] in F.TRIG)

    @property
    def parity(self) -> str:
        return _parity(self.factors)

    @property
    def mu_axis(self) -> int:
        return self.linear_axis

    def sigma(self, dims: BoxDomain) -> float:
        return 1.0 / dims.dims[self.linear_axis]

    @property
    def label(self) -> str:
        return " ".join(_factor_label(self.factors[k], "l", AXES[k]) for k in range(3))


@dataclass(frozen=True)
class XYZFamily:
    factors: tuple[str, str, str] = (F.LIN, F.LIN, F.LIN)
    parity: str = "111"
    mu_axis: int = 0
    label: str = "x y z"


@dataclass(frozen=True)
class ConstantFamily:
    factors: tuple[str, str, str] = (F.COSH, F.COSH, F.COSH)
    parity: str = "000"
    mu_axis: int = 0
    label: str = "1"


Family = Union[BoxFamily, LinearFamily, XYZFamily, ConstantFamily]


@dataclass(frozen=True)
class BoxCandidate:
    family: Family
    dims: BoxDomain
    lambda1: float
    lambda2: float
    mu: float
    sigma: float
    residuals: tuple[float, float, float]

    @property
    def freqs(self) -> tuple[float, float, float]:
        """Frequency attached to each axis (0 for bare coordinates)."""
        fam = self.family
        out = [0.0, 0.0, 0.0]
        if isinstance(fam, BoxFamily):
            i, j = fam.lambda_axes
            out[i], out[j], out[fam.mu_axis] = self.lambda1, self.lambda2, self.mu
        elif isinstance(fam, LinearFamily):
            out[fam.hyp_axis] = self.lambda1
            out[fam.trig_axis] = self.lambda2
        return tuple(out)

    @property
    def label(self) -> str:
        return self.family.label

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)

    def sort_key(self):
        return (self.sigma, self.family.parity, self.family.mu_axis, self.label)


def _face_residuals(factors, freqs, dims: BoxDomain, sigma: float):
    scale = max(1.0, sigma)
    return tuple((F.face_ratio(k, f, d) - sigma) / scale
                 for k, f, d in zip(factors, freqs, dims.dims))


def enumerate_families(dims: Optional[BoxDomain] = None) -> list[Family]:
    """Complete separated catalogue, class by class (parity bits in x, y, z).

    Per class: the six two-parameter families (trig on the mu axis for
    mu = x, y, z, then hyperbolic on the mu axis), the linear families
    (bare coordinate on each odd axis, trig on either remaining axis), the
    constant in class 000 and ``xyz`` in class 111 when ``dims`` is a cube.
    """
    out: list[Family] = []
    for bits in itertools.product((0, 1), repeat=3):
        trig = [F.SIN if p else F.COS for p in bits]
        hyp = [F.SINH if p else F.COSH for p in bits]
        if bits == (0, 0, 0):
            out.append(ConstantFamily())
        if bits == (1, 1, 1) and dims is not None and dims.is_cube:
            out.append(XYZFamily())
        for trig_mu in (True, False):
            for m in range(3):
                fac = [(trig if trig_mu else hyp)[m] if k == m else
                       (hyp if trig_mu else trig)[k] for k in range(3)]
                out.append(BoxFamily(tuple(fac), m))
        for lin in range(3):
            if not bits[lin]:
                continue
            u, v = (k for k in range(3) if k != lin)
            for t_axis, h_axis in ((u, v), (v, u)):
                fac = [None, None, None]
                fac[lin] = F.LIN
                fac[t_axis] = trig[t_axis]
                fac[h_axis] = hyp[h_axis]
                out.append(LinearFamily(tuple(fac)))
    return out


def _trig_branches(kind: str) -> tuple[int, ...]:
    # For cos, branch 0 has the smallest frequency at every sigma.  For sin,
    # branch 0 stops at sigma = 1/d, so branch 1 must also be tried.
    return (0,) if kind == F.COS else (0, 1)


def _freqs_at(fam: BoxFamily, dims: BoxDomain, sigma: float, branches: dict):
    ks = [0.0, 0.0, 0.0]
    for k, (kind, d) in enumerate(zip(fam.factors, dims.dims)):
        if kind in F.HYP:
            ks[k] = F.invert_hyperbolic(kind, d, sigma)
        else:
            ks[k] = F.invert_trig(kind, d, sigma, branches[k])
    return ks


def _D(fam: BoxFamily, dims: BoxDomain, sigma: float, branches: dict) -> float:
    ks = _freqs_at(fam, dims, sigma, branches)
    return sum((k * k if kind in F.HYP else -k * k)
               for k, kind in zip(ks, fam.factors))


def coupled_residual(family: BoxFamily, dims: BoxDomain, sigma: float,
                     branches: Optional[dict] = None) -> float:
    """Harmonicity defect ``sum(hyp k**2) - sum(trig k**2)`` at trial sigma.

    Each frequency is the inverse of its own face condition at ``sigma``
    (trig axes on the given branches, default 0).  Increasing in sigma;
    its zero is the family's eigenvalue.
    """
    if branches is None:
        branches = {k: 0 for k in range(3) if family.factors[k] in F.TRIG}
    return _D(family, dims, sigma, branches)


def _solve_branch(fam: BoxFamily, dims: BoxDomain, branches: dict, tol: float):
    lo = 0.0
    hi = math.inf
    for kind, d, k in zip(fam.factors, dims.dims, range(3)):
        if kind == F.SINH:
            lo = max(lo, 1.0 / d)
        elif kind in F.TRIG:
            hi = min(hi, F.trig_branch(kind, d, branches[k])[2])
    if not lo < hi:
        return None

    def D(s):
        return _D(fam, dims, s, branches)

    # D is increasing; a root exists iff D < 0 just above lo and D > 0 below hi.
    start = lo + 1e-9 * max(lo, 1e-3) if lo > 0 else 1e-12
    if start >= hi or D(start) >= 0:
        return None
    if math.isinf(hi):
        upper = max(2.0 * start, 1.0)
        for _ in range(200):
            if D(upper) > 0:
                break
            upper *= 2.0
        else:
            return None
    else:
        upper = hi * (1.0 - 1e-12)
        if D(upper) <= 0:
            return None
    res = solve_monotone(D, Bracket(start, upper), tol=tol * max(1.0, upper),
                         closed=True)
    return res.root


def _reconcile(fam: BoxFamily, dims: BoxDomain, sigma: float, ks: list):
    """Make the frequencies satisfy ``sum(hyp**2) == sum(trig**2)`` exactly.

    Each inverted frequency satisfies its own face condition; the small
    harmonicity defect left by the finite sigma bracket is absorbed by the
    axis whose face condition is least sensitive to it.
    """
    signs = [1.0 if kind in F.HYP else -1.0 for kind in fam.factors]
    defect = sum(sg * k * k for sg, k in zip(signs, ks))
    best = None
    for i in range(3):
        k2 = ks[i] * ks[i] - signs[i] * defect
        if k2 <= 0 or ks[i] == 0.0:
            continue
        trial = list(ks)
        trial[i] = math.sqrt(k2)
        res = _face_residuals(fam.factors, trial, dims, sigma)
        worst = max(abs(r) for r in res)
        if best is None or worst < best[0]:
            best = (worst, trial, res)
    if best is None:
        return ks, _face_residuals(fam.factors, ks, dims, sigma)
    return best[1], best[2]


def solve_coupled(family: BoxFamily, dims: BoxDomain, tol: float = SIGMA_TOL,
                  max_branch: int = 100_000) -> BoxCandidate:
    """Smallest eigenvalue of a two-parameter family.

    Trig on the mu axis: a higher branch raises the trig frequency and hence
    the root, so branches are walked upward and the first one admitting a
    root wins.  A short sinh axis can push this far out (sigma > 1/d).

    Hyperbolic on the mu axis: ``D`` starts negative, so the first branches
    (branch 0, plus branch 1 of a sine whose branch 0 stops at ``1/d``)
    always contain the answer; the smallest root over them is taken.

    Raises:
        NoSolution: no admissible sigma within ``max_branch`` branches.
    """
    if not isinstance(family, BoxFamily):
        raise TypeError("solve_coupled takes a two-parameter family")
    trig_axes = [k for k in range(3) if family.factors[k] in F.TRIG]
    best = None
    best_br = None
    if family.trig_on_mu:
        combos = ((j,) for j in range(max_branch))
    else:
        combos = itertools.product(*(_trig_branches(family.factors[k]) for k in trig_axes))
    for combo in combos:
        branches = dict(zip(trig_axes, combo))
        s = _solve_branch(family, dims, branches, tol)
        if s is not None and (best is None or s < best):
            best, best_br = s, branches
            if family.trig_on_mu:
                break
    if best is None:
        raise NoSolution(f"no admissible sigma for {family.label}")
    ks = _freqs_at(family, dims, best, best_br)
    ks, res = _reconcile(family, dims, best, ks)
    i, j = family.lambda_axes
    return BoxCandidate(family, dims, ks[i], ks[j], ks[family.mu_axis], best, res)


@dataclass
class LinearSolution:
    candidates: list[BoxCandidate]
    best_residual: float
    best_lambda: Optional[float]


def solve_linear_family(family: LinearFamily, dims: BoxDomain,
                        consistency_tol: float = DEFAULT_CONSISTENCY_TOL,
                        n_branches: int = DEFAULT_LINEAR_BRANCHES) -> LinearSolution:
    """Check the over-determined pair of conditions of a linear family.

    sigma is fixed at ``1/d`` of the linear axis.  The trig condition is solved
    on each of the first ``n_branches`` branches and a root is accepted when
    the hyperbolic condition also holds to ``consistency_tol`` (relative to
    ``max(1, sigma)``).  The smallest residual seen is always reported.
    """
    sigma = family.sigma(dims)
    t_ax, h_ax = family.trig_axis, family.hyp_axis
    t_kind, h_kind = family.factors[t_ax], family.factors[h_ax]
    dt, dh = dims.dims[t_ax], dims.dims[h_ax]
    scale = max(1.0, sigma)
    cands: list[BoxCandidate] = []
    best_r, best_l = math.inf, None
    for br in range(n_branches):
        try:
            lam = F.invert_trig(t_kind, dt, sigma, br)
        except NoSolution:
            continue
        if lam == 0.0:
            continue
        r = abs(F.face_ratio(h_kind, lam, dh) - sigma) / scale
        if r < best_r:
            best_r, best_l = r, lam
        if r <= consistency_tol:
            ks = [0.0, 0.0, 0.0]
            ks[t_ax] = ks[h_ax] = lam
            res = _face_residuals(family.factors, ks, dims, sigma)
            cands.append(BoxCandidate(family, dims, lam, lam, 0.0, sigma, res))
    return LinearSolution(cands, best_r, best_l)


@dataclass
class BoxSpectrum:
    dims: BoxDomain
    candidates: list[BoxCandidate]
    sigma1: float
    eigenspace: list[BoxCandidate]
    invariant: float
    trivial: Optional[BoxCandidate] = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def attaining(self) -> BoxCandidate:
        return self.eigenspace[0]


def _group(cands, sigma1, mult_tol):
    thresh = mult_tol * max(1.0, sigma1)
    return [c for c in cands if abs(c.sigma - sigma1) <= thresh]


def box_spectrum(dims: BoxDomain, mult_tol: float = DEFAULT_MULT_TOL,
                 consistency_tol: float = DEFAULT_CONSISTENCY_TOL) -> BoxSpectrum:
    """Solve every family and pick out sigma_1 with its eigenspace."""
    cands: list[BoxCandidate] = []
    diags: list[str] = []
    trivial = None
    for fam in enumerate_families(dims):
        if isinstance(fam, ConstantFamily):
            trivial = BoxCandidate(fam, dims, 0.0, 0.0, 0.0, 0.0, (0.0, 0.0, 0.0))
        elif isinstance(fam, XYZFamily):
            s = 1.0 / dims.a
            res = _face_residuals(fam.factors, (0.0, 0.0, 0.0), dims, s)
            cands.append(BoxCandidate(fam, dims, 0.0, 0.0, 0.0, s, res))
        elif isinstance(fam, LinearFamily):
            sol = solve_linear_family(fam, dims, consistency_tol)
            cands.extend(sol.candidates)
            if not sol.candidates:
                diags.append(f"{fam.label}: inconsistent (best residual {sol.best_residual:.3e})")
        else:
            try:
                cands.append(solve_coupled(fam, dims))
            except (NoSolution, NoSignChange) as exc:
                diags.append(f"{fam.label}: {exc}")
    cands.sort(key=BoxCandidate.sort_key)
    positive = [c for c in cands if c.sigma > 0]
    sigma1 = positive[0].sigma
    space = _group(positive, sigma1, mult_tol)
    inv = sigma1 * math.sqrt(dims.surface_area)
    return BoxSpectrum(dims, cands, sigma1, space, inv, trivial, diags)


def box_invariant(dims: BoxDomain) -> float:
    """``sigma_1 * sqrt(surface area)``, unchanged under scaling."""
    return box_spectrum(dims).invariant


def is_conjectured_family(cand: BoxCandidate) -> bool:
    """cosh * cosh * sin with the sine on the longest axis."""
    fam = cand.family
    if not isinstance(fam, BoxFamily) or fam.factors[fam.mu_axis] != F.SIN:
        return False
    if any(fam.factors[k] != F.COSH for k in fam.lambda_axes):
        return False
    dims = cand.dims.dims
    return dims[fam.mu_axis] == max(dims)


def sweep_box(a_grid, b_grid, mult_tol: float = DEFAULT_MULT_TOL) -> SweepTable:
    """sigma_1 over boxes ``[-a,a] x [-b,b] x [-1,1]`` with ``b >= a``."""
    table = SweepTable(["a", "b", "sigma1", "invariant", "attaining_family",
                        "multiplicity", "conjectured_family_attains", "diagnostics"])
    for a in a_grid:
        for b in b_grid:
            a, b = float(a), float(b)
            if b < a:
                continue
            row = {"a": a, "b": b}
            try:
                spec = box_spectrum(BoxDomain(a, b, 1.0), mult_tol)
            except (ValueError, ArithmeticError) as exc:
                row["diagnostics"] = f"{type(exc).__name__}: {exc}"
                table.append(row)
                continue
            row.update(
                sigma1=spec.sigma1, invariant=spec.invariant,
                attaining_family=spec.attaining.label,
                multiplicity=len(spec.eigenspace),
                conjectured_family_attains=any(is_conjectured_family(c) for c in spec.eigenspace),
                diagnostics="",
            )
            table.append(row)
    return table


def box_eigenfunction_factors(candidate: BoxCandidate, normalized: bool = True):
    """Per-axis callables whose product is the eigenfunction.

    With ``normalized`` each hyperbolic factor is divided by its face value.
    """
    if isinstance(candidate.family, ConstantFamily):
        return tuple(np.ones_like for _ in range(3))
    dims = candidate.dims.dims if normalized else (None, None, None)
    return tuple(
        (lambda t, kind=kind, k=k, d=d: F.evaluate(kind, k, t, d))
        for kind, k, d in zip(candidate.family.factors, candidate.freqs, dims))


def box_eigenfunction_eval(candidate: BoxCandidate, x, y, z, normalized: bool = False):
    """Evaluate the candidate's product at ``(x, y, z)``.

    ``normalized`` scales each hyperbolic factor to 1 on its faces.
    """
    gx, gy, gz = box_eigenfunction_factors(candidate, normalized)
    shape = np.broadcast(np.asarray(x), np.asarray(y), np.asarray(z)).shape
    return gx(np.asarray(x, float)) * gy(np.asarray(y, float)) * gz(np.asarray(z, float)) \
        * np.ones(shape)
