"""Steklov candidates on the rectangle ``[-1, 1] x [-a, a]``, ``0 < a <= 1``.

Each of the eight separated classes pairs a trig factor on one axis with a
hyperbolic factor of the same frequency ``nu`` on the other.  Equating the
two face conditions gives a determining equation in ``nu`` alone, which is
written with ``tan`` isolated:

    cos & cosh:  tan(nu*st) + tanh(nu*sh) = 0
    sin & sinh:  tan(nu*st) - tanh(nu*sh) = 0
    sin & cosh:  tan(nu*st) - coth(nu*sh) = 0
    cos & sinh:  tan(nu*st) + coth(nu*sh) = 0

where ``st``/``sh`` are the half-lengths of the trig/hyperbolic axes.  The
eigenvalue is then ``nu*tanh(nu*sh)`` (cosh) or ``nu*coth(nu*sh)`` (sinh).
On the square the extra eigenfunction ``xy`` with eigenvalue 1 is added.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import factors as F
from .rootfind import (
    DEFAULT_TOL, NU_COTH, NU_TANH, Bracket, forward_map, solve_monotone,
)
from .sweep import SweepTable

SQUARE_TOL = 1e-12
DEFAULT_MULT_TOL = 1e-9

TAN_PLUS_TANH = "tan_plus_tanh"
TAN_EQ_TANH = "tan_eq_tanh"
TAN_EQ_COTH = "tan_eq_coth"
TAN_PLUS_COTH = "tan_plus_coth"


class DomainError(ValueError):
    """Argument outside the domain where a determining function is defined."""


@dataclass(frozen=True)
class RectDomain:
    """Normalised rectangle ``[-1, 1] x [-a, a]``."""

    a: float

    def __post_init__(self):
        if not 0 < self.a <= 1:
            raise ValueError(f"need 0 < a <= 1, got a={self.a!r}")

    @property
    def is_square(self) -> bool:
        return abs(self.a - 1.0) <= SQUARE_TOL

    @property
    def perimeter(self) -> float:
        return 4.0 * (1.0 + self.a)

    @classmethod
    def from_sides(cls, width: float, height: float) -> tuple["RectDomain", float]:
        """Normalise a ``width x height`` rectangle.

        Returns the normalised domain and the factor ``s`` by which the
        original is larger, so that ``sigma_original = sigma_normalised / s``.
        """
        if width <= 0 or height <= 0:
            raise ValueError("rectangle sides must be positive")
        long_, short = max(width, height), min(width, height)
        return cls(short / long_), long_ / 2.0


@dataclass(frozen=True)
class RectClass:
    tag: str
    factors: tuple[str, str]  # (x factor, y factor)

    @property
    def trig_axis(self) -> str:
        return "x" if self.factors[0] in F.TRIG else "y"

    @property
    def trig_factor(self) -> str:
        return self.factors[0] if self.trig_axis == "x" else self.factors[1]

    @property
    def hyp_factor(self) -> str:
        return self.factors[1] if self.trig_axis == "x" else self.factors[0]

    @property
    def trig_kind(self) -> str:
        return {
            (F.COS, F.COSH): TAN_PLUS_TANH,
            (F.SIN, F.SINH): TAN_EQ_TANH,
            (F.SIN, F.COSH): TAN_EQ_COTH,
            (F.COS, F.SINH): TAN_PLUS_COTH,
        }[(self.trig_factor, self.hyp_factor)]

    @property
    def sigma_kind(self) -> str:
        return NU_TANH if self.hyp_factor == F.COSH else NU_COTH

    def scales(self, a: float) -> tuple[float, float]:
        """Half-lengths of the (trig, hyperbolic) axes."""
        return (1.0, a) if self.trig_axis == "x" else (a, 1.0)

    @property
    def label(self) -> str:
        return " ".join(axis if kind == F.LIN else f"{kind}(nu {axis})"
                        for kind, axis in zip(self.factors, "xy"))


CLASSES = {
    "I_i": RectClass("I_i", (F.COSH, F.COS)),
    "I_ii": RectClass("I_ii", (F.COS, F.COSH)),
    "II_i": RectClass("II_i", (F.SINH, F.SIN)),
    "II_ii": RectClass("II_ii", (F.SIN, F.SINH)),
    "III_i": RectClass("III_i", (F.COSH, F.SIN)),
    "III_ii": RectClass("III_ii", (F.COS, F.SINH)),
    "IV_i": RectClass("IV_i", (F.SINH, F.COS)),
    "IV_ii": RectClass("IV_ii", (F.SIN, F.COSH)),
}
XY = RectClass("XY", (F.LIN, F.LIN))
CLASS_TAGS = tuple(CLASSES)


def get_class(tag: str) -> RectClass:
    if tag == "XY":
        return XY
    return CLASSES[tag]


@dataclass(frozen=True)
class RectCandidate:
    cls: RectClass
    a: float
    nu: Optional[float]
    sigma: float
    residual: float = 0.0

    @property
    def tag(self) -> str:
        return self.cls.tag


@dataclass
class RectSpectrum:
    a: float
    candidates: list[RectCandidate]
    sigma1: float
    eigenspace: list[str]
    invariant: float
    mult_tol: float = DEFAULT_MULT_TOL

    def candidate(self, tag: str) -> RectCandidate:
        for c in self.candidates:
            if c.tag == tag:
                return c
        raise KeyError(tag)

    @property
    def attaining(self) -> str:
        return self.eigenspace[0]


def _check_a(a: float) -> None:
    if not 0 < a <= 1:
        raise ValueError(f"need 0 < a <= 1, got a={a!r}")


def determining_residual(cls: RectClass, a: float, nu: float) -> float:
    """Signed residual of the class's determining equation, tan term first."""
    if cls is XY or cls.tag == "XY":
        raise ValueError("xy has no determining equation")
    st, sh = cls.scales(a)
    theta = nu * st
    if abs(math.cos(theta)) < 1e-15:
        raise DomainError(f"tan is singular at nu*{st} = {theta!r}")
    t = math.tan(theta)
    kind = cls.trig_kind
    if kind in (TAN_PLUS_TANH, TAN_EQ_TANH):
        h = math.tanh(nu * sh)
    else:
        if nu == 0.0:
            raise DomainError("coth is singular at nu = 0")
        h = 1.0 / math.tanh(nu * sh)
    if kind in (TAN_PLUS_TANH, TAN_PLUS_COTH):
        return t + h
    return t - h


def first_branch_bracket(cls: RectClass, a: float) -> Bracket:
    """Interval in ``nu`` holding the smallest positive root.

    ``tan = coth``: the tan argument lies in ``(0, pi/2)``.
    ``tan + tanh = 0`` and ``tan + coth = 0``: ``tan`` must be negative,
    so ``(pi/2, pi)``.
    ``tan = tanh``: ``tan(th) > th >= tanh`` rules out ``(0, pi/2)`` whenever
    the tan argument is not the shorter side's, giving ``(pi, 3pi/2)``.  Only
    for II(i) with ``a < 1`` does the root fall in ``(0, pi/2)``, where it
    tends to 0 as ``a -> 1`` (the limit is the xy eigenfunction).
    """
    if cls.tag == "XY":
        raise ValueError("xy has no determining equation")
    _check_a(a)
    st, _ = cls.scales(a)
    kind = cls.trig_kind
    if kind == TAN_EQ_COTH:
        lo, hi = 0.0, 0.5 * math.pi
    elif kind in (TAN_PLUS_TANH, TAN_PLUS_COTH):
        lo, hi = 0.5 * math.pi, math.pi
    elif cls.trig_axis == "y" and a < 1.0 - SQUARE_TOL:
        lo, hi = 0.0, 0.5 * math.pi
    else:
        lo, hi = math.pi, 1.5 * math.pi
    return Bracket(lo / st, hi / st)


def first_candidate(cls: RectClass, a: float, tol: float = DEFAULT_TOL) -> RectCandidate:
    """Smallest-frequency candidate of one class."""
    _check_a(a)
    if cls.tag == "XY":
        if abs(a - 1.0) > SQUARE_TOL:
            raise ValueError("xy is an eigenfunction only on the square")
        return RectCandidate(XY, a, None, 1.0, 0.0)
    bracket = first_branch_bracket(cls, a)
    res = solve_monotone(lambda nu: determining_residual(cls, a, nu), bracket, tol=tol)
    _, sh = cls.scales(a)
    sigma = forward_map(cls.sigma_kind, sh, res.root)
    return RectCandidate(cls, a, res.root, sigma, res.residual)


def group_eigenspace(items, sigma1: float, mult_tol: float):
    """Members whose sigma lies within ``mult_tol*max(1, sigma1)`` of ``sigma1``."""
    thresh = mult_tol * max(1.0, sigma1)
    return [it for it in items if abs(it.sigma - sigma1) <= thresh]


def rect_spectrum(a: float, mult_tol: float = DEFAULT_MULT_TOL,
                  tol: float = DEFAULT_TOL) -> RectSpectrum:
    _check_a(a)
    cands = [first_candidate(c, a, tol) for c in CLASSES.values()]
    if abs(a - 1.0) <= SQUARE_TOL:
        cands.append(first_candidate(XY, a))
    sigma1 = min(c.sigma for c in cands)
    space = group_eigenspace(sorted(cands, key=lambda c: c.sigma), sigma1, mult_tol)
    # class-table order within the eigenspace, so IV_ii leads
    order = {t: i for i, t in enumerate(CLASS_TAGS[::-1] + ("XY",))}
    tags = sorted((c.tag for c in space), key=order.__getitem__)
    return RectSpectrum(a, cands, sigma1, tags, 4.0 * sigma1 * (1.0 + a), mult_tol)


def rect_invariant(a: float) -> float:
    """Scale-free first eigenvalue ``sigma_1 * perimeter = 4 sigma_1 (1 + a)``."""
    return rect_spectrum(a).invariant


def sweep_rect(a_grid, mult_tol: float = DEFAULT_MULT_TOL) -> SweepTable:
    """One row per ``a``: per-class candidates, sigma_1 and the invariant.

    Failures are recorded in the row's diagnostics and the sweep continues.
    """
    columns = ["a", "sigma1", "invariant", "attaining_family"]
    columns += [f"sigma_{t}" for t in CLASS_TAGS] + ["diagnostics"]
    table = SweepTable(columns)
    for a in a_grid:
        row = {"a": float(a)}
        try:
            spec = rect_spectrum(float(a), mult_tol)
        except (ValueError, ArithmeticError) as exc:
            row["diagnostics"] = f"{type(exc).__name__}: {exc}"
            table.append(row)
            continue
        row.update(sigma1=spec.sigma1, invariant=spec.invariant,
                   attaining_family=spec.attaining, diagnostics="")
        for c in spec.candidates:
            if c.tag != "XY":
                row[f"sigma_{c.tag}"] = c.sigma
        table.append(row)
    return table


def rect_eigenfunction_factors(candidate: RectCandidate, normalized: bool = True):
    """Per-axis callables ``(g_x, g_y)`` whose product is the eigenfunction.

    With ``normalized`` the hyperbolic factor is divided by its face value,
    which keeps large ``nu`` finite.
    """
    fx, fy = candidate.cls.factors
    nu = candidate.nu if candidate.nu is not None else 0.0
    dx, dy = (1.0, candidate.a) if normalized else (None, None)
    return (lambda x: F.evaluate(fx, nu, x, dx),
            lambda y: F.evaluate(fy, nu, y, dy))


def rect_eigenfunction_eval(candidate: RectCandidate, x, y, normalized: bool = False):
    """Evaluate the candidate's separated product at ``(x, y)``.

    ``normalized`` scales the hyperbolic factor to 1 on its faces.
    """
    gx, gy = rect_eigenfunction_factors(candidate, normalized)
    return gx(x) * gy(y)
