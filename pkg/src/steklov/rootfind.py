"""Bracketed root finding for continuous, strictly monotone scalar functions.

Everything downstream (rectangle determining equations, the coupled cuboid
systems, the linear-in-coordinate families) reduces to locating the single
sign change of a monotone function on a known interval.  Plain bisection is
used throughout: it is deterministic, needs no derivatives and cannot
diverge, which matters more here than speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

DEFAULT_TOL = 1e-12
MAX_ITER = 200
# Relative offset used to step off open endpoints where tan/coth blow up.
ENDPOINT_EPS = 1e-9
# |sigma * s - 1| below this is the lambda -> 0 limit of nu*coth(nu*s) = sigma.
DEGENERATE_TOL = 1e-9

_EPS = 2.220446049250313e-16

NU_TANH = "nu_tanh"
NU_COTH = "nu_coth"


class RootFindingError(ArithmeticError):
    """Base class for root finding failures."""


class NoSignChange(RootFindingError):
    """The function has the same sign at both ends of the bracket."""


class MaxIterations(RootFindingError):
    """Bisection did not reach the requested tolerance."""


class NoSolution(RootFindingError):
    """The target value lies outside the range of the map being inverted."""


def _sign(v: float) -> int:
    return int(v > 0) - int(v < 0)


@dataclass(frozen=True)
class Bracket:
    """Interval ``(lo, hi)`` known to contain exactly one sign change.

    The sign fields are optional; :meth:`probe` fills them in and raises
    :class:`NoSignChange` when there is nothing to bracket.
    """

    lo: float
    hi: float
    f_lo_sign: Optional[int] = None
    f_hi_sign: Optional[int] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def inner_points(self, closed: bool = False) -> tuple[float, float]:
        if closed:
            return self.lo, self.hi
        eps = ENDPOINT_EPS * self.width
        return self.lo + eps, self.hi - eps

    @classmethod
    def probe(cls, f: Callable[[float], float], lo: float, hi: float,
              closed: bool = False) -> "Bracket":
        b = cls(lo, hi)
        x0, x1 = b.inner_points(closed)
        s0, s1 = _sign(f(x0)), _sign(f(x1))
        if s0 == s1 or s0 == 0 and s1 == 0:
            raise NoSignChange(f"no sign change on ({lo}, {hi})")
        return cls(lo, hi, s0, s1)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    converged: bool


def solve_monotone(f: Callable[[float], float], bracket: Bracket,
                   tol: float = DEFAULT_TOL, closed: bool = False,
                   max_iter: int = MAX_ITER) -> RootResult:
    """Locate the unique root of ``f`` inside ``bracket`` by bisection.

    Args:
        f: Continuous function with a single sign change on the bracket.
        bracket: Search interval. Endpoints are treated as open unless
            ``closed`` is set, in which case ``f`` is evaluated exactly there.
        tol: Absolute bracket width at which to stop.
        closed: Evaluate ``f`` at the endpoints themselves.
        max_iter: Iteration cap.

    Returns:
        RootResult whose ``root`` is the midpoint of the final bracket and
        whose ``residual`` is ``f(root)``.

    Raises:
        NoSignChange: ``f`` has the same sign at both (shifted) endpoints.
        MaxIterations: tolerance not reached within ``max_iter`` halvings.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = bracket.inner_points(closed)
    flo, fhi = f(lo), f(hi)
    slo, shi = _sign(flo), _sign(fhi)
    if slo == 0:
        return RootResult(lo, flo, 0, True)
    if shi == 0:
        return RootResult(hi, fhi, 0, True)
    if slo == shi:
        raise NoSignChange(
            f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} share a sign")

    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            # width below tol, or no float left strictly between the ends
            return RootResult(mid, f(mid), it - 1, True)
        fm = f(mid)
        sm = _sign(fm)
        if sm == 0:
            return RootResult(mid, fm, it, True)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    if hi - lo <= tol:
        return RootResult(mid, f(mid), max_iter, True)
    raise MaxIterations(
        f"bracket width {hi - lo:.3e} > tol {tol:.1e} after {max_iter} steps")


def forward_map(kind: str, scale: float, nu: float) -> float:
    """``nu*tanh(nu*scale)`` or ``nu*coth(nu*scale)``, continuous at ``nu=0``."""
    t = nu * scale
    if kind == NU_TANH:
        return nu * math.tanh(t)
    if kind == NU_COTH:
        if t == 0.0:
            return 1.0 / scale
        return nu / math.tanh(t)
    raise ValueError(f"unknown map kind {kind!r}")


def invert_monotone_map(kind: str, scale: float, target_sigma: float,
                        tol: Optional[float] = None) -> float:
    """Solve ``nu*tanh(nu*scale) = sigma`` (or the coth variant) for ``nu >= 0``.

    Both maps are increasing on ``(0, inf)``; the tanh map covers ``(0, inf)``
    and the coth map ``(1/scale, inf)``.  For the coth map the degenerate
    limit ``sigma == 1/scale`` (within ``DEGENERATE_TOL``) returns ``0.0``.
    With ``tol=None`` the bracket is shrunk to a few ulps of the root.

    Raises:
        NoSolution: coth map with ``sigma < 1/scale``, or nonpositive sigma.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if not target_sigma > 0:
        raise NoSolution(f"sigma must be positive, got {target_sigma!r}")
    if kind == NU_COTH:
        gap = target_sigma * scale - 1.0
        if abs(gap) <= DEGENERATE_TOL:
            return 0.0
        if gap < 0:
            raise NoSolution(
                f"nu*coth(nu*{scale}) > {1 / scale} cannot equal {target_sigma}")
    elif kind != NU_TANH:
        raise ValueError(f"unknown map kind {kind!r}")

    def resid(nu):
        return forward_map(kind, scale, nu) - target_sigma

    if kind == NU_COTH:
        # nu*coth(nu*s) > nu, so the root is below sigma
        hi = target_sigma
    else:
        # nu*tanh(nu*s) < min(nu, s*nu**2): the root exceeds both bounds
        hi = 2.0 * max(target_sigma, math.sqrt(target_sigma / scale))
        while resid(hi) <= 0:
            hi *= 2.0
    if tol is None:
        tol = 4.0 * _EPS * hi
    res = solve_monotone(resid, Bracket(0.0, hi), tol=tol, closed=True)
    return res.root
