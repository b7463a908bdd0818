"""One-dimensional separated factors and their Steklov face conditions.

A separated eigenfunction is a product of per-axis factors.  On the face
``t = +d`` of the axis ``[-d, d]`` the Steklov condition ``ds/dn = sigma*s``
reduces to ``f'(d)/f(d) = sigma``, which for each factor kind is

    cosh(k t)  ->  k tanh(k d)
    sinh(k t)  ->  k coth(k d)
    cos(k t)   -> -k tan(k d)
    sin(k t)   ->  k cot(k d)
    t          ->  1/d

Parity makes the condition on ``t = -d`` identical.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .rootfind import (
    DEGENERATE_TOL, ENDPOINT_EPS, NU_COTH, NU_TANH, Bracket, NoSolution,
    invert_monotone_map, solve_monotone,
)

COS, SIN, COSH, SINH, LIN = "cos", "sin", "cosh", "sinh", "lin"
TRIG = (COS, SIN)
HYP = (COSH, SINH)
ODD = (SIN, SINH, LIN)

_HYP_MAP = {COSH: NU_TANH, SINH: NU_COTH}


def is_odd(kind: str) -> bool:
    return kind in ODD


def evaluate(kind: str, k: float, t, d: Optional[float] = None):
    """Vectorised factor value.

    With ``d`` given, hyperbolic factors are divided by their value at
    ``t = d`` using an overflow-free form, so large ``k*d`` stays finite.
    """
    t = np.asarray(t, dtype=float)
    if d is not None and kind in HYP:
        if k * d == 0.0:
            return np.ones_like(t) if kind == COSH else t / d
        at = np.abs(t)
        decay = np.exp(k * (at - d))
        if kind == COSH:
            return decay * (1 + np.exp(-2 * k * at)) / (1 + math.exp(-2 * k * d))
        return np.sign(t) * decay * -np.expm1(-2 * k * at) / -math.expm1(-2 * k * d)
    if kind == COS:
        return np.cos(k * t)
    if kind == SIN:
        return np.sin(k * t)
    if kind == COSH:
        return np.cosh(k * t)
    if kind == SINH:
        return np.sinh(k * t)
    if kind == LIN:
        return t
    raise ValueError(f"unknown factor kind {kind!r}")


def face_ratio(kind: str, k: float, d: float) -> float:
    """``f'(d)/f(d)`` for the factor, i.e. the sigma it imposes on its faces."""
    kd = k * d
    if kind == COSH:
        return k * math.tanh(kd)
    if kind == SINH:
        return 1.0 / d if kd == 0.0 else k / math.tanh(kd)
    if kind == COS:
        return -k * math.tan(kd)
    if kind == SIN:
        return 1.0 / d if kd == 0.0 else k / math.tan(kd)
    if kind == LIN:
        return 1.0 / d
    raise ValueError(f"unknown factor kind {kind!r}")


def invert_hyperbolic(kind: str, d: float, sigma: float) -> float:
    return invert_monotone_map(_HYP_MAP[kind], d, sigma)


def trig_branch(kind: str, d: float, branch: int) -> tuple[float, float, float]:
    """Frequency interval of one branch and the upper end of its sigma range.

    On every branch the face ratio falls strictly from its value at the left
    end to 0 at the right end.  Only branch 0 of ``sin`` has a finite top
    (``1/d``); all other branches cover ``(0, inf)``.
    """
    if branch < 0:
        raise ValueError("branch must be nonnegative")
    if kind == COS:
        lo = (0.5 + branch) * math.pi
        hi = (1.0 + branch) * math.pi
        top = math.inf
    elif kind == SIN:
        lo = branch * math.pi
        hi = (branch + 0.5) * math.pi
        top = 1.0 / d if branch == 0 else math.inf
    else:
        raise ValueError(f"{kind!r} is not a trig factor")
    return lo / d, hi / d, top


def invert_trig(kind: str, d: float, sigma: float, branch: int = 0,
                tol: Optional[float] = None) -> float:
    """Frequency ``k`` on the given branch with ``face_ratio(kind, k, d) = sigma``.

    Raises:
        NoSolution: sigma outside the branch's range.
    """
    if not sigma > 0:
        raise NoSolution(f"sigma must be positive, got {sigma!r}")
    lo, hi, top = trig_branch(kind, d, branch)
    if sigma >= top:
        if abs(sigma * d - 1.0) <= DEGENERATE_TOL:
            return 0.0
        raise NoSolution(f"{kind} branch {branch} only reaches sigma < {top}")

    def resid(k):
        return face_ratio(kind, k, d) - sigma

    # only the left end is singular (except sin branch 0, which has a finite
    # limit there); the ratio is exactly representable near 0 on the right
    if lo > 0:
        lo += ENDPOINT_EPS * (hi - lo)
    if tol is None:
        tol = 1e-15 * hi
    return solve_monotone(resid, Bracket(lo, hi), tol=tol, closed=True).root
