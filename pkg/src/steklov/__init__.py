"""Steklov eigenvalues of rectangles and rectangular boxes.

Every eigenfunction used here is a product of one-dimensional factors
(cosh, sinh, cos, sin or a bare coordinate).  Each family reduces to a
monotone scalar equation solved by bisection; the smallest positive root
over all families is the first nontrivial eigenvalue.
"""

from .box import (
    BoxCandidate, BoxDomain, BoxFamily, BoxSpectrum, LinearFamily, box_eigenfunction_eval,
    box_eigenfunction_factors, box_invariant, box_spectrum, enumerate_families,
    solve_coupled, solve_linear_family, sweep_box,
)
from .rect import (
    CLASSES, RectCandidate, RectClass, RectDomain, RectSpectrum, determining_residual,
    first_candidate, rect_eigenfunction_eval, rect_eigenfunction_factors, rect_invariant,
    rect_spectrum, sweep_rect,
)
from .rootfind import (
    Bracket, MaxIterations, NoSignChange, NoSolution, RootFindingError, RootResult,
    invert_monotone_map, solve_monotone,
)
from .verify import ResidualReport, convergence_study, fd_dtn_rect, residual_check

__all__ = [
    "Bracket", "BoxCandidate", "BoxDomain", "BoxFamily", "BoxSpectrum", "CLASSES",
    "LinearFamily", "MaxIterations", "NoSignChange", "NoSolution", "RectCandidate",
    "RectClass", "RectDomain", "RectSpectrum", "ResidualReport", "RootFindingError",
    "RootResult", "box_eigenfunction_eval", "box_eigenfunction_factors", "box_invariant",
    "box_spectrum", "convergence_study", "determining_residual", "enumerate_families",
    "fd_dtn_rect", "first_candidate", "invert_monotone_map", "rect_eigenfunction_eval",
    "rect_eigenfunction_factors", "rect_invariant", "rect_spectrum", "residual_check",
    "solve_coupled", "solve_linear_family", "solve_monotone", "sweep_box", "sweep_rect",
]
__version__ = "0.1.0"
