"""Special functions and the nonlinear least-squares engine."""

from .bessel import bessel_i0, bessel_i0e, bessel_k0, bessel_k0e
from .fit import FitProblem, FitResult, least_squares

__all__ = [
    "bessel_i0",
    "bessel_i0e",
    "bessel_k0",
    "bessel_k0e",
    "FitProblem",
    "FitResult",
    "least_squares",
]
