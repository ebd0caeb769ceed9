"""Damped Gauss-Newton (Levenberg-Marquardt) least squares with box bounds.

The solver is deliberately small: finite-difference Jacobians, diagonal
Marquardt scaling with the Nielsen gain-ratio update for the damping
parameter, and bound handling by projecting each trial step onto the box.
That is enough for the well-conditioned fits in this package (at most a
dozen parameters), and it keeps the whole chain dependency-free.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

_SQRT_EPS = float(np.sqrt(np.finfo(float).eps))
_LAMBDA_MAX = 1e16


@dataclass(frozen=True)
class FitProblem:
    """A bound-constrained nonlinear least-squares problem.

    ``residual_fn`` maps a parameter vector to a residual vector whose
    squared norm is minimised.  Bounds are optional per problem; when
    given they must satisfy ``lower <= initial <= upper`` elementwise.
    """

    residual_fn: Callable[[np.ndarray], np.ndarray]
    initial_params: Sequence[float]
    lower_bounds: Optional[Sequence[float]] = None
    upper_bounds: Optional[Sequence[float]] = None
    max_iterations: int = 200
    tolerance_grad: float = 1e-10
    tolerance_step: float = 1e-12

    def __post_init__(self):
        p0 = np.asarray(self.initial_params, dtype=float)
        if p0.ndim != 1 or p0.size == 0:
            raise ValueError("initial_params must be a non-empty 1-d vector")
        if not np.all(np.isfinite(p0)):
            raise ValueError("initial_params must be finite")
        for name in ("lower_bounds", "upper_bounds"):
            b = getattr(self, name)
            if b is not None and len(np.asarray(b, dtype=float)) != p0.size:
                raise ValueError(f"{name} length does not match initial_params")
        lo, hi = self.bounds()
        if np.any(lo > hi):
            raise ValueError("lower_bounds must not exceed upper_bounds")
        if np.any(p0 < lo) or np.any(p0 > hi):
            raise ValueError("initial_params must lie inside the bounds")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance_grad <= 0.0 or self.tolerance_step <= 0.0:
            raise ValueError("tolerances must be positive")

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        n = len(np.asarray(self.initial_params, dtype=float))
        lo = (np.full(n, -np.inf) if self.lower_bounds is None
              else np.asarray(self.lower_bounds, dtype=float))
        hi = (np.full(n, np.inf) if self.upper_bounds is None
              else np.asarray(self.upper_bounds, dtype=float))
        return lo, hi


@dataclass
class FitResult:
    """Solution report for :func:`least_squares`.

    ``converged`` is set when either the infinity norm of the gradient
    J^T r fell below ``tolerance_grad`` or the (projected) step norm fell
    below ``tolerance_step * (1 + |params|)``.  ``residual_norm_history``
    records the accepted cost sequence, which is non-increasing by
    construction.
    """

    params: np.ndarray
    residual_norm: float
    jacobian_condition_proxy: float
    iterations: int
    converged: bool
    per_param_stderr: np.ndarray
    residual_norm_history: list = field(default_factory=list)


def _fd_jacobian(fn, p, r0, lo, hi):
    """Forward-difference Jacobian with step sqrt(eps)*max(|p_i|, 1).

    The step direction flips when a forward step would leave the box.
    """
    J = np.empty((r0.size, p.size))
    for i in range(p.size):
        h = _SQRT_EPS * max(abs(p[i]), 1.0)
        if p[i] + h > hi[i]:
            h = -h
        pi = p.copy()
        pi[i] = p[i] + h
        J[:, i] = (np.asarray(fn(pi), dtype=float) - r0) / (pi[i] - p[i])
    return J


def least_squares(problem: FitProblem) -> FitResult:
    """Minimise ``|residual_fn(p)|^2`` over the bound box.

    Raises ``ValueError`` when the residual at the initial point is
    non-finite or shorter than the parameter vector.  Non-convergence
    within ``max_iterations`` is reported through ``converged=False``,
    never as an exception.
    """
    fn = problem.residual_fn
    p = np.asarray(problem.initial_params, dtype=float).copy()
    lo, hi = problem.bounds()

    r = np.asarray(fn(p), dtype=float)
    if r.ndim != 1:
        r = r.ravel()
    if not np.all(np.isfinite(r)):
        raise ValueError("residual_fn returned non-finite values at the initial point")
    if r.size < p.size:
        raise ValueError("residual dimension must be >= parameter dimension")

    cost = float(r @ r)
    history = [math.sqrt(cost)]
    lam = 1e-3
    nu = 2.0
    converged = False
    iterations = 0

    J = _fd_jacobian(fn, p, r, lo, hi)
    for iterations in range(1, problem.max_iterations + 1):
        g = J.T @ r
        if np.max(np.abs(g)) <= problem.tolerance_grad:
            converged = True
            break
        JTJ = J.T @ J
        diag = np.diag(JTJ)
        scale = np.where(diag > 0.0, diag, 1.0)
        moved = False
        while True:
            try:
                delta = np.linalg.solve(JTJ + lam * np.diag(scale), -g)
            except np.linalg.LinAlgError:
                delta = None
            if delta is not None and np.all(np.isfinite(delta)):
                p_new = np.clip(p + delta, lo, hi)
                step = p_new - p
                step_small = (np.linalg.norm(step)
                              <= problem.tolerance_step * (1.0 + np.linalg.norm(p)))
                r_new = np.asarray(fn(p_new), dtype=float).ravel()
                if np.all(np.isfinite(r_new)):
                    cost_new = float(r_new @ r_new)
                else:
                    cost_new = np.inf
                if cost_new < cost:
                    predicted = float(step @ (lam * scale * step - g))
                    rho = (cost - cost_new) / predicted if predicted > 0.0 else 1.0
                    p, r, cost = p_new, r_new, cost_new
                    history.append(math.sqrt(cost))
                    if rho > 0.0:
                        lam = max(lam * max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3), 1e-14)
                    nu = 2.0
                    moved = True
                    J = _fd_jacobian(fn, p, r, lo, hi)
                    if step_small:
                        converged = True
                    break
                if step_small:
                    # Damping has shrunk the trial step below resolution and no
                    # further decrease is possible: numerical optimum.
                    converged = True
                    break
            lam *= nu
            nu *= 2.0
            if lam > _LAMBDA_MAX:
                break
        if converged or not moved:
            break

    residual_norm = math.sqrt(cost)
    n, m = p.size, r.size
    JTJ = J.T @ J
    try:
        cond = float(np.linalg.cond(J))
    except np.linalg.LinAlgError:  # pragma: no cover
        cond = np.inf
    if m > n:
        s2 = cost / (m - n)
        try:
            cov = s2 * np.linalg.pinv(JTJ)
            stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        except np.linalg.LinAlgError:  # pragma: no cover
            stderr = np.full(n, np.nan)
    else:
        stderr = np.zeros(n)
    return FitResult(
        params=p,
        residual_norm=residual_norm,
        jacobian_condition_proxy=cond,
        iterations=iterations,
        converged=converged,
        per_param_stderr=stderr,
        residual_norm_history=history,
    )
