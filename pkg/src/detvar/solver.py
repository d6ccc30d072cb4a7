"""Rank-constrained matrix completion by projected gradient along the tangent cone.

Each iteration projects the negative gradient onto the tangent cone at the
current iterate, steps along it with Armijo backtracking and maps back onto
the variety. Meant as a desk-scale demonstration, not a large-scale solver.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .fixed_rank import adapted_frame
from .linalg_core import DEFAULT_TOL, TolerancePolicy, as_matrix, numerical_rank, truncate_rank
from .retraction import SingularBlockError, orthographic_retract
from .tangent_cone import check_bound, membership_at, project_to_cone

log = logging.getLogger(__name__)

ARMIJO = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 40


@dataclass
class CompletionProblem:
    target: np.ndarray
    mask: np.ndarray
    rank_bound: int
    step_size: float = 1.0
    max_iters: int = 500
    stop_tol: float = 1e-14

    def __post_init__(self):
        self.target = as_matrix(self.target, "target")
        self.mask = np.asarray(self.mask).astype(bool)
        if self.mask.shape != self.target.shape:
            raise ValueError(f"mask shape {self.mask.shape} differs from target shape {self.target.shape}")
        if not self.mask.any():
            raise ValueError("mask has no observed entries")
        if self.step_size <= 0 or self.stop_tol <= 0:
            raise ValueError("step_size and stop_tol must be positive")

    def objective(self, X: np.ndarray) -> float:
        R = np.where(self.mask, X - self.target, 0.0)
        return 0.5 * float(np.sum(R * R))

    def gradient(self, X: np.ndarray) -> np.ndarray:
        return np.where(self.mask, X - self.target, 0.0)

    def relative_residual(self, X: np.ndarray) -> float:
        denom = np.linalg.norm(np.where(self.mask, self.target, 0.0))
        return np.sqrt(2.0 * self.objective(X)) / max(denom, np.finfo(float).tiny)


def _retract(X, step, r, frame, method, tol):
    if method == "orthographic" and frame.rank == r:
        try:
            return orthographic_retract(X, frame, step, tol)
        except SingularBlockError:
            pass
    return truncate_rank(X + step, r)


def solve_completion(problem: CompletionProblem, X0, tol: TolerancePolicy = DEFAULT_TOL,
                     retraction: str = "truncate", debug: bool = False,
                     callback=None) -> tuple[np.ndarray, list[float]]:
    """Minimize ``0.5 ||mask * (X - target)||^2`` over matrices of rank at most ``r``.

    Returns the final iterate and the objective history (starting with
    ``f(X0)``). The history is nonincreasing. Iteration stops when the relative
    decrease drops below ``stop_tol``, the objective reaches zero, no step
    passes the Armijo test, or ``max_iters`` is hit.

    ``retraction="orthographic"`` uses the orthographic retraction when the
    iterate has full rank ``r`` and falls back to SVD truncation otherwise.
    With ``debug`` every search direction is checked for cone membership.
    ``callback(iteration, X)`` is called on every accepted iterate.
    """
    if retraction not in ("truncate", "orthographic"):
        raise ValueError(f"unknown retraction {retraction!r}")
    M = problem.target
    r = problem.rank_bound
    check_bound(M.shape, r)
    X = as_matrix(X0, "X0").copy()
    if X.shape != M.shape:
        raise ValueError(f"X0 shape {X.shape} differs from target shape {M.shape}")
    if numerical_rank(X, tol) > r:
        raise ValueError("X0 has rank above the bound")

    f = problem.objective(X)
    history = [f]
    for it in range(problem.max_iters):
        if f == 0.0:
            break
        frame = adapted_frame(X, tol)
        direction = project_to_cone(X, -problem.gradient(X), r, tol, frame=frame).total
        if debug and not membership_at(frame, direction, r, tol).is_member:
            raise AssertionError(f"iteration {it}: search direction left the tangent cone")
        slope = float(np.sum(direction * direction))
        if slope == 0.0:
            break
        alpha = problem.step_size
        for _ in range(MAX_BACKTRACKS):
            X_new = _retract(X, alpha * direction, r, frame, retraction, tol)
            f_new = problem.objective(X_new)
            if f_new <= f - ARMIJO * alpha * slope:
                break
            alpha *= BACKTRACK
        else:
            log.debug("iteration %d: backtracking failed, stopping", it)
            break
        decrease = f - f_new
        X, f = X_new, f_new
        history.append(f)
        if callback is not None:
            callback(it + 1, X)
        if decrease <= problem.stop_tol * history[-2]:
            break
    return X, history
