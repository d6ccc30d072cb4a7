"""Dense linear algebra primitives shared by the geometry modules.

Matrices are plain two-dimensional ``numpy.ndarray`` objects of dtype float64.
Every rank decision goes through an explicit :class:`TolerancePolicy`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonFiniteMatrixError(ValueError):
    pass


class SvdError(RuntimeError):
    pass


@dataclass(frozen=True)
class TolerancePolicy:
    """Threshold rule for numerical rank.

    A singular value counts toward the rank iff it exceeds
    ``max(relative_rank_threshold * scale, absolute_floor)`` where ``scale``
    defaults to the largest singular value of the matrix being ranked.
    """

    relative_rank_threshold: float = 1e-10
    absolute_floor: float = 1e-14

    def __post_init__(self):
        if not 0.0 < self.relative_rank_threshold < 1.0:
            raise ValueError("relative_rank_threshold must lie in (0, 1)")
        if self.absolute_floor < 0.0:
            raise ValueError("absolute_floor must be nonnegative")

    def threshold(self, scale: float) -> float:
        return max(self.relative_rank_threshold * scale, self.absolute_floor)

    def with_floor(self, floor: float) -> "TolerancePolicy":
        return TolerancePolicy(self.relative_rank_threshold, max(self.absolute_floor, floor))


DEFAULT_TOL = TolerancePolicy()


@dataclass(frozen=True)
class SvdFactorization:
    left_factor: np.ndarray
    singular_values: np.ndarray
    right_factor: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_factor * self.singular_values) @ self.right_factor.T


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float64 array, rejecting NaN/Inf."""
    A = np.asarray(X, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteMatrixError(f"{name} contains NaN or Inf entries")
    return A


def check_same_shape(X: np.ndarray, Y: np.ndarray) -> None:
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {Y.shape}")


def frobenius_inner(X, Y) -> float:
    """Frobenius inner product ``trace(Y^T X)``."""
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    check_same_shape(X, Y)
    return float(np.sum(X * Y))


def svd(X, full: bool = False) -> SvdFactorization:
    """Singular value decomposition with nonincreasing singular values.

    ``full=False`` gives the thin factorization; ``full=True`` returns square
    orthogonal factors, with the singular value vector still of length
    ``min(rows, cols)``.
    """
    X = as_matrix(X)
    try:
        u, s, vt = np.linalg.svd(X, full_matrices=full)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for a {X.shape} matrix") from exc
    return SvdFactorization(u, s, vt.T)


def singular_values(X) -> np.ndarray:
    X = as_matrix(X)
    if X.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(X, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for a {X.shape} matrix") from exc


def rank_from_singular_values(s, tol: TolerancePolicy = DEFAULT_TOL, scale: float | None = None) -> int:
    s = np.asarray(s, dtype=np.float64)
    if s.size == 0:
        return 0
    if scale is None:
        scale = float(s[0])
    return int(np.count_nonzero(s > tol.threshold(scale)))


def numerical_rank(X, tol: TolerancePolicy = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of singular values above the policy threshold.

    ``scale`` overrides the reference magnitude (default: sigma_1 of ``X``).
    """
    return rank_from_singular_values(singular_values(X), tol, scale)


def truncate_rank(X, k: int) -> np.ndarray:
    """Best Frobenius-norm approximation of rank at most ``k``.

    Keeps the first ``k`` singular triples in SVD output order. When
    ``sigma_k == sigma_{k+1}`` the minimizer is not unique and this is one
    element of the solution set.
    """
    X = as_matrix(X)
    if not 0 <= k <= min(X.shape):
        raise ValueError(f"k={k} out of range for shape {X.shape}")
    if k == 0:
        return np.zeros_like(X)
    f = svd(X)
    return (f.left_factor[:, :k] * f.singular_values[:k]) @ f.right_factor[:, :k].T


def orthonormal_range_basis(X, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning ``im X``; zero columns for the zero matrix."""
    X = as_matrix(X)
    f = svd(X)
    k = rank_from_singular_values(f.singular_values, tol)
    return f.left_factor[:, :k].copy()


def orthonormality_defect(U) -> float:
    U = np.asarray(U, dtype=np.float64)
    return float(np.linalg.norm(U.T @ U - np.eye(U.shape[1])))


def orthogonal_complement(U, atol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of ``(im U)^perp`` for ``U`` with orthonormal columns.

    The basis is completed deterministically through a complete QR
    factorization of ``[U | I]``.
    """
    U = as_matrix(U, "U")
    q, p = U.shape
    if p > q:
        raise ValueError(f"U has more columns ({p}) than rows ({q})")
    if orthonormality_defect(U) > atol:
        raise ValueError("U does not have orthonormal columns")
    Q, _ = np.linalg.qr(np.hstack([U, np.eye(q)]), mode="complete")
    comp = Q[:, p:]
    # re-orthogonalize against U to remove the O(eps) leak from QR
    comp = comp - U @ (U.T @ comp)
    comp, _ = np.linalg.qr(comp)
    return comp


def projector(B: np.ndarray) -> np.ndarray:
    """Orthogonal projector ``B B^T`` onto the span of orthonormal columns ``B``."""
    return B @ B.T


def relative_error(A, B) -> float:
    A = np.asarray(A)
    B = np.asarray(B)
    return float(np.linalg.norm(A - B) / max(1.0, np.linalg.norm(B)))
