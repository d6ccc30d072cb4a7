"""Adapted frames and tangent/normal projections of the fixed-rank manifold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg_core import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    orthogonal_complement,
    orthonormality_defect,
    rank_from_singular_values,
    svd,
)


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal bases aligned with the row and column spaces of a point.

    ``U`` spans ``im X`` and ``V`` spans ``im X^T``; ``U_perp`` and ``V_perp``
    span the orthogonal complements. The generating matrix is not stored.
    """

    U: np.ndarray
    U_perp: np.ndarray
    V: np.ndarray
    V_perp: np.ndarray
    rank: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    @property
    def left(self) -> np.ndarray:
        return np.hstack([self.U, self.U_perp])

    @property
    def right(self) -> np.ndarray:
        return np.hstack([self.V, self.V_perp])

    def orthogonality_defect(self) -> float:
        return max(orthonormality_defect(self.left), orthonormality_defect(self.right))

    def residuals(self, X) -> tuple[float, float]:
        """``(||U_perp^T X||, ||X V_perp||)``; both vanish for the generator."""
        X = as_matrix(X)
        return float(np.linalg.norm(self.U_perp.T @ X)), float(np.linalg.norm(X @ self.V_perp))


@dataclass(frozen=True)
class SubspacePair:
    """A pair of subspaces given by orthonormal bases, standing for their tensor product."""

    left_basis: np.ndarray
    right_basis: np.ndarray

    def __post_init__(self):
        for name in ("left_basis", "right_basis"):
            B = np.asarray(getattr(self, name), dtype=np.float64)
            if B.ndim != 2:
                raise ValueError(f"{name} must be two-dimensional")
            if orthonormality_defect(B) > 1e-8:
                raise ValueError(f"{name} does not have orthonormal columns")


def adapted_frame(X, tol: TolerancePolicy = DEFAULT_TOL) -> AdaptedFrame:
    X = as_matrix(X)
    f = svd(X, full=True)
    k = rank_from_singular_values(f.singular_values, tol)
    u, v = f.left_factor, f.right_factor
    return AdaptedFrame(
        U=u[:, :k].copy(),
        U_perp=u[:, k:].copy(),
        V=v[:, :k].copy(),
        V_perp=v[:, k:].copy(),
        rank=k,
    )


def frame_from_bases(U, V) -> AdaptedFrame:
    """Build a frame from given orthonormal bases of the column and row spaces."""
    U = as_matrix(U, "U")
    V = as_matrix(V, "V")
    if U.shape[1] != V.shape[1]:
        raise ValueError("U and V must have the same number of columns")
    return AdaptedFrame(U, orthogonal_complement(U), V, orthogonal_complement(V), U.shape[1])


def _check_shape(frame: AdaptedFrame, Z: np.ndarray) -> None:
    if Z.shape != frame.shape:
        raise ValueError(f"shape mismatch: frame is {frame.shape}, matrix is {Z.shape}")


def proj_tangent(frame: AdaptedFrame, Z) -> np.ndarray:
    """Orthogonal projection onto the tangent space ``UU^T Z + Z VV^T - UU^T Z VV^T``."""
    Z = as_matrix(Z, "Z")
    _check_shape(frame, Z)
    U, V = frame.U, frame.V
    UtZ = U.T @ Z
    ZV = Z @ V
    return U @ UtZ + ZV @ V.T - U @ (UtZ @ V) @ V.T


def proj_normal(frame: AdaptedFrame, Z) -> np.ndarray:
    """Orthogonal projection onto the normal space ``U_perp U_perp^T Z V_perp V_perp^T``."""
    Z = as_matrix(Z, "Z")
    _check_shape(frame, Z)
    return frame.U_perp @ normal_block(frame, Z) @ frame.V_perp.T


def normal_block(frame: AdaptedFrame, Z) -> np.ndarray:
    """The ``(m - rank) x (n - rank)`` block ``U_perp^T Z V_perp``."""
    Z = as_matrix(Z, "Z")
    _check_shape(frame, Z)
    return frame.U_perp.T @ Z @ frame.V_perp


def tangent_dim(m: int, n: int, rank: int) -> int:
    if not 0 <= rank <= min(m, n):
        raise ValueError(f"rank {rank} out of range for {m}x{n}")
    return (m + n - rank) * rank


def contains_tensor_product(pair: SubspacePair, Z, rtol: float = 1e-10) -> bool:
    """Whether ``im Z`` lies in the left subspace and ``im Z^T`` in the right one."""
    Z = as_matrix(Z, "Z")
    P, Q = pair.left_basis, pair.right_basis
    if Z.shape != (P.shape[0], Q.shape[0]):
        raise ValueError(f"shape mismatch: pair is {(P.shape[0], Q.shape[0])}, matrix is {Z.shape}")
    bound = rtol * np.linalg.norm(Z)
    left_res = np.linalg.norm(Z - P @ (P.T @ Z))
    right_res = np.linalg.norm(Z.T - Q @ (Q.T @ Z.T))
    return bool(left_res <= bound and right_res <= bound)
