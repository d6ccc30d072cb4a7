"""Block coordinates, Schur complements and the orthographic retraction.

In the frame ``[U U_perp], [V V_perp]`` of a rank-``k`` point every matrix
reads ``[[A, C], [D, E]]``. When ``A`` is invertible the matrix factors as

    [[I, 0], [D A^-1, I]] @ [[A, 0], [0, E - D A^-1 C]] @ [[I, A^-1 C], [0, I]]

so its rank is ``k + rank(E - D A^-1 C)``. The orthographic retraction replaces
``E`` by ``D A^-1 C``, which is the unique rank-``k`` completion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fixed_rank import AdaptedFrame, SubspacePair, contains_tensor_product
from .linalg_core import DEFAULT_TOL, TolerancePolicy, as_matrix, numerical_rank, singular_values


class SingularBlockError(ValueError):
    """The ``A`` block is numerically singular: the point is outside the retraction domain."""


class NotTangentError(ValueError):
    pass


class TensorProductMembershipError(ValueError):
    pass


class TransversalityError(ValueError):
    pass


# operational definition of the retraction domain: sigma_min(A) > DOMAIN_RTOL * sigma_1(X)
DOMAIN_RTOL = 1e-8
TRANSVERSALITY_MARGIN = 1e-8


@dataclass(frozen=True)
class BlockCoordinates:
    A: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.A, self.C], [self.D, self.E]])

    def reassemble(self, frame: AdaptedFrame) -> np.ndarray:
        return frame.left @ self.assemble() @ frame.right.T


def block_coordinates(frame: AdaptedFrame, Y) -> BlockCoordinates:
    Y = as_matrix(Y, "Y")
    if Y.shape != frame.shape:
        raise ValueError(f"shape mismatch: frame is {frame.shape}, matrix is {Y.shape}")
    U, Up, V, Vp = frame.U, frame.U_perp, frame.V, frame.V_perp
    return BlockCoordinates(A=U.T @ Y @ V, C=U.T @ Y @ Vp, D=Up.T @ Y @ V, E=Up.T @ Y @ Vp)


def _check_invertible(A: np.ndarray, floor: float) -> None:
    if A.shape[0] == 0:
        return
    s_min = float(singular_values(A)[-1])
    if s_min <= floor:
        raise SingularBlockError(f"A block is numerically singular (sigma_min = {s_min:.3e} <= {floor:.3e})")


def schur_complement(blocks: BlockCoordinates, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """``E - D A^-1 C``; raises :class:`SingularBlockError` if ``A`` is singular."""
    A, C, D, E = blocks.A, blocks.C, blocks.D, blocks.E
    if A.shape[0] == 0:
        return E.copy()
    s = singular_values(A)
    _check_invertible(A, tol.threshold(float(s[0])))
    return E - D @ np.linalg.solve(A, C)


def orthographic_retract(X, frame: AdaptedFrame, Y_tangent, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthographic retraction of a tangent vector at ``X`` onto the rank-``k`` manifold.

    Returns ``X + Y + U_perp (D A^-1 C - E_Y) V_perp^T`` where ``A, C, D`` are the
    blocks of ``X + Y``. This equals ``[U U_perp] [A; D] [I, A^-1 C] [V V_perp]^T``
    and its difference with ``X + Y`` lies in the normal space.
    """
    X = as_matrix(X, "X")
    Y = as_matrix(Y_tangent, "Y_tangent")
    if X.shape != frame.shape or Y.shape != frame.shape:
        raise ValueError(f"shape mismatch: frame is {frame.shape}, got {X.shape} and {Y.shape}")
    yb = block_coordinates(frame, Y)
    leak = np.linalg.norm(yb.E)
    scale = max(np.linalg.norm(Y), np.linalg.norm(X))
    if leak > tol.threshold(scale):
        raise NotTangentError(f"Y has a normal component of norm {leak:.3e}")
    k = frame.rank
    if k == 0:
        # the rank-0 manifold is the single point 0
        return np.zeros_like(X)
    S = frame.U.T @ X @ frame.V
    A = S + yb.A
    sigma1 = float(singular_values(X)[0])
    _check_invertible(A, max(DOMAIN_RTOL * sigma1, tol.absolute_floor))
    correction = yb.D @ np.linalg.solve(A, yb.C) - yb.E
    return X + Y + frame.U_perp @ correction @ frame.V_perp.T


def retraction_domain_margin(X, frame: AdaptedFrame, Y_tangent) -> float:
    """``sigma_min`` of the ``A`` block of ``X + Y`` relative to ``sigma_1(X)``."""
    X = as_matrix(X)
    Y = as_matrix(Y_tangent)
    if frame.rank == 0:
        return np.inf
    A = frame.U.T @ (X + Y) @ frame.V
    return float(singular_values(A)[-1] / singular_values(X)[0])


def max_principal_cosine(B1: np.ndarray, B2: np.ndarray) -> float:
    """Largest cosine of the principal angles between two orthonormally spanned subspaces."""
    if B1.shape[1] == 0 or B2.shape[1] == 0:
        return 0.0
    return float(singular_values(B1.T @ B2)[0])


def direct_sum_rank_check(pair1: SubspacePair, A1, pair2: SubspacePair, A2,
                          tol: TolerancePolicy = DEFAULT_TOL, rtol: float = 1e-10) -> bool:
    """Check ``rank(A1 + A2) == rank A1 + rank A2`` for transversal tensor-product supports.

    Raises :class:`TensorProductMembershipError` if ``A_j`` is not supported on
    its pair and :class:`TransversalityError` if the subspaces intersect.
    """
    A1 = as_matrix(A1, "A1")
    A2 = as_matrix(A2, "A2")
    if A1.shape != A2.shape:
        raise ValueError(f"shape mismatch: {A1.shape} vs {A2.shape}")
    for idx, (pair, A) in enumerate(((pair1, A1), (pair2, A2)), start=1):
        if not contains_tensor_product(pair, A, rtol):
            raise TensorProductMembershipError(f"A{idx} is not in the tensor product of pair{idx}")
    left_cos = max_principal_cosine(pair1.left_basis, pair2.left_basis)
    right_cos = max_principal_cosine(pair1.right_basis, pair2.right_basis)
    if left_cos >= 1.0 - TRANSVERSALITY_MARGIN:
        raise TransversalityError(f"left subspaces intersect (max cosine {left_cos:.12f})")
    if right_cos >= 1.0 - TRANSVERSALITY_MARGIN:
        raise TransversalityError(f"right subspaces intersect (max cosine {right_cos:.12f})")
    return numerical_rank(A1 + A2, tol) == numerical_rank(A1, tol) + numerical_rank(A2, tol)
