"""Tangent cone to the variety of matrices of rank at most ``r``.

At a point ``X`` of rank ``k <= r`` with adapted frame ``(U, U_perp, V, V_perp)``
a matrix ``Z`` is tangent iff ``rank(U_perp^T Z V_perp) <= r - k``. Three
independent oracles for that verdict live here, together with the orthogonal
split of a cone element and the metric projection onto the cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fixed_rank import AdaptedFrame, adapted_frame, normal_block, proj_normal, proj_tangent
from .linalg_core import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    check_same_shape,
    numerical_rank,
    rank_from_singular_values,
    singular_values,
    svd,
)


class NotInConeError(ValueError):
    def __init__(self, message: str, singular_values: np.ndarray):
        super().__init__(message)
        self.singular_values = singular_values


@dataclass(frozen=True)
class MembershipReport:
    is_member: bool
    normal_block_singular_values: np.ndarray
    normal_rank: int
    rank_budget: int
    r: int
    point_rank: int
    tie: bool = False

    def to_record(self) -> dict:
        return {
            "verdict": "member" if self.is_member else "non-member",
            "r": self.r,
            "point_rank": self.point_rank,
            "budget": self.rank_budget,
            "normal_rank": self.normal_rank,
            "normal_singular_values": [float(s) for s in self.normal_block_singular_values],
            "tie": self.tie,
        }


@dataclass(frozen=True)
class ConeDecomposition:
    tangent_part: np.ndarray
    normal_part: np.ndarray
    tie: bool = False
    normal_singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def total(self) -> np.ndarray:
        return self.tangent_part + self.normal_part


def check_bound(shape: tuple[int, int], r: int) -> None:
    m, n = shape
    if not 0 <= r < min(m, n):
        raise ValueError(f"rank bound r={r} must satisfy 0 <= r < min(m, n) = {min(m, n)}")


def _frame_for(X: np.ndarray, r: int, tol: TolerancePolicy) -> AdaptedFrame:
    frame = adapted_frame(X, tol)
    if frame.rank > r:
        raise ValueError(f"X has numerical rank {frame.rank} > r={r}; it is not on the variety")
    return frame


def _has_tie(s: np.ndarray, budget: int, threshold: float, tol: TolerancePolicy) -> bool:
    # the truncated normal part is ambiguous iff sigma_budget == sigma_{budget+1} > 0
    if budget == 0 or budget >= s.size or s[budget] <= threshold:
        return False
    return bool(s[budget - 1] - s[budget] <= tol.relative_rank_threshold * s[0])


def membership_at(frame: AdaptedFrame, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL) -> MembershipReport:
    """Membership verdict for a precomputed frame of the base point."""
    Z = as_matrix(Z, "Z")
    if Z.shape != frame.shape:
        raise ValueError(f"shape mismatch: frame is {frame.shape}, Z is {Z.shape}")
    check_bound(Z.shape, r)
    if frame.rank > r:
        raise ValueError(f"base point has rank {frame.rank} > r={r}")
    budget = r - frame.rank
    s = singular_values(normal_block(frame, Z))
    # threshold relative to sigma_1(Z) so round-off leakage of tangent vectors is ignored
    z_scale = float(singular_values(Z)[0]) if Z.size else 0.0
    threshold = tol.threshold(z_scale)
    k = rank_from_singular_values(s, tol, scale=z_scale)
    return MembershipReport(
        is_member=k <= budget,
        normal_block_singular_values=s,
        normal_rank=k,
        rank_budget=budget,
        r=r,
        point_rank=frame.rank,
        tie=_has_tie(s, budget, threshold, tol),
    )


def membership(X, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL) -> MembershipReport:
    """Decide whether ``Z`` lies in the tangent cone at ``X`` to rank-``<= r`` matrices.

    At ``X = 0`` the frame is empty and the test reduces to ``rank Z <= r``.
    """
    X = as_matrix(X, "X")
    Z = as_matrix(Z, "Z")
    check_same_shape(X, Z)
    check_bound(X.shape, r)
    return membership_at(_frame_for(X, r, tol), Z, r, tol)


def membership_kernel_frames(P, Q, Z, r: int, point_rank: int, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Verdict ``rank(P^T Z Q) <= r - point_rank`` for kernel frames ``P``, ``Q``.

    ``P`` must span ``ker X^T`` and ``Q`` must span ``ker X``; neither needs
    orthonormal columns, only full column rank.
    """
    P = as_matrix(P, "P")
    Q = as_matrix(Q, "Q")
    Z = as_matrix(Z, "Z")
    m, n = Z.shape
    check_bound(Z.shape, r)
    if not 0 <= point_rank <= r:
        raise ValueError(f"point_rank={point_rank} must lie in [0, r={r}]")
    if P.shape != (m, m - point_rank) or Q.shape != (n, n - point_rank):
        raise ValueError(
            f"kernel frames must be {m}x{m - point_rank} and {n}x{n - point_rank}, "
            f"got {P.shape} and {Q.shape}"
        )
    sP = singular_values(P)
    sQ = singular_values(Q)
    if rank_from_singular_values(sP, tol) < P.shape[1]:
        raise ValueError("P is rank deficient")
    if rank_from_singular_values(sQ, tol) < Q.shape[1]:
        raise ValueError("Q is rank deficient")
    z_scale = float(singular_values(Z)[0])
    p_scale = float(sP[0]) if sP.size else 1.0
    q_scale = float(sQ[0]) if sQ.size else 1.0
    k = numerical_rank(P.T @ Z @ Q, tol, scale=z_scale * p_scale * q_scale)
    return k <= r - point_rank


def _kernel_of_block(frame: AdaptedFrame, Z: np.ndarray, tol: TolerancePolicy) -> np.ndarray:
    """Orthonormal basis (in block coordinates) of ``ker U_perp^T Z V_perp``."""
    B = normal_block(frame, Z)
    cols = B.shape[1]
    if cols == 0:
        return np.zeros((0, 0))
    z_scale = float(singular_values(Z)[0])
    f = svd(B, full=True)
    k = rank_from_singular_values(f.singular_values, tol, scale=z_scale)
    return f.right_factor[:, k:]


def membership_grassmann(X, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Kernel-dimension test: ``dim ker(U_perp^T Z V_perp) >= n - r``.

    Equivalent to the existence of an ``(n - r)``-dimensional subspace ``S`` of
    ``ker X`` with ``Z S`` contained in ``im X``.
    """
    X = as_matrix(X, "X")
    Z = as_matrix(Z, "Z")
    check_same_shape(X, Z)
    check_bound(X.shape, r)
    frame = _frame_for(X, r, tol)
    n = X.shape[1]
    return _kernel_of_block(frame, Z, tol).shape[1] >= n - r


def grassmann_witness(X, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray | None:
    """Orthonormal ``W`` (n x (n - r)) with ``im W`` in ``ker X`` and ``Z W`` in ``im X``.

    Returns ``None`` when ``Z`` is not in the cone.
    """
    X = as_matrix(X, "X")
    Z = as_matrix(Z, "Z")
    check_same_shape(X, Z)
    check_bound(X.shape, r)
    frame = _frame_for(X, r, tol)
    n = X.shape[1]
    K = _kernel_of_block(frame, Z, tol)
    if K.shape[1] < n - r:
        return None
    return frame.V_perp @ K[:, : n - r]


def decompose(X, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL, frame: AdaptedFrame | None = None) -> ConeDecomposition:
    """Split a cone element into its tangent-space part and its rank-budgeted normal part."""
    X = as_matrix(X, "X")
    Z = as_matrix(Z, "Z")
    check_same_shape(X, Z)
    check_bound(X.shape, r)
    if frame is None:
        frame = _frame_for(X, r, tol)
    report = membership_at(frame, Z, r, tol)
    if not report.is_member:
        raise NotInConeError(
            f"normal block has rank {report.normal_rank} > budget {report.rank_budget}; "
            f"singular values {report.normal_block_singular_values.tolist()}",
            report.normal_block_singular_values,
        )
    return ConeDecomposition(
        tangent_part=proj_tangent(frame, Z),
        normal_part=proj_normal(frame, Z),
        tie=report.tie,
        normal_singular_values=report.normal_block_singular_values,
    )


def project_to_cone(X, Z, r: int, tol: TolerancePolicy = DEFAULT_TOL, frame: AdaptedFrame | None = None) -> ConeDecomposition:
    """Nearest point of the tangent cone to ``Z`` in the Frobenius norm.

    The tangent part is kept whole; the normal block is truncated to the rank
    budget. ``tie`` is set when the truncation is not unique.
    """
    X = as_matrix(X, "X")
    Z = as_matrix(Z, "Z")
    check_same_shape(X, Z)
    check_bound(X.shape, r)
    if frame is None:
        frame = _frame_for(X, r, tol)
    budget = r - frame.rank
    B = normal_block(frame, Z)
    s_all = singular_values(B)
    z_scale = float(singular_values(Z)[0])
    tie = _has_tie(s_all, budget, tol.threshold(z_scale), tol)
    if budget == 0 or B.size == 0:
        B_trunc = np.zeros_like(B)
    else:
        f = svd(B)
        k = min(budget, f.singular_values.size)
        B_trunc = (f.left_factor[:, :k] * f.singular_values[:k]) @ f.right_factor[:, :k].T
    return ConeDecomposition(
        tangent_part=proj_tangent(frame, Z),
        normal_part=frame.U_perp @ B_trunc @ frame.V_perp.T,
        tie=tie,
        normal_singular_values=s_all,
    )


def sample_cone_element(X, r: int, rng: np.random.Generator, scale: float = 1.0,
                        tol: TolerancePolicy = DEFAULT_TOL, frame: AdaptedFrame | None = None) -> np.ndarray:
    """Random tangent-cone element with Gaussian blocks and a low-rank normal block."""
    X = as_matrix(X, "X")
    check_bound(X.shape, r)
    if frame is None:
        frame = _frame_for(X, r, tol)
    m, n = X.shape
    k = frame.rank
    budget = r - k
    G = np.zeros((m, n))
    G[:k, :] = rng.standard_normal((k, n))
    G[k:, :k] = rng.standard_normal((m - k, k))
    G[k:, k:] = rng.standard_normal((m - k, budget)) @ rng.standard_normal((budget, n - k))
    return scale * (frame.left @ G @ frame.right.T)
