"""Randomized and fixture-exact certification of the tangent-cone description.

Every check returns a :class:`TrialReport`. Trials draw from their own
generator seeded by ``(seed, trial_index)``, so a report depends only on its
arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fixed_rank import (
    SubspacePair,
    adapted_frame,
    frame_from_bases,
    normal_block,
    proj_normal,
    proj_tangent,
)
from .linalg_core import (
    DEFAULT_TOL,
    TolerancePolicy,
    numerical_rank,
    orthonormal_range_basis,
    singular_values,
)
from .retraction import direct_sum_rank_check, orthographic_retract
from .tangent_cone import (
    check_bound,
    decompose,
    membership,
    membership_at,
    membership_grassmann,
    membership_kernel_frames,
    project_to_cone,
    sample_cone_element,
)

MAX_REGENERATIONS = 20


@dataclass
class TrialReport:
    name: str
    trials: int
    failures: int
    worst_violation: float
    seed: int
    params: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, message: str) -> None:
        self.failures += 1
        if len(self.messages) < 10:
            self.messages.append(message)

    def note_violation(self, value: float) -> None:
        self.worst_violation = max(self.worst_violation, float(value))

    def to_record(self) -> dict:
        rec = {
            "check": self.name,
            "status": "pass" if self.passed else "fail",
            "trials": self.trials,
            "failures": self.failures,
            "worst_violation": self.worst_violation,
            "seed": self.seed,
        }
        rec.update({f"param.{k}": v for k, v in self.params.items()})
        rec.update({f"count.{k}": v for k, v in self.counters.items()})
        return rec

    def format_machine(self) -> str:
        return "\n".join(f"{k}={_fmt(v)}" for k, v in self.to_record().items())

    def format_text(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [
            f"[{'PASS' if self.passed else 'FAIL'}] {self.name}({params})",
            f"  trials={self.trials} failures={self.failures} "
            f"worst_violation={self.worst_violation:.3e} seed={self.seed}",
        ]
        lines += [f"  {k}: {_fmt(v)}" for k, v in self.counters.items()]
        lines += [f"  ! {msg}" for msg in self.messages]
        return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def random_point(m: int, n: int, k: int, rng: np.random.Generator,
                 tol: TolerancePolicy = DEFAULT_TOL, unit_floor: bool = False) -> np.ndarray:
    """Random ``m x n`` matrix of numerical rank exactly ``k`` from Gaussian factors.

    With ``unit_floor`` the result is scaled so that ``sigma_k = 1``.
    """
    if k == 0:
        return np.zeros((m, n))
    for _ in range(MAX_REGENERATIONS):
        X = rng.standard_normal((m, k)) @ rng.standard_normal((k, n))
        s = singular_values(X)
        if numerical_rank(X, tol) == k and s[k - 1] > 1e-6 * s[0]:
            return X / s[k - 1] if unit_floor else X
    raise RuntimeError(f"could not draw a well-conditioned rank-{k} point")


def random_low_rank(m: int, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if k == 0:
        return np.zeros((m, n))
    return rng.standard_normal((m, k)) @ rng.standard_normal((k, n))


def cross_checked_membership(X, Z, r: int, rng: np.random.Generator,
                             tol: TolerancePolicy = DEFAULT_TOL, frame=None) -> tuple[bool, bool]:
    """Run all three membership oracles; returns ``(verdict, all_agree)``.

    The kernel-frame oracle gets non-orthonormal bases ``U_perp G`` and
    ``V_perp H`` with random invertible ``G``, ``H``.
    """
    if frame is None:
        frame = adapted_frame(X, tol)
    report = membership_at(frame, Z, r, tol)
    dm = frame.U_perp.shape[1]
    dn = frame.V_perp.shape[1]
    P = frame.U_perp @ rng.standard_normal((dm, dm))
    Q = frame.V_perp @ rng.standard_normal((dn, dn))
    by_kernel = membership_kernel_frames(P, Q, Z, r, frame.rank, tol)
    by_grassmann = membership_grassmann(X, Z, r, tol)
    verdict = report.is_member
    return verdict, verdict == by_kernel == by_grassmann


def _check_dims(m: int, n: int, r: int, r_low: int) -> None:
    if not 0 <= r_low <= r:
        raise ValueError(f"need 0 <= r_low <= r, got r_low={r_low}, r={r}")
    check_bound((m, n), r)


# ---------------------------------------------------------------------------
# the 4x4 counterexample


def counterexample_point() -> np.ndarray:
    return np.diag([1.0, 1.0, 0.0, 0.0])


def counterexample_term(i: int) -> np.ndarray:
    Xi = counterexample_point()
    Xi[1, 3] = 1.0 / i
    Xi[2, 2] = 1.0 / i
    Xi[3, 1] = 1.0 / i
    Xi[3, 3] = 1.0 / i**2
    return Xi


def counterexample_limit() -> np.ndarray:
    Z = np.zeros((4, 4))
    Z[1, 3] = Z[2, 2] = Z[3, 1] = 1.0
    return Z


def counterexample_check(count: int = 100, tol: TolerancePolicy = DEFAULT_TOL,
                        block_atol: float = 1e-12) -> TrialReport:
    """Reproduce the 4x4 sequence whose normal projections exceed the rank budget.

    For ``i = 1..count`` checks that the normal projection of ``X_i`` is
    ``diag(0, 0, 1/i, 1/i^2)`` with rank 2, that ``i (X_i - X)`` approaches the
    limit at distance exactly ``1/i``, that the limit is in the cone with normal
    block ``[[1, 0], [0, 0]]``, and that the retraction-corrected remainder
    ``X_i - L_i`` has rank at most 1 and satisfies rank additivity.
    """
    r = 3
    X = counterexample_point()
    Z = counterexample_limit()
    report = TrialReport("counterexample", count, 0, 0.0, 0, params={"m": 4, "n": 4, "r": r, "r_low": 2})
    frame = adapted_frame(X, tol)
    if frame.rank != 2:
        report.fail(f"rank of X is {frame.rank}, expected 2")
        return report

    # canonical frame built from standard basis vectors
    e = np.eye(4)
    canonical = frame_from_bases(e[:, :2], e[:, :2])
    canon_block = canonical.U_perp.T @ Z @ canonical.V_perp
    lim = membership(X, Z, r, tol)
    lifted = frame.U_perp @ normal_block(frame, Z) @ frame.V_perp.T
    expected_lift = np.zeros((4, 4))
    expected_lift[2, 2] = 1.0
    block_dev = max(
        float(np.max(np.abs(lifted - expected_lift))),
        float(np.max(np.abs(np.abs(canon_block) - np.array([[1.0, 0.0], [0.0, 0.0]])))),
    )
    report.note_violation(block_dev)
    limit_ok = lim.is_member and lim.normal_rank == 1 and lim.rank_budget == 1 and block_dev <= block_atol
    if not limit_ok:
        report.fail(f"limit membership failed: {lim.to_record()}, block deviation {block_dev:.3e}")

    normal_ranks = set()
    remainder_ranks = set()
    additivity_ok = True
    for i in range(1, count + 1):
        Xi = counterexample_term(i)
        PN = proj_normal(frame, Xi)
        expected = np.zeros((4, 4))
        expected[2, 2] = 1.0 / i
        expected[3, 3] = 1.0 / i**2
        dev = float(np.max(np.abs(PN - expected)))
        report.note_violation(dev)
        nr = numerical_rank(PN, tol)
        normal_ranks.add(nr)
        if nr != 2 or dev > block_atol:
            report.fail(f"i={i}: normal projection rank {nr}, deviation {dev:.3e}")

        if numerical_rank(Xi, tol) > r:
            report.fail(f"i={i}: X_i has rank above {r}")

        # i (X_i - X) - Z = (1/i) e_4 e_4^T
        dist = float(np.linalg.norm(i * (Xi - X) - Z))
        report.note_violation(abs(dist - 1.0 / i))
        if abs(dist - 1.0 / i) > block_atol:
            report.fail(f"i={i}: ||i(X_i - X) - Z|| = {dist!r}, expected 1/{i}")

        Li = orthographic_retract(X, frame, proj_tangent(frame, Xi - X), tol)
        rem = Xi - Li
        rr = numerical_rank(rem, tol)
        remainder_ranks.add(rr)
        schur = np.zeros((4, 4))
        schur[2, 2] = 1.0 / i
        rem_dev = float(np.max(np.abs(rem - schur)))
        report.note_violation(rem_dev)
        if rr > r - 2 or rem_dev > block_atol:
            report.fail(f"i={i}: rank(X_i - L_i) = {rr}, deviation from closed form {rem_dev:.3e}")

        pair_L = SubspacePair(orthonormal_range_basis(Li, tol), orthonormal_range_basis(Li.T, tol))
        pair_N = SubspacePair(frame.U_perp, frame.V_perp)
        if not direct_sum_rank_check(pair_L, Li, pair_N, rem, tol):
            additivity_ok = False
            report.fail(f"i={i}: rank additivity fails for L_i and X_i - L_i")

    report.counters.update(
        normal_ranks=",".join(map(str, sorted(normal_ranks))),
        remainder_ranks=",".join(map(str, sorted(remainder_ranks))),
        limit_member=lim.is_member,
        limit_normal_singular_values=",".join(repr(float(s)) for s in lim.normal_block_singular_values),
        rank_additivity=additivity_ok,
    )
    return report


# ---------------------------------------------------------------------------
# inclusion chain


def verify_inclusion_chain(m: int, n: int, r: int, r_low: int, trials: int, seed: int,
                           steps: int = 20, sequence_atol: float = 1e-6,
                           tol: TolerancePolicy = DEFAULT_TOL) -> TrialReport:
    """Exercise both nontrivial inclusions of the cone description on random data.

    Per trial, with ``X`` of rank ``r_low`` (scaled so ``sigma_{r_low} = 1``):

    1. a block-parametrized cone sample passes membership;
    2. ``W = Z1 + Z2`` with ``Z1`` tangent and ``Z2`` any matrix of rank at most
       ``r - r_low`` passes membership and its orthogonal split reconstructs it;
    3. ``X_i = R_X(t_i Z1) + t_i Z2`` with ``t_i = 2^-i`` has rank at most ``r`` and
       ``(X_i - X) / t_i`` reaches ``W`` (unit norm) within ``sequence_atol`` at
       the last step.

    Every membership call is cross-checked across the three oracles.
    """
    _check_dims(m, n, r, r_low)
    report = TrialReport("inclusion_chain", trials, 0, 0.0, seed,
                         params={"m": m, "n": n, "r": r, "r_low": r_low, "steps": steps})
    disagreements = 0
    budget = r - r_low
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        X = random_point(m, n, r_low, rng, tol, unit_floor=True)
        frame = adapted_frame(X, tol)
        if frame.rank != r_low:
            report.fail(f"trial {trial}: drew a point of rank {frame.rank}")
            continue

        W = sample_cone_element(X, r, rng, frame=frame)
        ok, agree = cross_checked_membership(X, W, r, rng, tol, frame)
        disagreements += not agree
        if not (ok and agree):
            report.fail(f"trial {trial}: block-parametrized sample rejected (agree={agree})")

        Z1 = proj_tangent(frame, rng.standard_normal((m, n)))
        Z2 = random_low_rank(m, n, budget, rng)
        c = np.linalg.norm(Z1 + Z2)
        if c == 0.0:
            c = 1.0
        Z1, Z2 = Z1 / c, Z2 / c
        W2 = Z1 + Z2
        ok, agree = cross_checked_membership(X, W2, r, rng, tol, frame)
        disagreements += not agree
        if not (ok and agree):
            report.fail(f"trial {trial}: tangent + low-rank element rejected (agree={agree})")
            continue
        split = decompose(X, W2, r, tol, frame=frame)
        if np.linalg.norm(split.total - W2) > 1e-12 * max(1.0, np.linalg.norm(W2)):
            report.fail(f"trial {trial}: decomposition does not reconstruct its input")

        err = np.inf
        for i in range(1, steps + 1):
            t = 2.0**-i
            Xi = orthographic_retract(X, frame, t * Z1, tol) + t * Z2
            if numerical_rank(Xi, tol) > r:
                report.fail(f"trial {trial}: sequence term {i} has rank above {r}")
                break
            err = float(np.linalg.norm((Xi - X) / t - W2))
        report.note_violation(err)
        if not err < sequence_atol:
            report.fail(f"trial {trial}: difference quotient error {err:.3e} at t=2^-{steps}")
    report.counters["oracle_disagreements"] = disagreements
    return report


# ---------------------------------------------------------------------------
# limits of sequences


def estimate_limit(points, times, X) -> tuple[np.ndarray, float]:
    """Extrapolate ``lim (X_i - X) / t_i`` from the last three terms.

    Requires ``t_{i+1} = t_i / 2`` on the tail. Two Richardson levels cancel the
    ``O(t)`` and ``O(t^2)`` terms; the returned residual is the distance between
    the two first-level estimates.
    """
    if len(points) < 3:
        raise ValueError("need at least three sequence terms")
    t = np.asarray(times[-3:], dtype=np.float64)
    if not np.allclose(t[1:] / t[:-1], 0.5, rtol=1e-12, atol=0.0):
        raise ValueError("the last three times must halve successively")
    Q = [(np.asarray(P) - X) / ti for P, ti in zip(points[-3:], t)]
    first_a = 2.0 * Q[1] - Q[0]
    first_b = 2.0 * Q[2] - Q[1]
    Z = (4.0 * first_b - first_a) / 3.0
    return Z, float(np.linalg.norm(first_b - first_a))


def limit_membership(X, points, times, r: int, tol: TolerancePolicy = DEFAULT_TOL):
    """Membership of the extrapolated limit with a residual-scaled rank floor."""
    Z, residual = estimate_limit(points, times, X)
    scaled = tol.with_floor(10.0 * residual)
    return membership(X, Z, r, scaled), Z, residual


def _is_cauchy_tail(points, times, X, tail: int = 4) -> bool:
    Q = [(np.asarray(P) - X) / t for P, t in zip(points[-tail - 1:], times[-tail - 1:])]
    diffs = [np.linalg.norm(b - a) for a, b in zip(Q, Q[1:])]
    return all(d2 <= d1 * (1 + 1e-9) + 1e-13 for d1, d2 in zip(diffs, diffs[1:]))


def factored_sequence(m: int, n: int, r: int, r_low: int, rng: np.random.Generator, steps: int):
    """Points ``(L0 + t L1 + t^2 L2)(R0 + t R1 + t^2 R2)^T`` at ``t = 2^-1 .. 2^-steps``.

    ``L0``, ``R0`` carry only ``r_low`` nonzero columns, so the limit point has
    rank ``r_low`` and every term has rank at most ``r``.
    """
    L = [rng.standard_normal((m, r)) for _ in range(3)]
    R = [rng.standard_normal((n, r)) for _ in range(3)]
    L[0][:, r_low:] = 0.0
    R[0][:, r_low:] = 0.0
    X = L[0] @ R[0].T
    times = [2.0**-i for i in range(1, steps + 1)]
    points = []
    for t in times:
        Lt = L[0] + t * L[1] + t * t * L[2]
        Rt = R[0] + t * R[1] + t * t * R[2]
        points.append(Lt @ Rt.T)
    exact = L[1] @ R[0].T + L[0] @ R[1].T
    return X, points, times, exact


def sequence_limit_check(m: int, n: int, r: int, r_low: int, trials: int, seed: int,
                         steps: int = 12, tol: TolerancePolicy = DEFAULT_TOL) -> TrialReport:
    """Limits of difference quotients of random rank-``<= r`` sequences are cone members."""
    _check_dims(m, n, r, r_low)
    report = TrialReport("sequence_limit", trials, 0, 0.0, seed,
                         params={"m": m, "n": n, "r": r, "r_low": r_low, "steps": steps})
    regenerated = 0
    disagreements = 0
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        for _ in range(MAX_REGENERATIONS):
            X, points, times, exact = factored_sequence(m, n, r, r_low, rng, steps)
            if numerical_rank(X, tol) == r_low and _is_cauchy_tail(points, times, X):
                break
            regenerated += 1
        else:
            report.fail(f"trial {trial}: could not generate a convergent sequence")
            continue
        if any(numerical_rank(P, tol) > r for P in points):
            report.fail(f"trial {trial}: a sequence term has rank above {r}")
        rep, Z, residual = limit_membership(X, points, times, r, tol)
        rel = float(np.linalg.norm(Z - exact) / max(1.0, np.linalg.norm(exact)))
        report.note_violation(rel)
        scaled = tol.with_floor(10.0 * residual)
        _, agree = cross_checked_membership(X, Z, r, rng, scaled)
        disagreements += not agree
        if not (rep.is_member and agree):
            report.fail(f"trial {trial}: estimated limit rejected (sigma={rep.normal_block_singular_values}, "
                        f"residual={residual:.3e}, agree={agree})")
        if rel > 1e-6:
            report.fail(f"trial {trial}: extrapolated limit off by {rel:.3e}")
    report.counters.update(regenerated=regenerated, oracle_disagreements=disagreements)
    return report


# ---------------------------------------------------------------------------
# analytic arcs


@dataclass(frozen=True)
class ArcSpec:
    """Arc ``t -> L(t) R(t)^T`` with matrix polynomial factors of width ``r``."""

    left_poly: tuple
    right_poly: tuple
    step: float = 1e-2

    def evaluate(self, t: float) -> np.ndarray:
        L = sum(t**j * c for j, c in enumerate(self.left_poly))
        R = sum(t**j * c for j, c in enumerate(self.right_poly))
        return L @ R.T

    def derivative_at_zero(self) -> np.ndarray:
        L, R = self.left_poly, self.right_poly
        out = np.zeros((L[0].shape[0], R[0].shape[0]))
        if len(L) > 1:
            out += L[1] @ R[0].T
        if len(R) > 1:
            out += L[0] @ R[1].T
        return out

    def central_difference(self, h: float) -> np.ndarray:
        return (self.evaluate(h) - self.evaluate(-h)) / (2.0 * h)


def random_arc(m: int, n: int, r: int, r_low: int, degree: int, rng: np.random.Generator,
               step: float = 1e-2) -> ArcSpec:
    left = [rng.standard_normal((m, r)) for _ in range(degree + 1)]
    right = [rng.standard_normal((n, r)) for _ in range(degree + 1)]
    left[0][:, r_low:] = 0.0
    right[0][:, r_low:] = 0.0
    return ArcSpec(tuple(left), tuple(right), step)


def arc_tangent_check(m: int, n: int, r: int, r_low: int, degree: int, trials: int, seed: int,
                      halvings: int = 3, tol: TolerancePolicy = DEFAULT_TOL) -> TrialReport:
    """Velocities of random polynomial arcs in the variety are cone members.

    The analytic velocity is compared with central differences over a halving
    sweep of ``h``: second-order convergence (error ratio near 4) for
    ``degree >= 2`` and exactness up to round-off for ``degree == 1``.
    """
    _check_dims(m, n, r, r_low)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    report = TrialReport("arc_tangent", trials, 0, 0.0, seed,
                         params={"m": m, "n": n, "r": r, "r_low": r_low, "degree": degree})
    disagreements = 0
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        for _ in range(MAX_REGENERATIONS):
            arc = random_arc(m, n, r, r_low, degree, rng)
            X = arc.evaluate(0.0)
            if numerical_rank(X, tol) == r_low:
                break
        else:
            report.fail(f"trial {trial}: could not draw an arc with base rank {r_low}")
            continue
        V = arc.derivative_at_zero()
        hs = [arc.step * 2.0**-j for j in range(halvings + 1)]
        errs = [float(np.linalg.norm(arc.central_difference(h) - V)) for h in hs]
        scale = max(1.0, float(np.linalg.norm(V)))
        if degree == 1:
            viol = max(errs) / scale
            report.note_violation(viol)
            if viol > 1e-10:
                report.fail(f"trial {trial}: central difference not exact for a quadratic arc ({viol:.3e})")
        else:
            orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
            viol = max(abs(o - 2.0) for o in orders)
            report.note_violation(viol)
            if viol > 0.2:
                report.fail(f"trial {trial}: finite-difference order {orders}, expected 2")
        ok, agree = cross_checked_membership(X, V, r, rng, tol)
        disagreements += not agree
        if not (ok and agree):
            report.fail(f"trial {trial}: arc velocity rejected (agree={agree})")
    report.counters["oracle_disagreements"] = disagreements
    return report


# ---------------------------------------------------------------------------
# metric projection


def batched_cone_samples(frame, r: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` independent cone samples at the frame's point, shape ``(count, m, n)``."""
    m, n = frame.shape
    k = frame.rank
    budget = r - k
    G = np.zeros((count, m, n))
    G[:, :k, :] = rng.standard_normal((count, k, n))
    G[:, k:, :k] = rng.standard_normal((count, m - k, k))
    G[:, k:, k:] = rng.standard_normal((count, m - k, budget)) @ rng.standard_normal((count, budget, n - k))
    G *= np.abs(rng.standard_normal((count, 1, 1)))
    return frame.left @ G @ frame.right.T


def local_cone_samples(frame, projection, r: int, rng: np.random.Generator, count: int,
                       radius: float = 1e-2) -> np.ndarray:
    """Cone points near ``projection``: tangent and low-rank-factor perturbations."""
    m, n = frame.shape
    k = frame.rank
    budget = r - k
    B = normal_block(frame, projection.normal_part)
    u, s, vt = np.linalg.svd(B, full_matrices=False)
    F1 = u[:, :budget] * s[:budget]
    F2 = vt[:budget].T
    eps = radius * rng.random((count, 1, 1))
    T = rng.standard_normal((count, m, n))
    UUt = frame.U @ frame.U.T
    VVt = frame.V @ frame.V.T
    T = UUt @ T + T @ VVt - UUt @ T @ VVt
    F1p = F1 + eps * rng.standard_normal((count,) + F1.shape)
    F2p = F2 + eps * rng.standard_normal((count,) + F2.shape)
    N = frame.U_perp @ (F1p @ np.swapaxes(F2p, 1, 2)) @ frame.V_perp.T
    return projection.tangent_part + eps * T + N


def projection_optimality_check(m: int, n: int, r: int, trials: int, seed: int, samples: int = 1000,
                                slack: float = 1e-9, tol: TolerancePolicy = DEFAULT_TOL) -> TrialReport:
    """Sampled nearest-point test for :func:`project_to_cone`.

    The base point rank cycles through ``0..r``. Half of the competitors are
    global cone samples, half are perturbations of the projection inside the
    cone. At the origin the distance is compared with the truncated-SVD tail.
    """
    check_bound((m, n), r)
    report = TrialReport("projection_optimality", trials, 0, 0.0, seed,
                         params={"m": m, "n": n, "r": r, "samples": samples})
    origin_checks = 0
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        k = trial % (r + 1)
        X = random_point(m, n, k, rng, tol)
        frame = adapted_frame(X, tol)
        Z = rng.standard_normal((m, n))
        proj = project_to_cone(X, Z, r, tol, frame=frame)
        P = proj.total
        d_star = float(np.linalg.norm(Z - P))
        if not membership_at(frame, P, r, tol).is_member:
            report.fail(f"trial {trial}: projection is not a cone member")
        half = samples // 2
        W = np.concatenate([
            batched_cone_samples(frame, r, rng, samples - half),
            local_cone_samples(frame, proj, r, rng, half),
        ])
        dists = np.sqrt(np.sum((Z - W) ** 2, axis=(1, 2)))
        gap = d_star - float(dists.min())
        report.note_violation(max(gap, 0.0))
        if gap > slack:
            report.fail(f"trial {trial}: sampled cone point closer by {gap:.3e}")
        if k == 0:
            origin_checks += 1
            s = singular_values(Z)
            tail = float(np.sum(s[r:] ** 2))
            if abs(d_star**2 - tail) > 1e-10 * max(1.0, float(np.sum(s**2))):
                report.fail(f"trial {trial}: origin distance^2 {d_star**2!r} vs tail {tail!r}")
    report.counters["origin_checks"] = origin_checks
    return report
