import numpy as np
import pytest

from detvar.harness import (
    ArcSpec,
    TrialReport,
    arc_tangent_check,
    counterexample_check,
    counterexample_limit,
    counterexample_point,
    counterexample_term,
    cross_checked_membership,
    estimate_limit,
    limit_membership,
    projection_optimality_check,
    random_point,
    sequence_limit_check,
    trial_rng,
    verify_inclusion_chain,
)
from detvar.linalg_core import numerical_rank, singular_values

from oracles import counterexample_exact


def test_fixture_matches_exact_oracle():
    for i in (1, 4, 100):
        assert np.array_equal(counterexample_term(i), np.array(counterexample_exact(i), dtype=float))
    assert numerical_rank(counterexample_point()) == 2
    assert numerical_rank(counterexample_limit()) == 3


def test_counterexample_report():
    rep = counterexample_check()
    assert rep.passed, rep.messages
    assert rep.counters["normal_ranks"] == "2"
    assert rep.counters["remainder_ranks"] == "1"
    assert rep.counters["limit_member"] is True
    assert rep.counters["rank_additivity"] is True


def test_random_point_rank_and_floor(rng):
    for k in range(4):
        X = random_point(5, 4, k, rng, unit_floor=True)
        assert numerical_rank(X) == k
        if k:
            assert singular_values(X)[k - 1] == pytest.approx(1.0)


def test_trial_rng_is_keyed_by_seed_and_index():
    a = trial_rng(7, 3).standard_normal(4)
    assert np.array_equal(a, trial_rng(7, 3).standard_normal(4))
    assert not np.array_equal(a, trial_rng(7, 4).standard_normal(4))
    assert not np.array_equal(a, trial_rng(8, 3).standard_normal(4))


@pytest.mark.parametrize("r_low", [0, 2, 3])
def test_inclusion_chain_small(r_low):
    rep = verify_inclusion_chain(4, 4, 3, r_low, trials=50, seed=1)
    assert rep.passed, rep.messages
    assert rep.counters["oracle_disagreements"] == 0


def test_inclusion_chain_is_reproducible():
    a = verify_inclusion_chain(5, 4, 3, 1, trials=20, seed=11)
    b = verify_inclusion_chain(5, 4, 3, 1, trials=20, seed=11)
    assert a.format_machine() == b.format_machine()
    assert a.to_record() == b.to_record()


def test_inclusion_chain_rejects_bad_parameters():
    with pytest.raises(ValueError):
        verify_inclusion_chain(4, 4, 3, 4, trials=1, seed=0)
    with pytest.raises(ValueError):
        verify_inclusion_chain(4, 4, 4, 2, trials=1, seed=0)


def test_estimate_limit_of_constant_sequence(rng):
    X = random_point(4, 3, 2, rng)
    times = [2.0**-j for j in range(1, 6)]
    Z, residual = estimate_limit([X] * 5, times, X)
    assert np.array_equal(Z, np.zeros_like(X))
    assert residual == 0.0


def test_estimate_limit_requires_halving():
    X = np.zeros((2, 2))
    with pytest.raises(ValueError):
        estimate_limit([X, X, X], [1.0, 0.3, 0.1], X)
    with pytest.raises(ValueError):
        estimate_limit([X, X], [1.0, 0.5], X)


def test_limit_of_counterexample_sequence():
    # feed i = 2^j so that t_i = 1/i halves
    X = counterexample_point()
    idx = [2**j for j in range(4, 12)]
    rep, Z, residual = limit_membership(X, [counterexample_term(i) for i in idx], [1.0 / i for i in idx], 3)
    assert np.linalg.norm(Z - counterexample_limit()) <= 1e-12
    assert residual <= 1e-12
    assert rep.is_member


def test_sequence_limit_check():
    rep = sequence_limit_check(5, 4, 3, 1, trials=30, seed=2)
    assert rep.passed, rep.messages
    assert rep.worst_violation <= 1e-6


def test_linear_arc_derivative_is_exact(rng):
    L = (rng.standard_normal((4, 2)), rng.standard_normal((4, 2)))
    R = (rng.standard_normal((3, 2)),)
    arc = ArcSpec(L, R)
    assert np.allclose(arc.derivative_at_zero(), L[1] @ R[0].T)
    assert np.allclose(arc.central_difference(0.1), arc.derivative_at_zero(), atol=1e-13)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_arc_check(degree):
    rep = arc_tangent_check(4, 5, 3, 1, degree, trials=40, seed=3)
    assert rep.passed, rep.messages


def test_projection_optimality_check():
    rep = projection_optimality_check(4, 4, 2, trials=12, seed=4, samples=200)
    assert rep.passed, rep.messages
    assert rep.counters["origin_checks"] == 4


def test_cross_check_agrees_on_known_cases(rng):
    X = np.diag([1.0, 0.0, 0.0])
    assert cross_checked_membership(X, np.eye(3), 2, rng) == (False, True)
    assert cross_checked_membership(X, np.diag([0.0, 1.0, 0.0]), 2, rng) == (True, True)


def test_report_formats():
    rep = TrialReport("demo", 3, 0, 0.0, 5, params={"m": 2}, counters={"ok": True})
    assert rep.passed
    lines = rep.format_machine().splitlines()
    assert all("=" in line and " " not in line.split("=")[0] for line in lines)
    assert "check=demo" in lines and "status=pass" in lines
    rep.fail("boom")
    assert not rep.passed
    assert rep.to_record()["status"] == "fail"
    assert "boom" in rep.format_text()
