import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detvar.linalg_core import numerical_rank
from detvar.solver import CompletionProblem, solve_completion


def completion_instance(seed, m=20, n=20, r=3, frac=0.6):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
    mask = rng.random((m, n)) < frac
    return M, mask


def test_start_at_solution_is_a_fixed_point():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 5))
    mask = rng.random((6, 5)) < 0.7
    X, history = solve_completion(CompletionProblem(M, mask, 2), M.copy())
    assert len(history) - 1 <= 2
    assert CompletionProblem(M, mask, 2).relative_residual(X) <= 1e-10


def test_rank_zero_stays_at_origin():
    M, mask = completion_instance(1, 6, 5, 2)
    p = CompletionProblem(M, mask, 0)
    X, history = solve_completion(p, np.zeros_like(M))
    assert np.array_equal(X, np.zeros_like(M))
    assert history[-1] == pytest.approx(0.5 * np.sum((mask * M) ** 2))


@pytest.mark.parametrize("retraction", ["truncate", "orthographic"])
def test_recovers_low_rank_matrix(retraction):
    M, mask = completion_instance(2)
    p = CompletionProblem(M, mask, 3, step_size=1.0 / mask.mean())
    X, history = solve_completion(p, np.zeros_like(M), retraction=retraction)
    assert len(history) - 1 <= 500
    assert p.relative_residual(X) < 1e-6
    assert numerical_rank(X) <= 3


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1))
def test_history_nonincreasing_and_iterates_feasible(seed):
    M, mask = completion_instance(seed, 8, 7, 2)
    p = CompletionProblem(M, mask, 2, max_iters=40)
    X, history = solve_completion(p, np.zeros_like(M), debug=True)
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert numerical_rank(X) <= 2


def test_problem_validation():
    with pytest.raises(ValueError):
        CompletionProblem(np.eye(3), np.zeros((3, 3)), 1)
    with pytest.raises(ValueError):
        CompletionProblem(np.eye(3), np.ones((3, 2)), 1)
    with pytest.raises(ValueError):
        CompletionProblem(np.eye(3), np.ones((3, 3)), 1, step_size=0.0)
    p = CompletionProblem(np.eye(3), np.ones((3, 3)), 1)
    with pytest.raises(ValueError):
        solve_completion(p, np.eye(3))  # X0 above the rank bound
    with pytest.raises(ValueError):
        solve_completion(p, np.zeros((3, 3)), retraction="projective")
