import warnings

import numpy as np
import pytest

from qlms.evolution import (
    EvolutionOperator,
    PhaseWrapWarning,
    TrotterPlan,
    check_phase_range,
    exact_evolution,
    power_cache,
    rank_one_exponential,
    strang_split,
)
from qlms.linalg import PreconditionError, is_unitary, unitary_exponential

from conftest import random_unitary


class TestRankOne:
    def test_time_zero(self, rng):
        assert np.allclose(rank_one_exponential(rng.standard_normal(5), 0.0), np.eye(5), atol=1e-14)

    def test_basis_vector(self):
        t = 0.37
        E = rank_one_exponential([1, 0, 0], t)
        assert np.allclose(E, np.diag([np.exp(2j * np.pi * t), 1, 1]), atol=1e-15)

    def test_example_column(self, example_X):
        x1 = example_X[:, 0]
        E = rank_one_exponential(x1, 1.0)
        ref = unitary_exponential(np.outer(x1, x1), 1.0)
        assert np.max(np.abs(E - ref)) <= 1e-10

    @pytest.mark.parametrize("scale", [1.0, 0.3, 2.5])
    def test_random_against_spectral(self, scale, rng):
        for _ in range(5):
            x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            x = scale * x / np.linalg.norm(x)
            t = rng.uniform(-1, 1)
            ref = unitary_exponential(np.outer(x, x.conj()), t)
            assert np.max(np.abs(rank_one_exponential(x, t) - ref)) <= 1e-10

    def test_zero_vector(self):
        with pytest.raises(PreconditionError):
            rank_one_exponential(np.zeros(3), 1.0)


class TestStrang:
    def test_single_column_exact(self, rng):
        x = rng.standard_normal(4) / 3
        S = strang_split(TrotterPlan((x,), 1.0))
        assert np.max(np.abs(S.U - unitary_exponential(np.outer(x, x), 1.0))) <= 1e-10

    def test_factor_count(self, rng):
        for k in range(1, 6):
            plan = TrotterPlan.from_matrix(rng.standard_normal((8, k)))
            assert len(plan.factors()) == 2 * k - 1

    def test_example_ordering(self, example_X):
        plan = TrotterPlan.from_matrix(example_X, 1.0)
        assert plan.factors() == [(1, 0.5), (0, 1.0), (1, 0.5)]
        x1, x2 = example_X[:, 0], example_X[:, 1]
        half = unitary_exponential(np.outer(x2, x2), 0.5)
        ref = half @ unitary_exponential(np.outer(x1, x1), 1.0) @ half
        assert np.max(np.abs(strang_split(plan).U - ref)) <= 1e-10

    def test_three_column_recursion(self, rng):
        X = rng.standard_normal((4, 3)) / 4
        plan = TrotterPlan.from_matrix(X, 0.8)
        assert plan.factors() == [(2, 0.4), (1, 0.4), (0, 0.8), (1, 0.4), (2, 0.4)]
        ref = unitary_exponential(X @ X.T, 0.8)
        errs = [np.linalg.norm(strang_split(TrotterPlan.from_matrix(X, 0.8, r)).U - ref, 2) for r in (1, 2, 4)]
        assert errs[0] > errs[1] > errs[2]

    def test_time_symmetric(self, rng):
        X = rng.standard_normal((6, 3)) / 3
        S = strang_split(TrotterPlan.from_matrix(X, 0.9, 2)).U
        Sm = strang_split(TrotterPlan.from_matrix(X, -0.9, 2)).U
        assert np.max(np.abs(S @ Sm - np.eye(6))) <= 1e-9

    def test_error_monotone_in_slices(self, rng):
        X = rng.standard_normal((6, 2))
        X /= 1.5 * np.linalg.norm(X, 2)  # keep lambda_max below one
        ref = unitary_exponential(X @ X.T, 1.0)
        errs = [np.linalg.norm(strang_split(TrotterPlan.from_matrix(X, 1.0, r)).U - ref, 2) for r in (1, 2, 4, 8)]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        # second order: halving the slice cuts the error about fourfold
        assert 3.0 < errs[-2] / errs[-1] < 5.0

    def test_unitary(self, example_X):
        assert is_unitary(strang_split(TrotterPlan.from_matrix(example_X, 1.0, 3)).U)

    def test_empty(self):
        with pytest.raises(PreconditionError):
            strang_split(TrotterPlan((), 1.0))


class TestPowerCache:
    def test_identity(self):
        op = power_cache(np.eye(3), 4)
        assert all(np.allclose(p, np.eye(3)) for p in op.powers)

    def test_diagonal_phases_double(self):
        op = power_cache(np.diag(np.exp(2j * np.pi * np.array([0.1, 0.3]))), 3)
        for k, P in enumerate(op.powers):
            assert np.allclose(np.diag(P), np.exp(2j * np.pi * np.array([0.1, 0.3]) * 2**k))

    def test_random_against_naive(self, rng):
        U = random_unitary(6, rng)
        op = power_cache(U, 4)
        naive = np.eye(6)
        for _ in range(8):
            naive = naive @ U
        assert np.max(np.abs(op.powers[3] - naive)) <= 1e-9
        for P, Q in zip(op.powers, op.powers[1:]):
            assert np.max(np.abs(P @ P - Q)) <= 1e-9
            assert is_unitary(P)
        assert np.max(np.abs(op.power(13) - np.linalg.matrix_power(U, 13))) <= 1e-9

    def test_rejects_non_unitary(self):
        with pytest.raises(PreconditionError):
            power_cache(2 * np.eye(2), 2)


def test_phase_wrap_warning():
    with pytest.warns(PhaseWrapWarning):
        assert not check_phase_range(np.diag([1.2, 0.0]))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_phase_range(np.diag([0.6, 0.0]))
        assert isinstance(exact_evolution(np.diag([0.25, 0])), EvolutionOperator)
