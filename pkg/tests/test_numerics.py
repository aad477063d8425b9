import math

import numpy as np
import pytest

from intermittent.exceptions import DesignError, DimensionError, DomainError
from intermittent.numerics import eig, expm, solve_care, spectral_radius


def taylor_expm(M, terms=60):
    # plain power series; only used on small, well-scaled matrices
    out = np.eye(len(M))
    term = np.eye(len(M))
    for k in range(1, terms):
        term = term @ M / k
        out = out + term
    return out


class TestExpm:
    def test_zero(self):
        np.testing.assert_array_equal(expm(np.zeros((2, 2))), np.eye(2))

    def test_diagonal(self):
        np.testing.assert_allclose(expm(np.diag([1.0, -2.0])), np.diag([math.e, math.exp(-2)]),
                                   rtol=1e-14)

    def test_nilpotent(self):
        np.testing.assert_allclose(expm([[0.0, 1.0], [0.0, 0.0]]), [[1, 1], [0, 1]], atol=1e-15)

    def test_rotation_against_series(self):
        th = 0.3
        M = np.array([[0.0, th], [-th, 0.0]])
        closed = np.array([[math.cos(th), math.sin(th)], [-math.sin(th), math.cos(th)]])
        np.testing.assert_allclose(taylor_expm(M), closed, atol=1e-15)
        np.testing.assert_allclose(expm(M), closed, rtol=1e-12, atol=1e-15)

    def test_random_against_series(self, rng):
        M = rng.normal(size=(5, 5)) * 0.3
        np.testing.assert_allclose(expm(M), taylor_expm(M), rtol=1e-12, atol=1e-14)

    def test_result_is_read_only(self):
        E = expm(np.eye(2))
        with pytest.raises(ValueError):
            E[0, 0] = 1.0

    def test_errors(self):
        with pytest.raises(DimensionError):
            expm(np.zeros((2, 3)))
        with pytest.raises(DomainError):
            expm([[np.nan, 0.0], [0.0, 1.0]])


class TestEig:
    def test_diagonal_sorted(self):
        np.testing.assert_allclose(eig(np.diag([3.0, 1.0, 2.0])).values, [3, 2, 1])

    def test_rotation_tie_break(self):
        d = eig([[0.0, 1.0], [-1.0, 0.0]])
        np.testing.assert_allclose(d.values, [1j, -1j], atol=1e-15)

    def test_companion_against_roots(self):
        # z^2 - 3z + 2
        C = np.array([[3.0, -2.0], [1.0, 0.0]])
        oracle = sorted(np.roots([1.0, -3.0, 2.0]).real, reverse=True)
        np.testing.assert_allclose(eig(C).values, oracle, rtol=1e-13)

    def test_residual_and_normalization(self, rng):
        M = rng.normal(size=(7, 7))
        d = eig(M)
        for j in range(7):
            v = d.vectors[:, j]
            assert np.linalg.norm(M @ v - d.values[j] * v) <= 1e-9 * np.linalg.norm(M, 2)
            assert abs(np.linalg.norm(v) - 1) < 1e-14
            k = np.argmax(np.abs(v))
            assert abs(v[k].imag) < 1e-14 and v[k].real > 0
        mags = np.abs(d.values)
        assert np.all(np.diff(mags) <= 1e-10 * mags.max())

    def test_spectral_radius(self):
        assert spectral_radius(np.diag([0.5, -2.0])) == pytest.approx(2.0)


class TestCare:
    def test_scalar(self):
        P = solve_care([[1.0]], [[1.0]], [[1.0]], [[1.0]])
        assert abs(P[0, 0] - (1 + math.sqrt(2))) <= 1e-12

    def test_stable_zero_cost(self):
        P = solve_care([[-1.0]], [[1.0]], [[0.0]], [[1.0]])
        assert abs(P[0, 0]) < 1e-14

    def test_random_three_state(self, rng):
        A = rng.normal(size=(3, 3))
        B = rng.normal(size=(3, 1))
        Q, R = np.eye(3), np.eye(1)
        P = solve_care(A, B, Q, R)
        res = A.T @ P + P @ A - P @ B @ B.T @ P + Q
        assert np.linalg.norm(res, 2) <= 1e-9 * (1 + np.linalg.norm(P, 2) ** 2)
        np.testing.assert_allclose(P, P.T, atol=1e-10)
        assert np.max(np.linalg.eigvals(A - B @ B.T @ P).real) < 0

    def test_indefinite_R(self):
        with pytest.raises(DesignError):
            solve_care([[1.0]], [[1.0]], [[1.0]], [[-1.0]])

    def test_unstabilizable(self):
        A = np.diag([1.0, 2.0])
        B = np.array([[1.0], [0.0]])
        with pytest.raises(DesignError):
            solve_care(A, B, np.eye(2), np.eye(1))

    def test_asymmetric_Q(self):
        with pytest.raises(DesignError):
            solve_care(np.eye(2), np.eye(2), [[1.0, 1.0], [0.0, 1.0]], np.eye(2))
