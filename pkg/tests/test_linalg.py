import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from somor.exceptions import IndefiniteMatrix, SingularMatrix
from somor.linalg import psd_lowrank_factor, real_schur, schur_eigenvalues, solve_linear, svd_decompose


class TestSolveLinear:
    def test_identity(self):
        B = np.arange(6.0).reshape(3, 2)
        np.testing.assert_allclose(solve_linear(np.eye(3), B), B)

    def test_diagonal(self):
        np.testing.assert_allclose(solve_linear(np.diag([2.0, 4.0]), [[2.0], [4.0]]), [[1], [1]])

    def test_back_substitution(self):
        X = solve_linear(np.array([[1.0, 1.0], [0.0, 1.0]]), [[3.0], [1.0]])
        np.testing.assert_allclose(X, [[2], [1]])

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones((2, 1)))

    def test_complex(self):
        A = np.array([[1j, 0], [0, 2]])
        np.testing.assert_allclose(solve_linear(A, np.ones(2, complex)).ravel(), [-1j, 0.5])

    def test_residual_random(self, rng):
        A = rng.standard_normal((30, 30)) + 10 * np.eye(30)
        B = rng.standard_normal((30, 4))
        X = solve_linear(A, B)
        cond = np.linalg.cond(A)
        assert np.linalg.norm(A @ X - B) <= 100 * cond * np.finfo(float).eps * np.linalg.norm(B)


class TestSVD:
    def test_identity(self):
        np.testing.assert_allclose(svd_decompose(np.eye(2))[1], [1, 1])

    def test_diagonal(self):
        U, s, X = svd_decompose(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(s, [3, 2])
        np.testing.assert_allclose(np.abs(U), np.eye(2))
        np.testing.assert_allclose(np.abs(X), np.eye(2))

    def test_antidiagonal(self):
        np.testing.assert_allclose(svd_decompose(np.array([[0.0, 2.0], [1.0, 0.0]]))[1], [2, 1])

    def test_random_reconstruction(self, rng):
        A = rng.standard_normal((20, 20))
        U, s, X = svd_decompose(A)
        assert np.linalg.norm(A - U @ np.diag(s) @ X.T) <= 1e-10 * np.linalg.norm(A)
        assert np.linalg.norm(U.T @ U - np.eye(20)) <= 1e-10


class TestSchur:
    def test_diagonal(self):
        q, t = real_schur(np.diag([-1.0, -2.0]))
        assert sorted(np.diag(t)) == [-2.0, -1.0]
        np.testing.assert_allclose(np.abs(q) @ np.ones(2), np.ones(2))

    def test_upper_triangular(self):
        A = np.array([[1.0, 5.0], [0.0, 3.0]])
        q, t = real_schur(A)
        np.testing.assert_allclose(q @ t @ q.T, A, atol=1e-14)
        assert abs(t[1, 0]) < 1e-14

    def test_companion_eigenvalues(self):
        q, t = real_schur(np.array([[0.0, 1.0], [-2.0, -3.0]]))
        np.testing.assert_allclose(sorted(schur_eigenvalues(t).real), [-2, -1])

    def test_complex_pair(self):
        q, t = real_schur(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        ev = sorted(schur_eigenvalues(t), key=lambda z: z.imag)
        np.testing.assert_allclose(ev, [-1j, 1j], atol=1e-14)


class TestPSDFactor:
    def test_identity(self):
        R = psd_lowrank_factor(np.eye(2))
        np.testing.assert_allclose(R @ R.T, np.eye(2))
        assert R.shape == (2, 2)

    def test_rank_one(self):
        R = psd_lowrank_factor(np.diag([4.0, 0.0]))
        assert R.shape == (2, 1)
        np.testing.assert_allclose(np.abs(R), [[2], [0]])

    def test_full(self):
        P = np.array([[2.0, 1.0], [1.0, 2.0]])
        R = psd_lowrank_factor(P)
        assert R.shape[1] == 2
        assert np.abs(R @ R.T - P).max() <= 1e-12 * 3

    def test_indefinite(self):
        with pytest.raises(IndefiniteMatrix):
            psd_lowrank_factor(np.diag([1.0, -0.5]))

    def test_zero(self):
        assert psd_lowrank_factor(np.zeros((3, 3))).shape == (3, 0)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (6, 3), elements=st.floats(-10, 10)))
def test_psd_factor_is_projection(G):
    # factoring R R^T again reproduces the same Gram product
    P = G @ G.T
    R = psd_lowrank_factor(P)
    R2 = psd_lowrank_factor(R @ R.T)
    scale = max(1.0, np.abs(P).max())
    assert np.abs(R2 @ R2.T - R @ R.T).max() <= 1e-10 * scale
    assert R.shape[1] <= 3


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (5, 4), elements=st.floats(-1e3, 1e3)))
def test_svd_spectrum_sorted_nonnegative(A):
    U, s, X = svd_decompose(A)
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
    assert np.linalg.norm(A - (U * s) @ X.T) <= 1e-10 * max(1.0, np.linalg.norm(A))
