import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdlab import linalg as la
from sdlab.errors import DimensionError, NotHermitianError, SingularBlockError

from strategies import complex_matrices, hermitian_matrices, seeds


class TestParts:
    def test_nilpotent(self):
        J = la.jordan_block(2)
        np.testing.assert_allclose(la.re_part(J), [[0, 0.5], [0.5, 0]])

    def test_hermitian_input(self):
        H = np.array([[2, 1 - 1j], [1 + 1j, -3]])
        np.testing.assert_allclose(la.re_part(H), H)
        np.testing.assert_allclose(la.im_part(H), 0)

    def test_skew(self):
        X = 1j * np.eye(3)
        np.testing.assert_allclose(la.re_part(X), 0)
        np.testing.assert_allclose(la.im_part(X), np.eye(3))

    @given(complex_matrices())
    def test_parts_reassemble(self, X):
        R, I = la.re_part(X), la.im_part(X)
        assert la.is_hermitian(R) and la.is_hermitian(I)
        np.testing.assert_allclose(R + 1j * I, X, atol=1e-12)

    def test_rejects_nonfinite_and_nonsquare(self):
        with pytest.raises(ValueError):
            la.as_matrix([[np.nan]])
        with pytest.raises(DimensionError):
            la.as_matrix(np.ones((2, 3)), square=True)
        with pytest.raises(DimensionError):
            la.re_part(np.ones((2, 3)))


class TestJacobi:
    def test_zero(self):
        np.testing.assert_allclose(la.hermitian_eigen(np.zeros((2, 2))).values, [0, 0])

    def test_re_nilpotent(self):
        np.testing.assert_allclose(la.hermitian_eigen(la.re_part(la.jordan_block(2))).values, [-0.5, 0.5], atol=1e-15)

    def test_tridiagonal(self):
        H = 2 * la.re_part(la.jordan_block(3)) - 2 * np.eye(3)
        want = sorted([-2 - np.sqrt(2), -2, np.sqrt(2) - 2])
        np.testing.assert_allclose(la.hermitian_eigen(H).values, want, atol=1e-13)
        # independent check: roots of the characteristic polynomial
        np.testing.assert_allclose(np.sort(np.roots(np.poly(H)).real), want, atol=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            la.hermitian_eigen(la.jordan_block(3))

    @given(hermitian_matrices(max_n=7))
    def test_matches_lapack_and_residuals(self, H):
        eig = la.jacobi_eigh(H)
        np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(H), atol=1e-12 * max(1, np.linalg.norm(H)))
        assert np.all(np.diff(eig.values) >= 0)
        V = eig.vectors
        scale = max(1.0, np.linalg.norm(H, 2))
        assert np.linalg.norm(H @ V - V * eig.values) <= 1e-12 * scale
        assert np.linalg.norm(V.conj().T @ V - np.eye(len(H))) <= 1e-12


class TestInertia:
    def test_diag(self):
        i = la.inertia(np.diag([1.0, 0.0, -2.0]), tol=1e-10)
        assert (i.pos, i.zero, i.neg) == (1, 1, 1)
        assert i.geq0 == 2 and i.leq0 == 2 and i.dim == 3

    def test_re_jordan3(self):
        i = la.inertia(la.re_part(la.jordan_block(3)))
        assert (i.pos, i.zero, i.neg) == (1, 1, 1)

    def test_block_tridiagonal_zero_count(self):
        # Re of a block shift with identity blocks, odd number of block rows
        m, n = 5, 2
        H = la.re_part(la.kron(la.shift(m), np.eye(n)))
        assert la.inertia(H).zero == n

    @given(hermitian_matrices(), seeds)
    def test_unitary_invariance(self, H, seed):
        U = la.random_unitary(len(H), np.random.default_rng(seed))
        a, b = la.inertia(H), la.inertia(U @ H @ U.conj().T, tol=la.inertia(H).tol)
        assert (a.pos, a.zero, a.neg) == (b.pos, b.zero, b.neg)

    @given(hermitian_matrices())
    def test_negation(self, H):
        i = la.inertia(H)
        assert la.igeq0(-H, tol=i.tol) == i.dim - i.pos


class TestRank:
    def test_examples(self):
        assert la.rank_nullity(la.jordan_block(2)) == (1, 1)
        assert la.rank_nullity(np.zeros((3, 3))) == (0, 3)

    @given(st.integers(1, 3), st.integers(1, 3), seeds)
    def test_kron_rank_multiplies(self, r1, r2, seed):
        rng = np.random.default_rng(seed)
        X = la.random_complex((3, r1), rng) @ la.random_complex((r1, 3), rng)
        Y = la.random_complex((3, r2), rng) @ la.random_complex((r2, 3), rng)
        assert la.rank_nullity(la.kron(X, Y))[0] == r1 * r2


class TestConstructions:
    def test_direct_sum(self):
        D = la.direct_sum(np.ones((1, 1)), 2 * np.ones((2, 2)))
        assert D.shape == (3, 3) and D[0, 1] == 0 and D[2, 2] == 2

    def test_schur(self):
        np.testing.assert_allclose(la.schur_complement(np.eye(4), 2), np.eye(2))
        np.testing.assert_allclose(la.schur_complement(np.ones((2, 2)), 1), [[0]])

    def test_schur_singular_block(self):
        with pytest.raises(SingularBlockError):
            la.schur_complement(np.zeros((3, 3)), 1)

    def test_jordan_and_shift(self):
        J = la.jordan_block(3, 2.0)
        np.testing.assert_allclose(np.diag(J), 2.0)
        np.testing.assert_allclose(np.diag(J, 1), 1.0)
        np.testing.assert_allclose(np.linalg.matrix_power(la.shift(3), 3), 0)
