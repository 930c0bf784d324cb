import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdlab import companion as cp
from sdlab import dilation as dl
from sdlab import kms
from sdlab.linalg import jordan_block, random_unitary

from strategies import complex_matrices, seeds


def normal_index_oracle(eigs):
    """Exact index of a normal matrix: fewest eigenvalues in a closed rotated half-plane.

    The count is piecewise constant between the angles where some rotated
    eigenvalue crosses the imaginary axis, so midpoints of those arcs suffice.
    """
    eigs = np.asarray(eigs, dtype=complex)
    nz = eigs[np.abs(eigs) > 0]
    if nz.size == 0:
        return len(eigs)
    crit = np.sort(np.mod(np.concatenate([np.pi / 2 - np.angle(nz), -np.pi / 2 - np.angle(nz)]), 2 * np.pi))
    mids = (crit + np.roll(crit, -1) + np.r_[np.zeros(len(crit) - 1), 2 * np.pi]) / 2
    return min(int(np.sum((np.exp(1j * t) * eigs).real >= -1e-12)) for t in mids)


class TestIgeqAt:
    def test_zero(self):
        for t in (0.0, 1.0, 4.0):
            assert dl.igeq_at(np.zeros((3, 3)), t) == 3

    def test_jordan(self):
        for t in np.linspace(0, 2 * np.pi, 7):
            assert dl.igeq_at(jordan_block(2), t) == 1

    def test_identity(self):
        assert dl.igeq_at(np.eye(3), 0.0) == 3
        assert dl.igeq_at(np.eye(3), np.pi) == 0

    def test_profile_matches_pointwise(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        ts = rng.uniform(0, 2 * np.pi, 25)
        prof = dl.igeq_profile(A, ts)
        assert list(prof) == [dl.igeq_at(A, t) for t in ts]


class TestZdi:
    def test_zero(self):
        assert dl.zdi(np.zeros((3, 3))).index == 3

    def test_scalar_companion_z4(self):
        assert dl.zdi(cp.build(cp.GeneralizedCompanionSpec.scalar([0, 0, 0, 0]))).index == 2

    def test_kms3_of_one(self):
        assert dl.zdi(kms.kms(3, [[1.0]])).index == 1

    def test_argmin_attains_index(self, rng):
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        res = dl.zdi(A)
        assert dl.igeq_at(A, res.argmin_theta) == res.index
        assert min(c for _, c in res.profile) == res.index

    @given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=6), seeds)
    def test_normal_matches_exact_oracle(self, eigs, seed):
        eigs = [complex(round(z.real, 3), round(z.imag, 3)) for z in eigs]
        U = random_unitary(len(eigs), np.random.default_rng(seed))
        A = U @ np.diag(eigs) @ U.conj().T
        assert dl.zdi(A, tol=1e-9).index == normal_index_oracle(eigs)

    @given(complex_matrices(max_n=5), seeds, st.floats(0, 2 * np.pi))
    def test_unitary_and_rotation_invariance(self, A, seed, phi):
        U = random_unitary(len(A), np.random.default_rng(seed))
        d = dl.zdi(A).index
        assert dl.zdi(U @ A @ U.conj().T).index == d
        assert dl.zdi(np.exp(1j * phi) * A).index == d

    @given(complex_matrices(max_n=5), st.lists(st.floats(0, 2 * np.pi), min_size=1, max_size=5))
    def test_index_below_every_sample(self, A, thetas):
        d = dl.zdi(A).index
        assert all(d <= dl.igeq_at(A, t) for t in thetas)

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            dl.zdi(np.eye(2), grid_size=4)


class TestRankK:
    def test_zero_matrix(self):
        assert dl.lambda_k_contains_zero(np.zeros((3, 3)), 3)

    def test_identity(self):
        assert not dl.lambda_k_contains_zero(np.eye(3), 1)

    def test_jordan(self):
        assert dl.lambda_k_contains_zero(jordan_block(2), 1)
        assert not dl.lambda_k_contains_zero(jordan_block(2), 2)

    @given(complex_matrices(max_n=4))
    def test_membership_threshold_is_index(self, A):
        d = dl.zdi(A).index
        member = [dl.lambda_k_contains_zero(A, k) for k in range(1, len(A) + 1)]
        assert member == [k <= d for k in range(1, len(A) + 1)]


class TestApproachBound:
    def test_zero(self):
        assert dl.approach_bound(np.zeros((3, 3)), 1j) == 3

    def test_definite(self):
        assert dl.approach_bound(np.eye(4), 1.0) == 2

    def test_odd_companion_bound(self, rng):
        spec = cp.GeneralizedCompanionSpec(
            3, 1, (np.ones((1, 1)), np.ones((1, 1))),
            tuple(rng.standard_normal((1, 1)) + 1j * rng.standard_normal((1, 1)) for _ in range(3)),
        )
        C = cp.build(spec)
        d = dl.zdi(C).index
        for t in rng.uniform(0, 2 * np.pi, 12):
            b = dl.approach_bound(C, np.exp(1j * t))
            # nullity of Re(omega C) is at most n = 1 here, so the bound never exceeds 2
            assert d <= b <= 2

    @given(complex_matrices(max_n=5), st.floats(0, 2 * np.pi))
    def test_bounds_index(self, A, t):
        assert dl.zdi(A).index <= dl.approach_bound(A, np.exp(1j * t))

    def test_off_circle(self):
        with pytest.raises(ValueError):
            dl.approach_bound(np.eye(2), 2.0)


def test_isolated_dips():
    prof = [(0.0, 3), (1.0, 1), (2.0, 3), (3.0, 2), (4.0, 2), (5.0, 3)]
    assert dl.isolated_dips(prof) == [1]


def test_refinement_finds_narrow_minimum():
    # Two eigenvalues just past +i and -i: the index is 0 only on an arc of
    # width 2*delta.  The extra phase puts one end of that arc on the grid
    # point theta = 0, where an eigenvalue of the rotated real part vanishes,
    # so the signature changes across the cell holding the arc.
    delta = 1e-4
    eigs = np.exp(1j * delta) * np.array([1j * np.exp(1j * delta), -1j * np.exp(-1j * delta)])
    A = np.diag(eigs)
    assert normal_index_oracle(eigs) == 0
    assert dl.zdi(A, grid_size=64, tol=1e-12, refine=False).index == 1
    res = dl.zdi(A, grid_size=64, tol=1e-12)
    assert res.index == 0 and res.refined
