"""Dense complex linear algebra substrate.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Hermitian
spectra come from a cyclic complex Jacobi solver (:func:`jacobi_eigh`);
the batched paths used by the angle sweeps go through LAPACK instead,
see :func:`eigvalsh_batch`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotHermitianError, SingularBlockError

EPS = np.finfo(float).eps

# Hermitian check: ||H - H*||_F <= HERM_TOL * ||H||_F
HERM_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(X, *, square: bool = False) -> np.ndarray:
    """Validate and convert ``X`` to a finite 2-D complex array."""
    M = np.array(X, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] == 0 or M.shape[1] == 0:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def re_part(X) -> np.ndarray:
    X = as_matrix(X, square=True)
    return (X + X.conj().T) / 2


def im_part(X) -> np.ndarray:
    X = as_matrix(X, square=True)
    return (X - X.conj().T) / 2j


def is_hermitian(H: np.ndarray, tol: float = HERM_TOL) -> bool:
    scale = max(np.linalg.norm(H), 1.0)
    return np.linalg.norm(H - H.conj().T) <= tol * scale


def _check_hermitian(H) -> np.ndarray:
    H = as_matrix(H, square=True)
    if not is_hermitian(H):
        raise NotHermitianError("matrix is not Hermitian to tolerance")
    return (H + H.conj().T) / 2


# ---------------------------------------------------------------------------
# Hermitian eigensolver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermitianEigen:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns
    sweeps: int = 0


def jacobi_eigh(H, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermitianEigen:
    """Cyclic Jacobi eigendecomposition of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``h_pq`` with a
    diagonal unitary and then applies the usual real symmetric rotation,
    so the combined 2x2 unitary is ``diag(1, e^{-i phi}) @ [[c, s], [-s, c]]``.
    """
    A = _check_hermitian(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    sweeps = 0
    if n > 1 and scale > 0:
        iu = np.triu_indices(n, 1)
        while sweeps < max_sweeps:
            off = np.sqrt(2.0) * np.linalg.norm(A[iu])
            if off <= tol * scale:
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    h = A[p, q]
                    ah = abs(h)
                    if ah <= 1e-300:
                        continue
                    phase = h / ah
                    app = A[p, p].real
                    aqq = A[q, q].real
                    tau = (aqq - app) / (2.0 * ah)
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                    c = 1.0 / np.hypot(1.0, t)
                    s = t * c
                    G = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                    cols = [p, q]
                    A[:, cols] = A[:, cols] @ G
                    A[cols, :] = G.conj().T @ A[cols, :]
                    A[p, q] = A[q, p] = 0.0
                    A[p, p] = A[p, p].real
                    A[q, q] = A[q, q].real
                    V[:, cols] = V[:, cols] @ G
        else:
            off = np.sqrt(2.0) * np.linalg.norm(A[iu])
            if off > tol * scale * 1e3:
                raise np.linalg.LinAlgError("Jacobi iteration did not converge")
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return HermitianEigen(w[order], V[:, order], sweeps)


def hermitian_eigen(H) -> HermitianEigen:
    return jacobi_eigh(H)


def eigvalsh_batch(stack: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues for a stack of Hermitian matrices (LAPACK)."""
    return np.linalg.eigvalsh(stack)


# ---------------------------------------------------------------------------
# Inertia, rank
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inertia:
    pos: int
    zero: int
    neg: int
    tol: float

    @property
    def dim(self) -> int:
        return self.pos + self.zero + self.neg

    @property
    def geq0(self) -> int:
        return self.pos + self.zero

    @property
    def leq0(self) -> int:
        return self.neg + self.zero


def default_inertia_tol(H: np.ndarray) -> float:
    return 64 * EPS * H.shape[0] * float(np.linalg.norm(H))


def inertia_from_values(values: np.ndarray, tol: float) -> Inertia:
    values = np.asarray(values)
    # open interval (-tol, tol) is zero; tol = 0 means exact sign
    pos = int(np.count_nonzero(values >= tol)) if tol > 0 else int(np.count_nonzero(values > 0))
    neg = int(np.count_nonzero(values <= -tol)) if tol > 0 else int(np.count_nonzero(values < 0))
    return Inertia(pos, values.size - pos - neg, neg, float(tol))


def inertia(H, tol: float | None = None) -> Inertia:
    """Count positive, zero and negative eigenvalues of Hermitian ``H``."""
    H = _check_hermitian(H)
    if tol is None:
        tol = default_inertia_tol(H)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return inertia_from_values(hermitian_eigen(H).values, tol)


def igeq0(H, tol: float | None = None) -> int:
    return inertia(H, tol).geq0


def singular_values(X) -> np.ndarray:
    return np.linalg.svd(as_matrix(X), compute_uv=False)


def rank_nullity(X, tol: float = 1e-8) -> tuple[int, int]:
    """Numerical rank and nullity.

    Singular values above ``tol * sigma_max`` count towards the rank
    (above ``tol`` itself when ``sigma_max`` is zero).
    """
    X = as_matrix(X)
    s = singular_values(X)
    smax = s[0] if s.size else 0.0
    thresh = tol * smax if smax > 0 else tol
    rank = int(np.count_nonzero(s > thresh))
    return rank, X.shape[1] - rank


def rank_is_unstable(X, tol: float = 1e-8, margin: float = 10.0) -> bool:
    """True if some singular value sits within ``margin`` of the rank cut."""
    s = singular_values(X)
    if s.size == 0 or s[0] == 0:
        return False
    cut = tol * s[0]
    return bool(np.any((s > cut / margin) & (s < cut * margin)))


def nullity(X, tol: float = 1e-8) -> int:
    return rank_nullity(X, tol)[1]


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def kron(X, Y) -> np.ndarray:
    return np.kron(as_matrix(X), as_matrix(Y))


def direct_sum(*blocks) -> np.ndarray:
    mats = [as_matrix(b) for b in blocks]
    rows = sum(b.shape[0] for b in mats)
    cols = sum(b.shape[1] for b in mats)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in mats:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def jordan_block(k: int, lam: complex = 0.0) -> np.ndarray:
    if k < 1:
        raise DimensionError("Jordan block size must be positive")
    return lam * np.eye(k, dtype=complex) + np.eye(k, k, 1, dtype=complex)


def shift(k: int) -> np.ndarray:
    """``J_k(0)``; returns the 1x1 zero matrix for k = 1."""
    return jordan_block(k, 0.0)


def schur_complement(M, block_dim: int, cond_limit: float = 1e12) -> np.ndarray:
    """``M22 - M21 M11^{-1} M12`` for the leading ``block_dim`` block."""
    M = as_matrix(M, square=True)
    d = M.shape[0]
    if not 0 < block_dim < d:
        raise DimensionError("block_dim must lie strictly between 0 and dim")
    M11 = M[:block_dim, :block_dim]
    if np.linalg.cond(M11) > cond_limit:
        raise SingularBlockError("leading block is singular to tolerance")
    return M[block_dim:, block_dim:] - M[block_dim:, :block_dim] @ np.linalg.solve(M11, M[:block_dim, block_dim:])


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_well_conditioned(n: int, rng: np.random.Generator, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    """Random nonsingular matrix with singular values drawn from [lo, hi]."""
    s = rng.uniform(lo, hi, n)
    return random_unitary(n, rng) @ np.diag(s) @ random_unitary(n, rng)
