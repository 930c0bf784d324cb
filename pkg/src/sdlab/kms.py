"""Block upper triangular KMS matrices ``K_m(A)``.

``K_m(A)`` is ``mn x mn`` with block ``(i, j) = A^{j-i}`` for ``j > i`` and
zero elsewhere.  This module covers construction, the resolvent and
congruence identities, the Jordan structure of ``J_m(0) (x) A``,
similarity and unitary similarity deciders, and the zero-dilation
index formulas.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, DimensionError, HypothesisViolation
from .linalg import (
    as_matrix,
    default_inertia_tol,
    eigvalsh_batch,
    inertia,
    inertia_from_values,
    nullity,
    random_unitary,
    rank_nullity,
    re_part,
    shift,
    singular_values,
)

RANK_TOL = 1e-8
SPECHT_MAX_DEGREE = 12
# |det A| > (NONSINGULAR_REL * sigma_max)^n
NONSINGULAR_REL = 1e-10


@dataclass(frozen=True)
class KmsSpec:
    m: int
    A: np.ndarray

    def __post_init__(self):
        if self.m < 2:
            raise DimensionError("KMS matrices need m >= 2")
        object.__setattr__(self, "A", as_matrix(self.A, square=True))

    @property
    def n(self) -> int:
        return self.A.shape[0]


def build(spec: KmsSpec) -> np.ndarray:
    m, A, n = spec.m, spec.A, spec.n
    K = np.zeros((m * n, m * n), dtype=complex)
    power = np.eye(n, dtype=complex)
    for d in range(1, m):
        power = power @ A
        for i in range(m - d):
            j = i + d
            K[i * n:(i + 1) * n, j * n:(j + 1) * n] = power
    return K


def kms(m: int, A) -> np.ndarray:
    return build(KmsSpec(m, A))


def jkron(m: int, A) -> np.ndarray:
    """``J_m(0) (x) A``."""
    return np.kron(shift(m), as_matrix(A))


def resolvent_residual(spec: KmsSpec) -> float:
    """``||(I + K_m(A)) (I - J_m(0) (x) A) - I||_F``."""
    d = spec.m * spec.n
    eye = np.eye(d)
    return float(np.linalg.norm((eye + build(spec)) @ (eye - jkron(spec.m, spec.A)) - eye))


def resolvent_scale(spec: KmsSpec) -> float:
    return 1.0 + np.linalg.norm(spec.A, 2) ** spec.m


def _trailing_zero_projector(m: int, n: int) -> np.ndarray:
    """``(I_{m-1} (+) [0]) (x) I_n`` as a diagonal mask."""
    return np.kron(np.diag(np.r_[np.ones(m - 1), 0.0]), np.eye(n))


def congruence_check(m: int, A, alpha: complex, beta: complex, similarity: bool = False) -> float:
    """Residual of ``S (alpha K + beta K^*) S^* = alpha J(x)A + beta (J(x)A)^* - (alpha+beta) D (x) AA^*``.

    ``S = I - J_m(0) (x) A`` and ``D = I_{m-1} (+) [0]``.  With
    ``similarity=True`` (requires ``alpha beta = 1``) the left side is
    further conjugated by ``T = diag(1, alpha, ..., alpha^{m-1}) (x) I`` and
    compared against ``2 Re(J (x) A) - (alpha+beta) D (x) AA^*``.
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    K = kms(m, A)
    JA = jkron(m, A)
    S = np.eye(m * n) - JA
    lhs = S @ (alpha * K + beta * K.conj().T) @ S.conj().T
    D = np.kron(_trailing_zero_projector(m, 1), A @ A.conj().T)
    if not similarity:
        rhs = alpha * JA + beta * JA.conj().T - (alpha + beta) * D
        return float(np.linalg.norm(lhs - rhs))
    if abs(alpha * beta - 1) > 1e-12:
        raise HypothesisViolation("similarity form needs alpha * beta = 1")
    t = np.repeat([alpha**k for k in range(m)], n)
    lhs = (t[:, None] * lhs) / t[None, :]
    rhs = JA + JA.conj().T - (alpha + beta) * D
    return float(np.linalg.norm(lhs - rhs))


def congruence_scale(m: int, A, alpha: complex, beta: complex) -> float:
    return (1 + abs(alpha) + abs(beta)) * (1 + np.linalg.norm(as_matrix(A), 2)) ** (m + 1)


# ---------------------------------------------------------------------------
# Jordan structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegreCharacteristic:
    sizes: tuple[int, ...]  # Jordan block sizes at 0, nonincreasing
    alg_mult0: int
    unstable: bool = False

    def __post_init__(self):
        if list(self.sizes) != sorted(self.sizes, reverse=True):
            raise ValueError("Segre sizes must be nonincreasing")
        if sum(self.sizes) != self.alg_mult0:
            raise ValueError("Segre sizes must sum to the algebraic multiplicity")


@dataclass(frozen=True)
class NkCounts:
    counts: tuple[int, ...]  # N_1 .. N_m
    unstable: bool = False

    def total_dim(self) -> int:
        return sum(k * c for k, c in enumerate(self.counts, start=1))

    def __getitem__(self, k: int) -> int:
        """``N_k`` with 1-based ``k``."""
        return self.counts[k - 1]


def conjugate_partition(parts) -> tuple[int, ...]:
    parts = [p for p in parts if p > 0]
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i) for i in range(1, max(parts) + 1))


def weyr_sequence(X, max_power: int, tol: float = RANK_TOL) -> tuple[tuple[int, ...], bool]:
    """``w_k = nullity(X^k) - nullity(X^{k-1})`` for ``k = 1..max_power``.

    The rank cut for ``X^k`` is ``tol * ||X||_2^k``: measuring against
    ``sigma_max(X^k)`` would turn a power that vanishes up to rounding into
    a full-rank matrix of noise.
    """
    X = as_matrix(X, square=True)
    d = X.shape[0]
    base = float(np.linalg.norm(X, 2))
    power = np.eye(d, dtype=complex)
    prev = 0
    seq = []
    unstable = False
    for k in range(1, max_power + 1):
        power = power @ X
        s = singular_values(power)
        cut = tol * base**k
        if cut > 0:
            unstable |= bool(np.any((s > cut / 10) & (s < cut * 10)))
            cur = d - int(np.count_nonzero(s > cut))
        else:
            cur = d
        seq.append(cur - prev)
        prev = cur
    return tuple(seq), unstable


def segre_at_zero(A, tol: float = RANK_TOL) -> SegreCharacteristic:
    A = as_matrix(A, square=True)
    w, unstable = weyr_sequence(A, A.shape[0], tol)
    # rounding can make a computed Weyr sequence increase; clip to keep a partition
    w = list(w)
    for i in range(1, len(w)):
        if w[i] > w[i - 1]:
            unstable = True
            w[i] = w[i - 1]
    sizes = conjugate_partition(w)
    return SegreCharacteristic(sizes, sum(sizes), unstable)


def nk_formula(m: int, A, tol: float = RANK_TOL) -> NkCounts:
    """Counts of ``J_k(0)`` blocks in the Jordan form of ``J_m(0) (x) A``.

    Each nilpotent block ``J_s(0)`` of ``A`` contributes two blocks of every
    size below ``min(m, s)`` and ``|m - s| + 1`` blocks of size
    ``min(m, s)``; the ``n - alpha`` dimensions belonging to nonzero
    eigenvalues each contribute one ``J_m(0)``.
    """
    if m < 2:
        raise DimensionError("m must be at least 2")
    A = as_matrix(A, square=True)
    n = A.shape[0]
    segre = segre_at_zero(A, tol)
    counts = [0] * m
    counts[m - 1] = n - segre.alg_mult0
    for s in segre.sizes:
        top = min(m, s)
        for k in range(1, top):
            counts[k - 1] += 2
        counts[top - 1] += abs(m - s) + 1
    return NkCounts(tuple(counts), segre.unstable)


def nk_oracle(m: int, A, tol: float = RANK_TOL) -> NkCounts:
    """Block counts read off the Weyr sequence of ``J_m(0) (x) A`` itself."""
    M = jkron(m, A)
    w, unstable = weyr_sequence(M, m + 1, tol)
    # w_k = number of blocks of size >= k; N_k = w_k - w_{k+1}
    counts = tuple(w[k] - w[k + 1] for k in range(m))
    return NkCounts(counts, unstable or any(c < 0 for c in counts))


def kms_similar(m: int, A, B, tol: float = RANK_TOL) -> bool:
    A, B = as_matrix(A, square=True), as_matrix(B, square=True)
    if A.shape != B.shape:
        raise DimensionError("A and B must have the same size")
    return nk_formula(m, A, tol).counts == nk_formula(m, B, tol).counts


def k2_similar(A, B, tol: float = RANK_TOL) -> bool:
    A, B = as_matrix(A, square=True), as_matrix(B, square=True)
    if A.shape != B.shape:
        raise DimensionError("A and B must have the same size")
    return rank_nullity(A, tol)[0] == rank_nullity(B, tol)[0]


def k2_unitarily_similar(A, B, tol: float = RANK_TOL) -> bool:
    A, B = as_matrix(A, square=True), as_matrix(B, square=True)
    if A.shape != B.shape:
        raise DimensionError("A and B must have the same size")
    sa, sb = singular_values(A), singular_values(B)
    scale = max(sa[0], sb[0], 1e-300)
    return bool(np.max(np.abs(sa - sb)) <= tol * scale)


# ---------------------------------------------------------------------------
# Word traces (Specht)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Word:
    """``s^{m_1} t^{n_1} ... s^{m_k} t^{n_k}`` stored as the exponent list."""

    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.exps) % 2 or any(e < 0 for e in self.exps):
            raise ValueError("exponents must be a nonnegative list of even length")
        if self.total_degree < 1:
            raise ValueError("word must have positive degree")

    @property
    def total_degree(self) -> int:
        return sum(self.exps)

    @classmethod
    def from_string(cls, letters: str) -> "Word":
        exps = []
        for want in itertools.cycle("st"):
            if not letters:
                break
            run = len(letters) - len(letters.lstrip(want))
            exps.append(run)
            letters = letters[run:]
        if len(exps) % 2:
            exps.append(0)
        return cls(tuple(exps))

    def to_string(self) -> str:
        return "".join(("s" if i % 2 == 0 else "t") * e for i, e in enumerate(self.exps))

    def __str__(self) -> str:
        return self.to_string()

    def evaluate(self, X: np.ndarray, Y: np.ndarray | None = None) -> np.ndarray:
        """``p(X, Y)`` with ``Y = X^*`` by default."""
        Y = X.conj().T if Y is None else Y
        out = np.eye(X.shape[0], dtype=X.dtype)
        for i, e in enumerate(self.exps):
            if e:
                out = out @ np.linalg.matrix_power(X if i % 2 == 0 else Y, e)
        return out


def _canonical_rotation(letters: str) -> str:
    return min(letters[i:] + letters[:i] for i in range(len(letters)))


@lru_cache(maxsize=None)
def _shift_trace(m: int, word: str) -> int:
    J = np.eye(m, m, 1, dtype=np.int64)
    X = Word.from_string(word).evaluate(J, J.T)
    return int(np.trace(X))


@lru_cache(maxsize=None)
def _canonical_words(max_degree: int) -> tuple[str, ...]:
    out = []
    for length in range(1, max_degree + 1):
        for letters in itertools.product("st", repeat=length):
            w = "".join(letters)
            if w == _canonical_rotation(w):
                out.append(w)
    return tuple(out)


def specht_words(m: int, max_degree: int = SPECHT_MAX_DEGREE) -> list[tuple[Word, int]]:
    """Cyclic classes of words with ``tr p(J_m(0), J_m(0)^*) != 0``.

    Ordered by degree, then exponent list.  Traces are computed in integer
    arithmetic (``J`` and ``J^T`` are partial permutations, so products are
    0/1 matrices).
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    words = []
    for w in _canonical_words(max_degree):
        tr = _shift_trace(m, w)
        if tr != 0:
            words.append((Word.from_string(w), tr))
    words.sort(key=lambda wt: (wt[0].total_degree, wt[0].exps))
    return words


@dataclass(frozen=True)
class Distinguished:
    word: Word
    trace_a: complex
    trace_b: complex


@dataclass(frozen=True)
class IndistinguishableUpTo:
    """No separating word up to ``max_degree``.  Not a proof of unitary similarity."""

    max_degree: int


def kms_unitarily_similar_upto(m: int, A, B, max_degree: int = SPECHT_MAX_DEGREE, tol: float = 1e-9):
    A, B = as_matrix(A, square=True), as_matrix(B, square=True)
    if A.shape != B.shape:
        raise DimensionError("A and B must have the same size")
    for word, _ in specht_words(m, max_degree):
        ta = complex(np.trace(word.evaluate(A)))
        tb = complex(np.trace(word.evaluate(B)))
        if abs(ta - tb) > tol * max(1.0, abs(ta), abs(tb)):
            return Distinguished(word, ta, tb)
    return IndistinguishableUpTo(max_degree)


# ---------------------------------------------------------------------------
# Zero-dilation index
# ---------------------------------------------------------------------------

def is_nonsingular(A, rel: float = NONSINGULAR_REL) -> bool:
    s = singular_values(A)
    if s[0] == 0:
        return False
    # |det A| = prod(s) > (rel * s_max)^n, computed in logs
    return bool(np.sum(np.log(s)) > s.size * math.log(rel * s[0]))


def zdi_kms2(A, tol: float = RANK_TOL) -> int:
    """Index of ``K_2(A)``: ``n + nullity(A)``."""
    A = as_matrix(A, square=True)
    return A.shape[0] + nullity(A, tol)


def x_matrix(k: int, m: int, A, theta: float) -> np.ndarray:
    """``X_k^A(theta)``.

    k = m: ``2 Re(J_m(0) (x) A) - 2 cos(theta) (I_{m-1} (+) [0]) (x) AA^*``;
    k < m: ``2 Re(J_k(0) (x) A) - 2 cos(theta) I_k (x) AA^*``.
    """
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    A = as_matrix(A, square=True)
    AA = A @ A.conj().T
    JA = jkron(k, A)
    D = _trailing_zero_projector(m, 1) if k == m else np.eye(k)
    return JA + JA.conj().T - 2 * np.cos(theta) * np.kron(D, AA)


def zdi_kms(m: int, A, tol: float | None = None, check_reduction: bool = True) -> int:
    """``i_{>=0}(Re K_m(A))`` for ``m >= 3``.

    For nonsingular ``A`` the value is cross-checked against
    ``n + i_{>=0}(X_{m-2}^A(0))`` and a mismatch raises
    :class:`ConsistencyError`.
    """
    if m < 3:
        raise HypothesisViolation("use zdi_kms2 for m = 2")
    A = as_matrix(A, square=True)
    n = A.shape[0]
    H = re_part(kms(m, A))
    d = inertia(H, tol).geq0
    if check_reduction and is_nonsingular(A):
        X = x_matrix(m - 2, m, A, 0.0)
        # X carries the doubled scale of 2 Re(.)
        xtol = None if tol is None else 2 * tol
        reduced = n + inertia(X, xtol).geq0
        if reduced != d:
            raise ConsistencyError(f"direct index {d} != reduced index {reduced}")
    return d


def zdi_kms_normal(m: int, eigenvalues, tol: float = 0.0) -> int:
    """Closed form for normal nonsingular ``A`` from the eigenvalue moduli.

    ``k_i`` is the largest ``k`` in ``1..m-2`` with
    ``cos(k pi/(m-1)) < |lambda_i| <= cos((k-1) pi/(m-1))``, or 1 if none.
    ``tol`` widens the upper comparison so values within ``tol`` of a
    threshold count as equal to it.
    """
    if m < 3:
        raise HypothesisViolation("closed form needs m >= 3")
    mods = np.abs(np.asarray(eigenvalues, dtype=complex).ravel())
    if np.any(mods == 0):
        raise HypothesisViolation("eigenvalues must be nonzero")
    total = 0
    for r in mods:
        k_i = 1
        for k in range(1, m - 1):
            if math.cos(k * math.pi / (m - 1)) < r <= math.cos((k - 1) * math.pi / (m - 1)) + tol:
                k_i = k
        total += k_i
    return total


def monotonicity_profile(k: int, m: int, A, thetas, tol: float | None = None) -> list[tuple[float, int]]:
    """``[(theta, i_{>=0}(X_k^A(theta)))]`` over a sorted grid inside [0, pi] or [pi, 2 pi]."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(np.diff(thetas) < 0):
        raise ValueError("theta grid must be sorted")
    lo, hi = thetas.min(), thetas.max()
    if not ((0 <= lo and hi <= np.pi) or (np.pi <= lo and hi <= 2 * np.pi)):
        raise ValueError("theta grid must lie within [0, pi] or within [pi, 2 pi]")
    stack = np.stack([x_matrix(k, m, A, t) for t in thetas])
    if tol is None:
        tol = max(default_inertia_tol(X) for X in stack)
    values = eigvalsh_batch(stack)
    return [(float(t), inertia_from_values(v, tol).geq0) for t, v in zip(thetas, values)]


def random_normal(n: int, rng: np.random.Generator, moduli) -> np.ndarray:
    """``U diag(lambda) U^*`` with the given eigenvalue moduli and random phases."""

    lam = np.asarray(moduli) * np.exp(2j * np.pi * rng.uniform(size=n))
    U = random_unitary(n, rng)
    return U @ np.diag(lam) @ U.conj().T
