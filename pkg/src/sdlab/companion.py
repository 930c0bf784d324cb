"""Generalized companion matrices ``C_{A,B}``.

``C_{A,B}`` is ``mn x mn``: the first ``m - 1`` block rows hold a zero
``n``-column strip followed by ``A_1 (+) ... (+) A_{m-1}``, and the last block
row is ``[B_0, B_1, ..., B_{m-1}]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dilation
from .errors import DimensionError, HypothesisViolation, SingularBlockError
from .linalg import as_matrix, direct_sum, nullity, random_complex, random_well_conditioned, re_part

# ω closer than this to sigma(P) is treated as lying on it
SIGMA_P_DISTANCE = 1e-6
# block A_j counts as singular when sigma_min / sigma_max falls below this
SINGULAR_RCOND = 1e-10


@dataclass(frozen=True)
class GeneralizedCompanionSpec:
    m: int
    n: int
    diag_blocks: tuple[np.ndarray, ...]  # A_1 .. A_{m-1}
    bottom_blocks: tuple[np.ndarray, ...]  # B_0 .. B_{m-1}

    def __post_init__(self):
        if self.m < 2 or self.n < 1:
            raise DimensionError("need m >= 2 and n >= 1")
        diag = tuple(as_matrix(a) for a in self.diag_blocks)
        bottom = tuple(as_matrix(b) for b in self.bottom_blocks)
        if len(diag) != self.m - 1 or len(bottom) != self.m:
            raise DimensionError(
                f"expected {self.m - 1} diagonal and {self.m} bottom blocks, "
                f"got {len(diag)} and {len(bottom)}"
            )
        for blk in diag + bottom:
            if blk.shape != (self.n, self.n):
                raise DimensionError(f"block of shape {blk.shape}, expected {(self.n, self.n)}")
        object.__setattr__(self, "diag_blocks", diag)
        object.__setattr__(self, "bottom_blocks", bottom)

    def A(self, j: int) -> np.ndarray:
        """Diagonal block ``A_j``, 1-based."""
        return self.diag_blocks[j - 1]

    def B(self, j: int) -> np.ndarray:
        """Bottom block ``B_j``, 0-based."""
        return self.bottom_blocks[j]

    @property
    def dim(self) -> int:
        return self.m * self.n

    @classmethod
    def scalar(cls, coeffs) -> "GeneralizedCompanionSpec":
        """Ordinary companion matrix of ``z^m + a_{m-1} z^{m-1} + ... + a_0``."""
        a = [complex(c) for c in coeffs]
        m = len(a)
        return cls(m, 1, tuple(np.ones((1, 1)) for _ in range(m - 1)), tuple(np.array([[-c]]) for c in a))

    @classmethod
    def block(cls, coeffs) -> "GeneralizedCompanionSpec":
        """Block companion of ``I z^m + sum_j C_j z^j`` given ``[C_0, ..., C_{m-1}]``."""
        C = [as_matrix(c) for c in coeffs]
        m, n = len(C), C[0].shape[0]
        return cls(m, n, tuple(np.eye(n) for _ in range(m - 1)), tuple(-c for c in C))


@dataclass(frozen=True)
class MatrixPolynomial:
    """``sum_k coeffs[k] z^k`` with ``n x n`` coefficients."""

    degree: int
    n: int
    coeffs: dict[int, np.ndarray] = field(repr=False)

    @property
    def monic(self) -> bool:
        lead = self.coeffs.get(self.degree)
        return lead is not None and np.allclose(lead, np.eye(self.n), atol=0, rtol=0)

    def __call__(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for k, C in self.coeffs.items():
            out = out + C * z**k
        return out


def build(spec: GeneralizedCompanionSpec) -> np.ndarray:
    m, n = spec.m, spec.n
    C = np.zeros((m * n, m * n), dtype=complex)
    C[: (m - 1) * n, n:] = direct_sum(*spec.diag_blocks)
    C[(m - 1) * n:, :] = np.hstack(spec.bottom_blocks)
    return C


def rotate(spec: GeneralizedCompanionSpec, omega: complex):
    """Return ``(spec with Y_j = omega^{m-j} B_j, U)`` with ``C_{A,Y} U = omega U C_{A,B}``."""
    _check_unit(omega)
    m, n = spec.m, spec.n
    Y = tuple(omega ** (m - j) * spec.B(j) for j in range(m))
    U = np.diag(np.repeat([omega**j for j in range(1, m + 1)], n))
    return GeneralizedCompanionSpec(m, n, spec.diag_blocks, Y), U


def _check_unit(omega: complex) -> None:
    if abs(abs(omega) - 1) > 1e-12:
        raise ValueError("omega must lie on the unit circle")


def _is_singular(X: np.ndarray) -> bool:
    s = np.linalg.svd(X, compute_uv=False)
    return s[0] == 0 or s[-1] / s[0] < SINGULAR_RCOND


def _require_nonsingular(spec: GeneralizedCompanionSpec, indices=None) -> None:
    indices = range(1, spec.m) if indices is None else indices
    bad = [j for j in indices if _is_singular(spec.A(j))]
    if bad:
        raise SingularBlockError(f"diagonal blocks A_j singular for j in {bad}")


def _require_even(spec: GeneralizedCompanionSpec) -> None:
    if spec.m % 2:
        raise HypothesisViolation("closed form needs even m")


def p_coefficients(spec: GeneralizedCompanionSpec, bottom=None) -> list[np.ndarray]:
    """``[P_1, ..., P_{m/2}]``.

    ``P_j = (-1)^{m/2-j} A_{m-1}^{-1} A_{m-2}^* A_{m-3}^{-1} ... A_{2j}^* A_{2j-1}^{-1} B_{2j-2}^*``
    (odd-indexed factors inverted, even-indexed adjointed).
    """
    _require_even(spec)
    _require_nonsingular(spec)
    m = spec.m
    B = spec.bottom_blocks if bottom is None else bottom
    out = []
    for j in range(1, m // 2 + 1):
        prod = np.eye(spec.n, dtype=complex)
        for i in range(m - 1, 2 * j - 2, -1):
            Ai = spec.A(i)
            factor = np.linalg.inv(Ai) if i % 2 else Ai.conj().T
            prod = prod @ factor
        out.append((-1) ** (m // 2 - j) * prod @ B[2 * j - 2].conj().T)
    return out


def p_polynomial(spec: GeneralizedCompanionSpec) -> MatrixPolynomial:
    """``P(z) = I z^m + sum_j P_j z^{2j-2}`` for even ``m``."""
    P = p_coefficients(spec)
    coeffs = {spec.m: np.eye(spec.n, dtype=complex)}
    for j, Pj in enumerate(P, start=1):
        coeffs[2 * j - 2] = coeffs.get(2 * j - 2, 0) + Pj
    return MatrixPolynomial(spec.m, spec.n, coeffs)


def det_re_closed_form(spec: GeneralizedCompanionSpec, omega: complex) -> float:
    """``det Re(omega C_{A,B})`` via ``(-1)^{mn/2} 2^{-mn} prod_{j odd} |det A_j|^2 |det P(omega)|^2``."""
    _check_unit(omega)
    P = p_polynomial(spec)
    m, n = spec.m, spec.n
    odd = np.prod([abs(np.linalg.det(spec.A(j))) ** 2 for j in range(1, m, 2)])
    return float((-1) ** (m * n // 2) / 2.0 ** (m * n) * odd * abs(np.linalg.det(P(omega))) ** 2)


def det_re_direct(spec: GeneralizedCompanionSpec, omega: complex) -> float:
    return float(np.linalg.det(re_part(omega * build(spec))).real)


def linearize(P: MatrixPolynomial) -> np.ndarray:
    """Block companion matrix of a monic matrix polynomial."""
    if not P.monic:
        raise HypothesisViolation("linearization needs a monic polynomial")
    zero = np.zeros((P.n, P.n), dtype=complex)
    coeffs = [P.coeffs.get(k, zero) for k in range(P.degree)]
    return build(GeneralizedCompanionSpec.block(coeffs))


def sigma_P(spec: GeneralizedCompanionSpec) -> np.ndarray:
    """Spectrum of ``P`` as eigenvalues of its block companion linearization."""
    return np.linalg.eigvals(linearize(p_polynomial(spec)))


def distance_to_sigma_P(spec: GeneralizedCompanionSpec, omega: complex, spectrum=None) -> float:
    spectrum = sigma_P(spec) if spectrum is None else spectrum
    return float(np.min(np.abs(spectrum - omega)))


def nullity_re(spec: GeneralizedCompanionSpec, omega: complex, tol: float = 1e-8) -> int:
    _check_unit(omega)
    return nullity(re_part(omega * build(spec)), tol)


def nullity_bound(spec: GeneralizedCompanionSpec, omega: complex, spectrum=None) -> int | None:
    """The proven upper bound on ``nullity_re`` at ``omega``, or None if none applies.

    odd m (A_1..A_{m-2} nonsingular): n.  even m: 2n, tightened to n when
    every A_j is nonsingular and omega is off sigma(P).
    """
    m, n = spec.m, spec.n
    if m == 2:
        bound = 2 * n
    else:
        if any(_is_singular(spec.A(j)) for j in range(1, m - 1)):
            return None
        bound = n if m % 2 else 2 * n
    if m % 2 == 0 and not any(_is_singular(spec.A(j)) for j in range(1, m)):
        if distance_to_sigma_P(spec, omega, spectrum) > SIGMA_P_DISTANCE:
            bound = n
    return bound


@dataclass(frozen=True)
class ZdiBounds:
    lower: int
    upper: int
    exact: int | None


def zdi_bounds(spec: GeneralizedCompanionSpec) -> ZdiBounds:
    _require_nonsingular(spec)
    m, n = spec.m, spec.n
    if m % 2:
        return ZdiBounds((m - 1) * n // 2, (m + 1) * n // 2, None)
    return ZdiBounds(m * n // 2, m * n // 2, m * n // 2)


def build_interp_example(m: int, n: int, k: int) -> GeneralizedCompanionSpec:
    """Spec whose index is ``(m-1) n / 2 + k``.

    ``A_j = I_n`` and ``B = [0, ..., 0, H/2]`` with ``H = 0_k (+) -I_{n-k}``.
    """
    if m < 3 or m % 2 == 0:
        raise HypothesisViolation("interpolation example needs odd m >= 3")
    if not 0 <= k <= n:
        raise ValueError("k must lie in 0..n")
    H = np.diag(np.r_[np.zeros(k), -np.ones(n - k)]).astype(complex)
    zero = np.zeros((n, n), dtype=complex)
    return GeneralizedCompanionSpec(
        m, n, tuple(np.eye(n, dtype=complex) for _ in range(m - 1)), tuple([zero] * (m - 1) + [H / 2])
    )


def interp_expected(m: int, n: int, k: int) -> int:
    return (m - 1) * n // 2 + k


def random_spec(m: int, n: int, rng: np.random.Generator) -> GeneralizedCompanionSpec:
    """Well-conditioned nonsingular diagonal blocks, Gaussian bottom row."""
    return GeneralizedCompanionSpec(
        m,
        n,
        tuple(random_well_conditioned(n, rng) for _ in range(m - 1)),
        tuple(random_complex((n, n), rng) for _ in range(m)),
    )


def plant_unit_root(spec: GeneralizedCompanionSpec, omega: complex, rng: np.random.Generator) -> GeneralizedCompanionSpec:
    """Replace ``B_0`` so that ``P(omega)`` is singular (rank n - 1).

    ``P(omega) = R + G B_0^*`` where ``G`` is the sign-carrying product in
    ``P_1`` and ``R`` collects the remaining terms; ``B_0`` is solved so that
    ``P(omega) = R (I - v v^*)`` for a random unit vector ``v``.
    """
    _require_even(spec)
    _check_unit(omega)
    m, n = spec.m, spec.n
    unit = np.eye(n, dtype=complex)
    probe = list(spec.bottom_blocks)
    probe[0] = unit  # B_0 = I isolates G: P_1 = G
    G = p_coefficients(spec, probe)[0]
    P = p_coefficients(spec)
    R = omega**m * unit + sum(P[j] * omega ** (2 * j) for j in range(1, len(P)))
    v = random_complex(n, rng)
    v /= np.linalg.norm(v)
    target = R @ (unit - np.outer(v, v.conj())) if n > 1 else np.zeros((1, 1), dtype=complex)
    B0_adj = np.linalg.solve(G, target - R)
    bottom = (B0_adj.conj().T,) + spec.bottom_blocks[1:]
    return GeneralizedCompanionSpec(m, n, spec.diag_blocks, bottom)


def oracle_index(spec: GeneralizedCompanionSpec, grid_size: int = dilation.DEFAULT_GRID, tol=None) -> int:
    return dilation.zdi(build(spec), grid_size, tol).index
