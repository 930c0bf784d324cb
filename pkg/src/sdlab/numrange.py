"""Numerical range geometry: support function, boundary, Kippenhahn polynomial."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kms
from .linalg import as_matrix, im_part, re_part, shift

DEFAULT_SAMPLES = 720
CIRCULARITY_TOL = 1e-8


@dataclass(frozen=True)
class BoundarySample:
    theta: float
    support: float  # lambda_max(Re(e^{-i theta} A))
    point: complex  # x^* A x for a top eigenvector x


def _rotated(A: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    # Re(e^{-i theta} A) = cos(theta) Re A + sin(theta) Im A
    R, I = re_part(A), im_part(A)
    return np.cos(thetas)[:, None, None] * R + np.sin(thetas)[:, None, None] * I


def support(A, theta: float) -> float:
    A = as_matrix(A, square=True)
    return float(np.linalg.eigvalsh(_rotated(A, np.array([theta])))[0, -1])


def support_profile(A, thetas) -> np.ndarray:
    A = as_matrix(A, square=True)
    return np.linalg.eigvalsh(_rotated(A, np.asarray(thetas, dtype=float)))[:, -1]


def boundary(A, N: int = DEFAULT_SAMPLES) -> list[BoundarySample]:
    """``N`` support values and boundary points at uniform angles."""
    if N < 8:
        raise ValueError("need at least 8 samples")
    A = as_matrix(A, square=True)
    thetas = 2 * np.pi * np.arange(N) / N
    w, V = np.linalg.eigh(_rotated(A, thetas))
    # eigh is ascending; with a repeated top eigenvalue any vector of the
    # eigenspace gives a boundary point, take the one LAPACK returns last
    x = V[:, :, -1]
    pts = np.einsum("ki,ij,kj->k", x.conj(), A, x)
    return [BoundarySample(float(t), float(s), complex(p)) for t, s, p in zip(thetas, w[:, -1], pts)]


def kippenhahn(A, x, y, z) -> complex:
    """``det(x Re(A) + y Im(A) + z I)``; arguments may be complex."""
    A = as_matrix(A, square=True)
    M = x * re_part(A) + y * im_part(A) + z * np.eye(A.shape[0])
    return complex(np.linalg.det(M))


def lemdet_sides(m: int, A, y: float) -> tuple[complex, complex]:
    """Both sides of the factorisation of ``p_{K_m(A)}(1, y, 0)``.

    Right side: ``(-1)^n (1 + y^2)^n det(A^* A) / 4^n * h(y)`` with
    ``h(y) = det[(1-iy)/2 J(x)A + (1+iy)/2 (J(x)A)^* - I (x) AA^*]``, ``J = J_{m-2}(0)``.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    A = as_matrix(A, square=True)
    n = A.shape[0]
    lhs = kippenhahn(kms.kms(m, A), 1.0, y, 0.0)
    JA = np.kron(shift(m - 2), A)
    inner = (1 - 1j * y) / 2 * JA + (1 + 1j * y) / 2 * JA.conj().T - np.kron(np.eye(m - 2), A @ A.conj().T)
    h = np.linalg.det(inner)
    rhs = (-1) ** n * (1 + y * y) ** n * np.linalg.det(A.conj().T @ A) / 4**n * h
    return lhs, complex(rhs)


def lemdet_scale(m: int, A, y: float) -> float:
    """Magnitude scale for determinant errors: ``max(1, ||Re K + y Im K||_2^{mn})``."""
    K = kms.kms(m, A)
    M = re_part(K) + y * im_part(K)
    return max(1.0, float(np.linalg.norm(M, 2)) ** K.shape[0])


def lemdet_residual(m: int, A, ys) -> float:
    """Largest scaled gap between the two sides over the sample points."""
    worst = 0.0
    for y in ys:
        lhs, rhs = lemdet_sides(m, A, float(y))
        worst = max(worst, abs(lhs - rhs) / lemdet_scale(m, A, float(y)))
    return worst


@dataclass(frozen=True)
class CircularDisk:
    radius: float


@dataclass(frozen=True)
class NotCircular:
    max_deviation: float  # relative to the mean support


def circularity_of_matrix(A, N: int = DEFAULT_SAMPLES, tol: float = CIRCULARITY_TOL):
    """Is ``W(A)`` a disk centred at 0, judged by a constant support function."""
    A = as_matrix(A, square=True)
    thetas = 2 * np.pi * np.arange(N) / N
    h = support_profile(A, thetas)
    mean = float(h.mean())
    dev = float(np.max(np.abs(h - mean)))
    if mean == 0.0:
        return CircularDisk(0.0) if dev == 0.0 else NotCircular(np.inf)
    rel = dev / abs(mean)
    if rel <= tol and h.min() >= 0:
        return CircularDisk(mean)
    return NotCircular(rel)


def circularity(spec: kms.KmsSpec, N: int = DEFAULT_SAMPLES, tol: float = CIRCULARITY_TOL):
    return circularity_of_matrix(kms.build(spec), N, tol)
