"""Zero-dilation index and rank-k numerical range membership of 0.

The index is ``min_theta i_{>=0}(Re(e^{i theta} A))``.  The count is an
integer-valued, piecewise constant, upper semicontinuous function of the
angle with finitely many breakpoints (``det Re(e^{i theta} A)`` is a
trigonometric polynomial of degree ``dim A``), so the minimum is attained
on a union of open arcs.  :func:`zdi` samples a uniform grid and then
bisects every grid cell where the inertia signature changes, which catches
arcs narrower than the grid spacing that sit next to a breakpoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import EPS, as_matrix, eigvalsh_batch, inertia, nullity, re_part, im_part

DEFAULT_GRID = 4096
BISECTION_STEPS = 40


@dataclass(frozen=True)
class ZdiResult:
    index: int
    argmin_theta: float
    profile: list[tuple[float, int]] = field(repr=False)
    grid_size: int = DEFAULT_GRID
    refined: bool = False  # True when the minimum was only seen off-grid


def default_tol(A: np.ndarray) -> float:
    # ||Re(e^{i theta} A)||_F <= ||A||_F for every theta
    return 64 * EPS * A.shape[0] * float(np.linalg.norm(A))


def rotated_re(A, theta):
    """``Re(e^{i theta} A)`` for a scalar angle or a 1-D array of angles."""
    R, I = re_part(A), im_part(A)
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 0:
        return np.cos(theta) * R - np.sin(theta) * I
    return np.cos(theta)[:, None, None] * R - np.sin(theta)[:, None, None] * I


def _signatures(A: np.ndarray, thetas: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    w = eigvalsh_batch(rotated_re(A, thetas))
    if tol > 0:
        pos = np.count_nonzero(w >= tol, axis=1)
        neg = np.count_nonzero(w <= -tol, axis=1)
    else:
        pos = np.count_nonzero(w > 0, axis=1)
        neg = np.count_nonzero(w < 0, axis=1)
    return pos, neg


def igeq_at(A, theta: float, tol: float | None = None) -> int:
    """``i_{>=0}(Re(e^{i theta} A))``."""
    A = as_matrix(A, square=True)
    if tol is None:
        tol = default_tol(A)
    return inertia(rotated_re(A, theta), tol).geq0


def igeq_profile(A, thetas, tol: float | None = None) -> np.ndarray:
    """Vectorised :func:`igeq_at` over an array of angles."""
    A = as_matrix(A, square=True)
    if tol is None:
        tol = default_tol(A)
    _, neg = _signatures(A, np.asarray(thetas, dtype=float), tol)
    return A.shape[0] - neg


def _refine(A, thetas, pos, neg, tol, steps):
    """Bisect every cell whose (i_+, i_-) signature changes.

    Each changing cell is bisected twice: once homing in on the first
    breakpoint after its left end and once on the last breakpoint before
    its right end.  Every midpoint evaluated is returned.
    """
    g = thetas.size
    right = (np.arange(g) + 1) % g
    change = np.flatnonzero((pos != pos[right]) | (neg != neg[right]))
    if change.size == 0:
        return np.empty(0), np.empty(0, dtype=int)
    width = 2 * np.pi / g
    lo_t = thetas[change]
    # (anchor, far end, anchor signature); anchor is the end we keep moving towards
    anchors = np.concatenate([lo_t, lo_t + width])
    others = np.concatenate([lo_t + width, lo_t])
    sig_pos = np.concatenate([pos[change], pos[right[change]]])
    sig_neg = np.concatenate([neg[change], neg[right[change]]])
    seen_t, seen_c = [], []
    dim = A.shape[0]
    for _ in range(steps):
        mid = (anchors + others) / 2
        p, q = _signatures(A, mid, tol)
        seen_t.append(mid)
        seen_c.append(dim - q)
        same = (p == sig_pos) & (q == sig_neg)
        anchors = np.where(same, mid, anchors)
        others = np.where(same, others, mid)
    return np.mod(np.concatenate(seen_t), 2 * np.pi), np.concatenate(seen_c)


def zdi(A, grid_size: int = DEFAULT_GRID, tol: float | None = None, refine: bool = True) -> ZdiResult:
    """Zero-dilation index by grid minimisation with bisection refinement."""
    A = as_matrix(A, square=True)
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    if tol is None:
        tol = default_tol(A)
    dim = A.shape[0]
    thetas = 2 * np.pi * np.arange(grid_size) / grid_size
    pos, neg = _signatures(A, thetas, tol)
    counts = dim - neg
    grid_min = int(counts.min())

    all_t, all_c = thetas, counts
    if refine and grid_min > 0:
        rt, rc = _refine(A, thetas, pos, neg, tol, BISECTION_STEPS)
        if rt.size:
            all_t = np.concatenate([thetas, rt])
            all_c = np.concatenate([counts, rc])
    order = np.lexsort((all_c, all_t))
    all_t, all_c = all_t[order], all_c[order]
    index = int(all_c.min())
    at_min = np.flatnonzero(all_c == index)
    argmin = float(all_t[at_min[0]])
    profile = [(float(t), int(c)) for t, c in zip(all_t, all_c)]
    return ZdiResult(index, argmin, profile, grid_size, refined=index < grid_min)


def lambda_k_contains_zero(A, k: int, grid_size: int = DEFAULT_GRID, tol: float | None = None) -> bool:
    """Whether ``0`` lies in the rank-k numerical range of ``A``."""
    A = as_matrix(A, square=True)
    if not 1 <= k <= A.shape[0]:
        raise ValueError("k must lie in 1..dim(A)")
    return zdi(A, grid_size, tol).index >= k


def approach_bound(A, omega: complex, tol: float = 1e-8) -> float:
    """Upper bound ``(m + r) / 2`` on the index, ``r = nullity(Re(omega A))``."""
    A = as_matrix(A, square=True)
    if abs(abs(omega) - 1) > 1e-12:
        raise ValueError("omega must lie on the unit circle")
    r = nullity(re_part(omega * A), tol)
    return (A.shape[0] + r) / 2


def isolated_dips(profile: list[tuple[float, int]]) -> list[int]:
    """Indices of samples strictly below both cyclic neighbours.

    A genuine minimum region is an open arc, so on an adequate grid it
    spans more than one sample; a single-sample dip means the grid is too
    coarse there.
    """
    c = np.array([p[1] for p in profile])
    left, right = np.roll(c, 1), np.roll(c, -1)
    return [int(i) for i in np.flatnonzero((c < left) & (c < right))]
