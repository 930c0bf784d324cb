"""Randomised verification suites.

Each ``check_*`` function draws its own corpus from
``default_rng([seed, criterion])`` and returns a :class:`CheckResult` whose
``details`` are JSON-serialisable and depend only on the seed, so reports
are byte-identical across runs.  Wall-clock time is tracked separately in
``elapsed`` and never written to the report.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import companion as cp
from . import dilation as dl
from . import kms
from . import numrange as nr
from .config import RunConfig
from .errors import SdlabError
from .linalg import (
    direct_sum,
    jordan_block,
    random_complex,
    random_unitary,
    random_well_conditioned,
)

EVEN_BUDGET_S = 60.0


@dataclass
class CheckResult:
    criterion: str
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def __post_init__(self):
        # comparisons on numpy scalars yield numpy.bool_, which json rejects
        self.passed = bool(self.passed)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>3} {self.name}"


def _rng(config: RunConfig, criterion: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, criterion])


def _timed(fn):
    def wrapper(config: RunConfig, *args, **kwargs) -> CheckResult:
        t0 = time.perf_counter()
        res = fn(config, *args, **kwargs)
        res.elapsed = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _unit(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def _fmt(x: float) -> float:
    # round residuals so tiny platform noise cannot alter the report text
    return float(f"{x:.3e}")


# ---------------------------------------------------------------------------
# companion
# ---------------------------------------------------------------------------

@_timed
def check_even_exact(config: RunConfig) -> CheckResult:
    """Oracle index equals mn/2 for even m."""
    rng = _rng(config, 1)
    failures = []
    for case in range(30):
        m, n = int(rng.choice([2, 4, 6])), int(rng.choice([1, 2, 3]))
        spec = cp.random_spec(m, n, rng)
        got = cp.oracle_index(spec, config.grid_size, config.tol)
        if got != m * n // 2:
            failures.append({"case": case, "m": m, "n": n, "oracle": got})
    return CheckResult("1", "even-m index equals mn/2", not failures, {"cases": 30, "failures": failures})


@_timed
def check_odd_bounds(config: RunConfig) -> CheckResult:
    """(m-1)n/2 <= oracle <= (m+1)n/2 for odd m, plus the nullity-based upper bound."""
    rng = _rng(config, 2)
    failures = []
    seen = set()
    for case in range(30):
        m, n = int(rng.choice([3, 5])), int(rng.choice([1, 2, 3]))
        spec = cp.random_spec(m, n, rng)
        b = cp.zdi_bounds(spec)
        got = cp.oracle_index(spec, config.grid_size, config.tol)
        C = cp.build(spec)
        approach = min(dl.approach_bound(C, _unit(rng)) for _ in range(4))
        seen.add(got - b.lower)
        if not (b.lower <= got <= b.upper) or got > approach:
            failures.append({"case": case, "m": m, "n": n, "oracle": got, "bounds": [b.lower, b.upper]})
    return CheckResult(
        "2", "odd-m index within bounds", not failures,
        {"cases": 30, "failures": failures, "offsets_seen": sorted(seen)},
    )


@_timed
def check_interp(config: RunConfig) -> CheckResult:
    """Every value (m-1)n/2 + k is attained by the interpolation family."""
    failures = []
    count = 0
    for m in (3, 5):
        for n in (1, 2, 3):
            for k in range(n + 1):
                count += 1
                got = cp.oracle_index(cp.build_interp_example(m, n, k), config.grid_size, config.tol)
                if got != cp.interp_expected(m, n, k):
                    failures.append({"m": m, "n": n, "k": k, "oracle": got})
    return CheckResult("3", "interpolation example attains every value", not failures, {"cases": count, "failures": failures})


def _even_corpus(config: RunConfig, criterion: int):
    """50 even-m specs with 16 angles each and one planted unit-circle root."""
    rng = _rng(config, criterion)
    corpus = []
    for _ in range(50):
        m, n = int(rng.choice([2, 4, 6])), int(rng.choice([1, 2, 3]))
        spec = cp.random_spec(m, n, rng)
        omegas = [_unit(rng) for _ in range(16)]
        root = _unit(rng)
        planted = cp.plant_unit_root(spec, root, rng)
        corpus.append((spec, omegas, planted, root))
    return corpus


@_timed
def check_det_identity(config: RunConfig) -> CheckResult:
    """Closed-form determinant vs direct determinant; vanishing at planted roots."""
    worst_rel = 0.0
    worst_planted = 0.0
    worst_root_dist = 0.0
    failures = []
    for case, (spec, omegas, planted, root) in enumerate(_even_corpus(config, 4)):
        for w in omegas:
            closed, direct = cp.det_re_closed_form(spec, w), cp.det_re_direct(spec, w)
            rel = abs(closed - direct) / max(abs(direct), 1e-300)
            worst_rel = max(worst_rel, rel)
            if rel > 1e-9:
                failures.append({"case": case, "relerr": _fmt(rel)})
        H = (root * cp.build(planted) + (root * cp.build(planted)).conj().T) / 2
        scale = np.linalg.norm(H, 2) ** H.shape[0]
        direct = abs(cp.det_re_direct(planted, root)) / scale
        closed = abs(cp.det_re_closed_form(planted, root)) / scale
        dist = cp.distance_to_sigma_P(planted, root)
        worst_planted = max(worst_planted, direct, closed)
        worst_root_dist = max(worst_root_dist, dist)
        if direct > 1e-6 or closed > 1e-6 or dist > 1e-6:
            failures.append({"case": case, "planted_det": _fmt(direct), "root_distance": _fmt(dist)})
    return CheckResult(
        "4", "determinant closed form", not failures,
        {
            "specs": 50,
            "angles_per_spec": 16,
            "max_relerr": _fmt(worst_rel),
            "max_planted_scaled_det": _fmt(worst_planted),
            "max_planted_root_distance": _fmt(worst_root_dist),
            "failures": failures[:10],
        },
    )


@_timed
def check_nullity_bounds(config: RunConfig) -> CheckResult:
    """nullity(Re(omega C)) within n (odd m), 2n (even m), n off sigma(P)."""
    failures = []
    checked = 0
    corpus = [(s, ws + [root]) for s, ws, _, root in _even_corpus(config, 4)]
    corpus += [(p, [root]) for _, _, p, root in _even_corpus(config, 4)]
    rng = _rng(config, 5)
    for _ in range(20):
        m, n = int(rng.choice([3, 5])), int(rng.choice([1, 2, 3]))
        corpus.append((cp.random_spec(m, n, rng), [_unit(rng) for _ in range(16)]))
    planted_nullities = []
    for case, (spec, omegas) in enumerate(corpus):
        spectrum = cp.sigma_P(spec) if spec.m % 2 == 0 else None
        for w in omegas:
            checked += 1
            r = cp.nullity_re(spec, w)
            bound = cp.nullity_bound(spec, w, spectrum)
            if bound is None or r > bound:
                failures.append({"case": case, "m": spec.m, "n": spec.n, "nullity": r, "bound": bound})
        if 50 <= case < 100:
            planted_nullities.append(cp.nullity_re(spec, omegas[-1]))
    if any(r < 1 for r in planted_nullities):
        failures.append({"planted_nullity_zero": True})
    return CheckResult(
        "5", "nullity bounds", not failures,
        {"evaluations": checked, "failures": failures[:10], "planted_min_nullity": min(planted_nullities)},
    )


def check_extra_spec(config: RunConfig, spec: cp.GeneralizedCompanionSpec, label: str) -> CheckResult:
    """Bounds and oracle for a user-supplied spec; rejection counts as failure."""
    t0 = time.perf_counter()
    try:
        b = cp.zdi_bounds(spec)
    except SdlabError as exc:
        return CheckResult("x", f"extra spec {label}", False, {"rejected": str(exc)}, time.perf_counter() - t0)
    got = cp.oracle_index(spec, config.grid_size, config.tol)
    ok = b.lower <= got <= b.upper
    return CheckResult(
        "x", f"extra spec {label}", ok,
        {"oracle": got, "bounds": [b.lower, b.upper]}, time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# kms
# ---------------------------------------------------------------------------

def _rank_deficient(n: int, rng) -> np.ndarray:
    r = int(rng.integers(0, n))
    if r == 0:
        return np.zeros((n, n), dtype=complex)
    return random_complex((n, r), rng) @ random_complex((r, n), rng)


@_timed
def check_kms_zdi(config: RunConfig) -> CheckResult:
    """Grid oracle equals the KMS index formulas."""
    rng = _rng(config, 6)
    failures = []
    kinds = {"m2_singular": 0, "m2_nonsingular": 0, "m3plus": 0}
    for case in range(40):
        m, n = int(rng.choice([2, 3, 4, 5])), int(rng.choice([1, 2, 3]))
        if m == 2 and case % 2 == 0:
            A = _rank_deficient(n, rng)
            kinds["m2_singular"] += 1
        else:
            A = random_complex((n, n), rng)
            kinds["m2_nonsingular" if m == 2 else "m3plus"] += 1
        try:
            formula = kms.zdi_kms2(A) if m == 2 else kms.zdi_kms(m, A, check_reduction=True)
        except SdlabError as exc:
            failures.append({"case": case, "error": str(exc)})
            continue
        oracle = dl.zdi(kms.kms(m, A), config.grid_size, config.tol).index
        if oracle != formula:
            failures.append({"case": case, "m": m, "n": n, "formula": formula, "oracle": oracle})
    return CheckResult("6", "KMS index formula vs oracle", not failures, {"cases": 40, "kinds": kinds, "failures": failures})


def _moduli_away_from_thresholds(m: int, n: int, rng, margin: float = 1e-3) -> np.ndarray:
    cuts = np.cos(np.arange(m) * np.pi / (m - 1))
    out = []
    while len(out) < n:
        r = rng.uniform(0.15, 1.3)
        if np.min(np.abs(cuts - r)) > margin:
            out.append(r)
    return np.array(out)


@_timed
def check_normal(config: RunConfig) -> CheckResult:
    """Closed form for normal A agrees with the direct formula and the oracle."""
    rng = _rng(config, 7)
    failures = []
    hand = [(5, [1.0], 1), (5, [0.5], 2), (5, [1.0, 0.5], 3)]
    for m, lam, want in hand:
        A = np.diag(lam).astype(complex)
        vals = (kms.zdi_kms_normal(m, lam), kms.zdi_kms(m, A), dl.zdi(kms.kms(m, A), config.grid_size).index)
        if any(v != want for v in vals):
            failures.append({"hand": [m, lam], "values": list(vals), "want": want})
    for case in range(20):
        m, n = int(rng.choice([3, 4, 5])), int(rng.choice([1, 2, 3]))
        mods = _moduli_away_from_thresholds(m, n, rng)
        A = kms.random_normal(n, rng, mods)
        closed = kms.zdi_kms_normal(m, np.linalg.eigvals(A))
        direct = kms.zdi_kms(m, A)
        oracle = dl.zdi(kms.kms(m, A), config.grid_size, config.tol).index
        if not closed == direct == oracle:
            failures.append({"case": case, "m": m, "closed": closed, "direct": direct, "oracle": oracle})
    return CheckResult("7", "normal closed form", not failures, {"cases": 20 + len(hand), "failures": failures})


def _structured(n_max: int, rng) -> np.ndarray:
    """Direct sum of nilpotent Jordan blocks and a nonsingular diagonal, unitarily conjugated."""
    parts = []
    size = 0
    target = int(rng.integers(1, n_max + 1))
    while size < target:
        if rng.uniform() < 0.6:
            k = int(rng.integers(1, min(4, target - size) + 1))
            parts.append(jordan_block(k, 0.0))
            size += k
        else:
            parts.append(np.array([[rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())]]))
            size += 1
    A = direct_sum(*parts)
    U = random_unitary(A.shape[0], rng)
    return U @ A @ U.conj().T


@_timed
def check_nk(config: RunConfig) -> CheckResult:
    """N_k formula vs Weyr oracle on J_m(0) (x) A."""
    rng = _rng(config, 8)
    failures = []
    for case in range(60):
        m = int(rng.integers(2, 7))
        A = _structured(4, rng)
        f, o = kms.nk_formula(m, A), kms.nk_oracle(m, A)
        if f.counts != o.counts or f.total_dim() != m * A.shape[0] or f.unstable or o.unstable:
            failures.append({"case": case, "m": m, "formula": list(f.counts), "oracle": list(o.counts)})
    A = direct_sum(jordan_block(3, 0.0), np.zeros((1, 1)))
    j3 = {}
    for m in (4, 5, 6):
        f = kms.nk_formula(m, A)
        j3[m] = [f[1], f[2], f[3]]
        if j3[m] != [m + 2, 2, m - 2] or kms.nk_oracle(m, A).counts != f.counts:
            failures.append({"J3_0_m": m, "got": j3[m]})
    small = {2: list(kms.nk_formula(2, A).counts), 3: list(kms.nk_formula(3, A).counts)}
    if small[2] != [4, 2] or small[3] != [5, 2, 1]:
        failures.append({"J3_0_small_m": small})
    return CheckResult(
        "8", "N_k block counts", not failures,
        {"cases": 60, "J3_0_plus_zero": {str(k): v for k, v in j3.items()}, "failures": failures},
    )


@_timed
def check_similarity(config: RunConfig) -> CheckResult:
    """K_2 rank / singular value deciders, the m=3 negative example, word traces."""
    rng = _rng(config, 9)
    failures = []
    worst_transform = 0.0
    for case in range(30):
        n = int(rng.integers(2, 5))
        kind = ("similar", "unitary", "rank_differs", "sv_differs")[case % 4]
        A = _rank_deficient(n, rng) if rng.uniform() < 0.5 else random_complex((n, n), rng)
        r = np.linalg.matrix_rank(A)
        if kind == "similar":
            P, Q = random_well_conditioned(n, rng), random_well_conditioned(n, rng)
            B = P @ A @ Q
            T = direct_sum(P, np.linalg.inv(Q))
            res = np.linalg.norm(T @ kms.kms(2, A) @ np.linalg.inv(T) - kms.kms(2, B)) / (1 + np.linalg.norm(B))
            worst_transform = max(worst_transform, res)
            want = (True, None)
        elif kind == "unitary":
            U, V = random_unitary(n, rng), random_unitary(n, rng)
            B = U @ A @ V
            T = direct_sum(U, V.conj().T)
            res = np.linalg.norm(T @ kms.kms(2, A) @ T.conj().T - kms.kms(2, B)) / (1 + np.linalg.norm(B))
            worst_transform = max(worst_transform, res)
            want = (True, True)
        elif kind == "rank_differs":
            B = _rank_deficient(n, rng)
            while np.linalg.matrix_rank(B) == r:
                B = _rank_deficient(n, rng) if rng.uniform() < 0.7 else random_complex((n, n), rng)
            want = (False, False)
        else:
            U, V = random_unitary(n, rng), random_unitary(n, rng)
            B = 1.7 * U @ A @ V
            if r == 0:
                B = random_complex((n, n), rng)
                want = (False, False)
            else:
                want = (True, False)
        got = (kms.k2_similar(A, B), kms.k2_unitarily_similar(A, B))
        if got[0] != want[0] or (want[1] is not None and got[1] != want[1]):
            failures.append({"case": case, "kind": kind, "got": list(got)})
        if got[1] and not isinstance(kms.kms_unitarily_similar_upto(2, A, B, 8), kms.IndistinguishableUpTo):
            failures.append({"case": case, "kind": kind, "specht": "distinguished a unitary pair"})
    if worst_transform > 1e-10:
        failures.append({"transform_residual": _fmt(worst_transform)})

    # J_2(0) vs diag(1, 0): same singular values, different KMS similarity class for m >= 3
    J2, D = jordan_block(2, 0.0), np.diag([1.0, 0.0]).astype(complex)
    nA, nB = kms.nk_formula(3, J2), kms.nk_formula(3, D)
    example = {
        "k2_similar": kms.k2_similar(J2, D),
        "k2_unitarily_similar": kms.k2_unitarily_similar(J2, D),
        "kms3_similar": kms.kms_similar(3, J2, D),
        "N3": [nA[3], nB[3]],
    }
    if example != {"k2_similar": True, "k2_unitarily_similar": True, "kms3_similar": False, "N3": [0, 1]}:
        failures.append({"jordan_vs_diag": example})

    specht = []
    for m in (2, 3, 4, 5):
        a = complex(rng.uniform(0.3, 2.0) * np.exp(2j * np.pi * rng.uniform()))
        b_same = abs(a) * np.exp(2j * np.pi * rng.uniform())
        b_diff = (abs(a) + rng.uniform(0.2, 1.0)) * np.exp(2j * np.pi * rng.uniform())
        v_diff = kms.kms_unitarily_similar_upto(m, [[a]], [[b_diff]], config.max_word_degree)
        v_same = kms.kms_unitarily_similar_upto(m, [[a]], [[b_same]], config.max_word_degree)
        ok = (
            isinstance(v_diff, kms.Distinguished) and v_diff.word.exps == (1, 1)
            and isinstance(v_same, kms.IndistinguishableUpTo)
        )
        specht.append(ok)
        if not ok:
            failures.append({"specht_m": m, "diff": str(v_diff), "same": str(v_same)})
    v = kms.kms_unitarily_similar_upto(3, [[1.0]], [[2.0]], config.max_word_degree)
    if not (isinstance(v, kms.Distinguished) and str(v.word) == "st"):
        failures.append({"specht_scalars_1_2": str(v)})
    return CheckResult(
        "9", "similarity deciders", not failures,
        {"pairs": 30, "max_transform_residual": _fmt(worst_transform), "jordan_vs_diag": example, "failures": failures},
    )


@_timed
def check_resolvent(config: RunConfig) -> CheckResult:
    rng = _rng(config, 101)
    worst = 0.0
    for _ in range(30):
        spec = kms.KmsSpec(int(rng.integers(2, 7)), random_complex((int(rng.integers(1, 4)),) * 2, rng))
        worst = max(worst, kms.resolvent_residual(spec) / kms.resolvent_scale(spec))
    return CheckResult("10a", "resolvent identity", worst <= 1e-8, {"cases": 30, "max_scaled_residual": _fmt(worst)})


@_timed
def check_congruence(config: RunConfig) -> CheckResult:
    """Generic alpha, beta; alpha = conj(beta) on the circle; beta = 1/alpha."""
    rng = _rng(config, 102)
    worst = {"generic": 0.0, "unitary": 0.0, "inverse": 0.0}
    for case in range(30):
        m, n = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        A = random_complex((n, n), rng)
        branch = ("generic", "unitary", "inverse")[case % 3]
        if branch == "generic":
            alpha, beta = complex(random_complex((), rng)), complex(random_complex((), rng))
            res = kms.congruence_check(m, A, alpha, beta)
        elif branch == "unitary":
            alpha = _unit(rng)
            beta = alpha.conjugate()
            res = max(kms.congruence_check(m, A, alpha, beta), kms.congruence_check(m, A, alpha, beta, similarity=True))
        else:
            alpha = complex(random_complex((), rng))
            beta = 1 / alpha
            res = max(kms.congruence_check(m, A, alpha, beta), kms.congruence_check(m, A, alpha, beta, similarity=True))
        # T = diag(alpha^k) can amplify by |alpha|^{m-1}
        scale = kms.congruence_scale(m, A, alpha, beta) * max(abs(alpha), 1 / abs(alpha)) ** (m - 1)
        worst[branch] = max(worst[branch], res / scale)
    ok = max(worst.values()) <= 1e-8
    return CheckResult("10b", "congruence identity", ok, {"cases": 30, "max_scaled_residual": {k: _fmt(v) for k, v in worst.items()}})


@_timed
def check_lemdet(config: RunConfig) -> CheckResult:
    rng = _rng(config, 103)
    worst = 0.0
    for _ in range(30):
        m, n = int(rng.integers(3, 6)), int(rng.integers(1, 3))
        A = random_complex((n, n), rng)
        worst = max(worst, nr.lemdet_residual(m, A, rng.uniform(-3, 3, 5)))
    return CheckResult("10c", "Kippenhahn determinant factorisation", worst <= 1e-8, {"cases": 30, "max_scaled_residual": _fmt(worst)})


@_timed
def check_monotonicity(config: RunConfig) -> CheckResult:
    rng = _rng(config, 11)
    failures = []
    for case in range(20):
        m = int(rng.integers(2, 6))
        k, n = int(rng.integers(1, m + 1)), int(rng.integers(1, 4))
        A = random_complex((n, n), rng)
        up = [c for _, c in kms.monotonicity_profile(k, m, A, np.linspace(0, np.pi, 64))]
        down = [c for _, c in kms.monotonicity_profile(k, m, A, np.linspace(np.pi, 2 * np.pi, 64))]
        if np.any(np.diff(up) < 0) or np.any(np.diff(down) > 0):
            failures.append({"case": case, "k": k, "m": m, "up": up, "down": down})
    return CheckResult("11", "monotonicity of X_k profiles", not failures, {"cases": 20, "failures": failures})


# ---------------------------------------------------------------------------
# numrange
# ---------------------------------------------------------------------------

@_timed
def check_circularity(config: RunConfig) -> CheckResult:
    rng = _rng(config, 12)
    N = config.boundary_samples
    failures = []
    min_dev = np.inf
    for case in range(10):
        n = int(rng.integers(1, 4))
        c = rng.uniform(0.3, 3.0)
        A = c * random_unitary(n, rng)
        v = nr.circularity(kms.KmsSpec(2, A), N)
        if not (isinstance(v, nr.CircularDisk) and abs(v.radius - c / 2) <= 1e-9 * c):
            failures.append({"case": case, "m": 2, "verdict": str(v)})
    for case in range(10):
        m, n = int(rng.choice([3, 4])), int(rng.integers(1, 4))
        v = nr.circularity(kms.KmsSpec(m, random_well_conditioned(n, rng)), N)
        if isinstance(v, nr.NotCircular):
            min_dev = min(min_dev, v.max_deviation)
        if not (isinstance(v, nr.NotCircular) and v.max_deviation > 1e-3):
            failures.append({"case": case, "m": m, "verdict": str(v)})
    v_j2 = nr.circularity(kms.KmsSpec(3, jordan_block(2, 0.0)), N)
    v_d = nr.circularity(kms.KmsSpec(3, np.diag([1.0, 0.0])), N)
    if not isinstance(v_j2, nr.CircularDisk):
        failures.append({"K3(J2)": str(v_j2)})
    if not (isinstance(v_d, nr.NotCircular) and v_d.max_deviation > 1e-3):
        failures.append({"K3(diag(1,0))": str(v_d)})
    return CheckResult(
        "12", "circularity of W(K_m(A))", not failures,
        {"min_noncircular_deviation": _fmt(min_dev), "failures": failures},
    )


SUITES = {
    "companion": [check_even_exact, check_odd_bounds, check_interp, check_det_identity, check_nullity_bounds],
    "kms": [check_kms_zdi, check_normal, check_nk, check_similarity, check_resolvent, check_congruence, check_monotonicity],
    "numrange": [check_lemdet, check_circularity],
}
SUITES["all"] = SUITES["companion"] + SUITES["kms"] + SUITES["numrange"]


def run_suite(name: str, config: RunConfig, extra_specs=()) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = [check(config) for check in SUITES[name]]
    if name in ("companion", "all"):
        results += [check_extra_spec(config, spec, label) for label, spec in extra_specs]
    even = next((r for r in results if r.criterion == "1"), None)
    if even is not None and even.elapsed > EVEN_BUDGET_S:
        even.passed = False
        even.details["over_budget"] = True
    return results


def report_json(name: str, config: RunConfig, results: list[CheckResult]) -> str:
    doc = {
        "suite": name,
        "seed": config.seed,
        "grid_size": config.grid_size,
        "passed": all(r.passed for r in results),
        "checks": [
            {"criterion": r.criterion, "name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
