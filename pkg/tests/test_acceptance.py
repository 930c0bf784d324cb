"""Acceptance run: every criterion at its stated tolerance, seed 42.

Each check prints one ``[PASS]`` / ``[FAIL]`` line; the lines are also
collected and repeated in the pytest terminal summary.  Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""
import sys
import time

import pytest

from sdlab import verify
from sdlab.config import RunConfig

SEED = 42
CONFIG = RunConfig(seed=SEED)
CHECKS = verify.SUITES["all"]
FULL_BUDGET_S = 300.0

LINES: list[str] = []


def _summary(res: verify.CheckResult) -> str:
    shown = {}
    for k, v in res.details.items():
        if isinstance(v, dict) and v and all(isinstance(x, (int, float)) for x in v.values()):
            shown.update({f"{k}.{sub}": x for sub, x in v.items()})
        elif not isinstance(v, (list, dict)) or not v:
            shown[k] = v
    extra = ", ".join(f"{k}={v}" for k, v in sorted(shown.items()))
    return f"{res.line()}  ({res.elapsed:.2f}s{', ' + extra if extra else ''})"


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(check):
    res = check(CONFIG)
    if res.criterion == "1" and res.elapsed > verify.EVEN_BUDGET_S:
        res.passed = False
    line = _summary(res)
    LINES.append(line)
    print(line)
    assert res.passed, res.details


def test_full_suite_budget():
    t0 = time.perf_counter()
    results = verify.run_suite("all", CONFIG)
    elapsed = time.perf_counter() - t0
    line = f"[{'PASS' if elapsed < FULL_BUDGET_S else 'FAIL'}] all  full suite wall clock {elapsed:.1f}s (budget {FULL_BUDGET_S:.0f}s)"
    LINES.append(line)
    print(line)
    assert elapsed < FULL_BUDGET_S
    assert all(r.passed for r in results)


if __name__ == "__main__":
    ok = True
    for check in CHECKS:
        res = check(CONFIG)
        print(_summary(res))
        ok &= res.passed
    sys.exit(0 if ok else 1)
