"""``sdlab`` command line.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 dimension
error, 4 hypothesis violation, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import companion as cp
from . import dilation as dl
from . import kms
from . import matrix_io as mio
from . import numrange as nr
from . import verify
from .config import SEED_ENV, RunConfig, resolve_seed
from .errors import DimensionError, HypothesisViolation, SingularBlockError
from .matrix_io import ParseError

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DIM, EXIT_HYP, EXIT_IO = range(6)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _config(args) -> RunConfig:
    return RunConfig(
        grid_size=args.grid,
        tol=args.tol,
        max_word_degree=args.max_degree,
        boundary_samples=args.samples,
        seed=resolve_seed(args.seed),
    )


def _load(source: str):
    try:
        return mio.read_json(source)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {source}: {exc}") from None


def _load_matrix(source: str) -> np.ndarray:
    obj = _load(source)
    if mio.kind_of(obj) != "matrix":
        raise ParseError(f"{source}: expected a matrix, got a {mio.kind_of(obj)} spec")
    return mio.matrix_from_obj(obj)


def _load_square(source: str) -> np.ndarray:
    M = _load_matrix(source)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{source}: matrix is {M.shape[0]}x{M.shape[1]}, expected square")
    return M


def _load_any(source: str):
    """Return (matrix, kms spec or None, companion spec or None)."""
    obj = _load(source)
    kind = mio.kind_of(obj)
    if kind == "kms":
        spec = mio.kms_spec_from_obj(obj)
        return kms.build(spec), spec, None
    if kind == "companion":
        spec = mio.companion_spec_from_obj(obj)
        return cp.build(spec), None, spec
    M = mio.matrix_from_obj(obj)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{source}: matrix is {M.shape[0]}x{M.shape[1]}, expected square")
    return M, None, None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_zdi(args) -> int:
    cfg = _config(args)
    M, _, _ = _load_any(args.matrix)
    res = dl.zdi(M, cfg.grid_size, cfg.tol)
    counts = np.array([c for _, c in res.profile])
    print(f"d = {res.index}")
    print(f"argmin theta = {res.argmin_theta:.12g}")
    print(f"profile: {len(counts)} samples (grid {res.grid_size}), i>=0 range [{counts.min()}, {counts.max()}]"
          f"{', minimum found by refinement' if res.refined else ''}")
    return EXIT_OK


def _companion_from_args(args, rng) -> cp.GeneralizedCompanionSpec:
    if args.spec:
        obj = _load(args.spec)
        if mio.kind_of(obj) != "companion":
            raise ParseError("expected a companion spec")
        return mio.companion_spec_from_obj(obj)
    if args.m is None or args.n is None:
        raise CliError(EXIT_PARSE, "give --spec FILE or --m and --n for a random spec")
    return cp.random_spec(args.m, args.n, rng)


def cmd_companion(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    if args.action == "interp":
        if None in (args.m, args.n, args.k):
            raise CliError(EXIT_PARSE, "interp needs --m, --n and --k")
        spec = cp.build_interp_example(args.m, args.n, args.k)
        want = cp.interp_expected(args.m, args.n, args.k)
        got = cp.oracle_index(spec, cfg.grid_size, cfg.tol)
        if args.out:
            _write(args.out, json.dumps(mio.companion_spec_to_obj(spec)) + "\n")
        print(f"expected {want}, oracle {got}")
        return EXIT_OK if got == want else EXIT_FAIL

    spec = _companion_from_args(args, rng)
    if args.action == "build":
        _write(args.out, mio.dumps_matrix(cp.build(spec)))
        return EXIT_OK
    if args.action == "det":
        thetas = args.theta or [0.0]
        for t in thetas:
            w = complex(np.exp(1j * t))
            closed, direct = cp.det_re_closed_form(spec, w), cp.det_re_direct(spec, w)
            print(f"theta={t:.6g}: closed form {closed:.12g}, direct {direct:.12g}")
        return EXIT_OK
    # bounds
    b = cp.zdi_bounds(spec)
    got = cp.oracle_index(spec, cfg.grid_size, cfg.tol)
    if b.exact is not None:
        agree = got == b.exact
        print(f"exact d = {b.exact}, oracle {'agrees' if agree else f'disagrees ({got})'}")
    else:
        agree = b.lower <= got <= b.upper
        print(f"bounds [{b.lower}, {b.upper}], oracle {got} {'within' if agree else 'OUTSIDE'}")
    return EXIT_OK if agree else EXIT_FAIL


def _warn(flag: bool, what: str) -> None:
    if flag:
        print(f"warning: rank decisions near the tolerance in {what}; result may be unstable", file=sys.stderr)


def cmd_kms(args) -> int:
    cfg = _config(args)
    A = _load_square(args.a)
    rank_tol = cfg.tol or kms.RANK_TOL
    if args.action == "build":
        _write(args.out, mio.dumps_matrix(kms.kms(args.m, A)))
        return EXIT_OK
    if args.action == "nk":
        f = kms.nk_formula(args.m, A, rank_tol)
        _warn(f.unstable, "N_k")
        print(f"N = {list(f.counts)}")
        return EXIT_OK
    if args.action == "zdi":
        d = kms.zdi_kms2(A) if args.m == 2 else kms.zdi_kms(args.m, A, cfg.tol)
        oracle = dl.zdi(kms.kms(args.m, A), cfg.grid_size, cfg.tol).index
        print(f"d = {d}, oracle {'agrees' if oracle == d else f'disagrees ({oracle})'}")
        return EXIT_OK if oracle == d else EXIT_FAIL
    if args.b is None:
        raise CliError(EXIT_PARSE, f"kms {args.action} needs --b")
    B = _load_square(args.b)
    if A.shape != B.shape:
        raise DimensionError("A and B must have the same size")
    if args.action == "similar":
        fa, fb = kms.nk_formula(args.m, A, rank_tol), kms.nk_formula(args.m, B, rank_tol)
        _warn(fa.unstable or fb.unstable, "N_k")
        if fa.counts == fb.counts:
            print("similar")
        else:
            k = max(k for k in range(1, args.m + 1) if fa[k] != fb[k])
            print(f"not similar (N_{k}: {fa[k]} vs {fb[k]})")
        return EXIT_OK
    # usim
    v = kms.kms_unitarily_similar_upto(args.m, A, B, cfg.max_word_degree)
    if isinstance(v, kms.Distinguished):
        print(f"distinguished by word {v.word} (traces {v.trace_a:.12g} vs {v.trace_b:.12g})")
    else:
        print(f"indistinguishable up to degree {v.max_degree} (not a proof of unitary similarity)")
    return EXIT_OK


def cmd_numrange(args) -> int:
    cfg = _config(args)
    M, kspec, _ = _load_any(args.matrix)
    samples = nr.boundary(M, cfg.boundary_samples)
    if args.out:
        _write(args.out + ".csv", mio.boundary_csv(samples))
        _write(args.out + ".svg", mio.boundary_svg(samples))
        print(f"wrote {args.out}.csv and {args.out}.svg")
    else:
        sys.stdout.write(mio.boundary_csv(samples))
    if kspec is not None:
        v = nr.circularity(kspec, cfg.boundary_samples)
        if isinstance(v, nr.CircularDisk):
            print(f"verdict: CircularDisk(radius={v.radius:.12g})")
        else:
            print(f"verdict: NotCircular(max_deviation={v.max_deviation:.6g})")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    extra = []
    for path in args.extra_spec or []:
        extra.append((Path(path).name, mio.companion_spec_from_obj(_load(path))))
    results = verify.run_suite(args.suite, cfg, extra)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    if args.out:
        _write(args.out, verify.report_json(args.suite, cfg, results))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=dl.DEFAULT_GRID, help="angle grid size")
    common.add_argument("--tol", type=float, default=None, help="inertia / rank tolerance")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (fallback ${SEED_ENV})")
    common.add_argument("--max-degree", type=int, default=kms.SPECHT_MAX_DEGREE, help="word degree cap")
    common.add_argument("--samples", type=int, default=nr.DEFAULT_SAMPLES, help="boundary samples")
    common.add_argument("--out", default=None, help="output path (prefix for numrange)")

    p = argparse.ArgumentParser(prog="sdlab", description="Zero-dilation indices and numerical ranges.")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zdi", parents=[common], help="zero-dilation index of a matrix or spec file")
    z.add_argument("matrix")
    z.set_defaults(func=cmd_zdi)

    c = sub.add_parser("companion", parents=[common], help="generalized companion matrices")
    c.add_argument("action", choices=["build", "det", "bounds", "interp"])
    c.add_argument("--spec", help="companion spec JSON")
    c.add_argument("--m", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--theta", type=float, action="append", help="angle for det (repeatable)")
    c.set_defaults(func=cmd_companion)

    k = sub.add_parser("kms", parents=[common], help="block KMS matrices")
    k.add_argument("action", choices=["build", "zdi", "similar", "usim", "nk"])
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--a", required=True, help="matrix file or inline JSON")
    k.add_argument("--b", help="second matrix for similar / usim")
    k.set_defaults(func=cmd_kms)

    n = sub.add_parser("numrange", parents=[common], help="boundary of W(A) as CSV and SVG")
    n.add_argument("matrix")
    n.set_defaults(func=cmd_numrange)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=sorted(verify.SUITES))
    v.add_argument("--extra-spec", action="append", help="additional companion spec to check")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingularBlockError, HypothesisViolation) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYP
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
