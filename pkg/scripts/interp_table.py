"""Table of oracle indices for the interpolating companion family.

For odd m the index of C_{A,B} with A_j = I and B = [0, ..., 0, H/2],
H = 0_k (+) -I_{n-k}, should sweep every integer between the two bounds
as k runs over 0..n.

    python scripts/interp_table.py --m 3 5 7 --n 1 2 3
"""
import argparse

from sdlab import companion as cp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--grid", type=int, default=4096)
    args = ap.parse_args()

    print(f"{'m':>3} {'n':>3} {'k':>3} {'lower':>6} {'upper':>6} {'expected':>9} {'oracle':>7}")
    mismatches = 0
    for m in args.m:
        for n in args.n:
            for k in range(n + 1):
                spec = cp.build_interp_example(m, n, k)
                b = cp.zdi_bounds(spec)
                want = cp.interp_expected(m, n, k)
                got = cp.oracle_index(spec, args.grid)
                mismatches += got != want
                print(f"{m:>3} {n:>3} {k:>3} {b.lower:>6} {b.upper:>6} {want:>9} {got:>7}")
    print(f"mismatches: {mismatches}")


if __name__ == "__main__":
    main()
