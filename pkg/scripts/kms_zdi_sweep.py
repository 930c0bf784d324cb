"""Index of K_m(a) for scalar a as |a| sweeps an interval.

Prints the direct inertia count, the closed form from the cosine
thresholds, and the grid oracle, so the staircase in |a| is visible.

    python scripts/kms_zdi_sweep.py --m 5 --points 41
"""
import argparse

import numpy as np

from sdlab import dilation as dl
from sdlab import kms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--lo", type=float, default=0.05)
    ap.add_argument("--hi", type=float, default=1.5)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--grid", type=int, default=2048)
    args = ap.parse_args()

    cuts = np.cos(np.arange(args.m - 1) * np.pi / (args.m - 1))
    print("thresholds:", " ".join(f"{c:.4f}" for c in cuts[cuts > 1e-12]))
    print(f"{'|a|':>8} {'direct':>7} {'closed':>7} {'oracle':>7}")
    for r in np.linspace(args.lo, args.hi, args.points):
        A = np.array([[r]])
        direct = kms.zdi_kms(args.m, A)
        closed = kms.zdi_kms_normal(args.m, [r])
        oracle = dl.zdi(kms.kms(args.m, A), args.grid).index
        flag = "" if direct == closed == oracle else "  <-- differs"
        print(f"{r:8.4f} {direct:7d} {closed:7d} {oracle:7d}{flag}")


if __name__ == "__main__":
    main()
