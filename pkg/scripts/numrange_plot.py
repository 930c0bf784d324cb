"""Write boundary CSV/SVG files of W(K_m(A)) for a few standard inputs.

    python scripts/numrange_plot.py --out-dir plots
"""
import argparse
from pathlib import Path

import numpy as np

from sdlab import kms
from sdlab import matrix_io as mio
from sdlab import numrange as nr
from sdlab.linalg import jordan_block

CASES = {
    "k2_scalar2": kms.KmsSpec(2, [[2.0]]),
    "k3_jordan2": kms.KmsSpec(3, jordan_block(2)),
    "k3_diag10": kms.KmsSpec(3, np.diag([1.0, 0.0])),
    "k3_scalar1": kms.KmsSpec(3, [[1.0]]),
    "k4_scalar05": kms.KmsSpec(4, [[0.5]]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="plots")
    ap.add_argument("--samples", type=int, default=720)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for name, spec in CASES.items():
        samples = nr.boundary(kms.build(spec), args.samples)
        (out / f"{name}.csv").write_text(mio.boundary_csv(samples))
        (out / f"{name}.svg").write_text(mio.boundary_svg(samples))
        print(f"{name:>12}: {nr.circularity(spec, args.samples)}")


if __name__ == "__main__":
    main()
