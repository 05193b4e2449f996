"""How the Ulam matrix error falls with the number of samples per cell.

Compares each row estimate with a high-sample reference, over several seeds,
and fits log(error) against log(samples).

    python scripts/mc_rate.py --D 2 --grid 32
"""
import argparse
import json

import numpy as np

from sczechsums.dynamics import ulam_build
from sczechsums.stats import regression


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--D", type=int, default=2)
    ap.add_argument("--grid", type=int, default=32)
    ap.add_argument("--samples", type=int, nargs="+", default=[16, 64, 256, 1024])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--reference", type=int, default=16384)
    a = ap.parse_args()
    ref = ulam_build(a.D, a.grid, 400, a.reference, seed=10_000, keep_samples=False).matrix
    errs = []
    for n in a.samples:
        e = [abs(ulam_build(a.D, a.grid, 400, n, seed=s, keep_samples=False).matrix - ref).sum()
             for s in range(a.seeds)]
        errs.append(float(np.mean(e)))
        print(json.dumps({"samples_per_cell": n, "mean_L1_error": errs[-1]}))
    fit = regression(np.log(a.samples), np.log(errs))
    print(json.dumps({"slope": fit["slope"], "r2": fit["r2"]}))


if __name__ == "__main__":
    main()
