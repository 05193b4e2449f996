"""Ulam approximation of the Hurwitz transfer operator: eigenvalue, symmetry, level masses.

    python scripts/transfer_operator.py --D 2 7 11 --grid 128 --samples 2025 --out ulam
"""
import argparse
import csv
import json
from pathlib import Path

from sczechsums.dynamics import (a_constant, leading_eigen, mu_level, symmetry_defects,
                                 tail_mass_bound, ulam_build)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--D", type=int, nargs="+", default=[2, 7, 11])
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--cutoff", type=float, default=400)
    ap.add_argument("--samples", type=int, default=2025)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nmax", type=int, default=20)
    ap.add_argument("--out", default="ulam")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    for D in a.D:
        op = ulam_build(D, a.grid, a.cutoff, a.samples, a.seed, keep_samples=False)
        lam, dens = leading_eigen(op)
        A = a_constant(dens)
        summary = {"D": D, "lambda": lam, "A": A, "symmetry": symmetry_defects(dens),
                   "escape_mass": float(dens.mass @ (op.escape_rows)),
                   "tail_bound": tail_mass_bound(D, a.cutoff)}
        print(json.dumps(summary))
        with open(out / f"levels_D{D}.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["n", "mu_pos", "mu_neg", "n3_mu_pos", "ratio"])
            for n in range(1, min(a.nmax, op.nmax) + 1):
                p, m = mu_level(dens, n), mu_level(dens, -n)
                w.writerow([n, p, m, n ** 3 * p, p / m if m else ""])
        with open(out / f"density_D{D}.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["cell", "x", "y", "density"])
            c = op.grid.centers()
            for i, (z, d) in enumerate(zip(c, dens.density)):
                w.writerow([i, z.real, z.imag, d])


if __name__ == "__main__":
    main()
