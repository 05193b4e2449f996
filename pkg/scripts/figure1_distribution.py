"""Distribution of the normalised sums over Farey sets of growing height.

Writes a per-X summary (KS distances, moments, mean |Dt| on the B2 strip for
D = 2) and the standardised histogram at the largest X next to the N(0,1)
density.

    python scripts/figure1_distribution.py --D 2 --X 500 1000 2500 --out fig1
"""
import argparse
import csv
import json
import math
from pathlib import Path

import numpy as np

from sczechsums.farey import FareyQuery, farey_table
from sczechsums.stats import (SampleSet, freedman_diaconis_edges, ks_distance, moments,
                              standardize)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--D", type=int, default=2)
    ap.add_argument("--X", type=int, nargs="+", default=[250, 500, 1000, 2500])
    ap.add_argument("--stat", choices=["Dt", "S"], default="Dt")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="fig1")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    Xs = sorted(a.X)
    table = farey_table(FareyQuery(a.D, Xs[-1]), workers=a.threads)
    rows = []
    for X in Xs:
        t = table.below(X)
        s = SampleSet.from_table(t, a.stat)
        z, mu, sd = standardize(s.values())
        m = moments(s)
        row = {"X": X, "count": len(t), "std": sd,
               "ks_gaussian": ks_distance(z, "gaussian"), "ks_cauchy": ks_distance(z, "cauchy"),
               "skewness": m["skewness"], "excess_kurtosis": m["excess_kurtosis"],
               "mean_abs": m["mean_abs"],
               "std_over_sqrt_loglog": sd / math.sqrt(math.log(X) * math.log(math.log(X)))}
        if a.D == 2:
            b2 = np.abs(t.subset(t.b2_mask()).dtilde())
            row["mean_abs_b2"] = float(b2.mean())
        rows.append(row)
        print(json.dumps(row))

    with open(out / "summary.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[-1]))
        w.writeheader()
        w.writerows(rows)

    z, _, _ = standardize(SampleSet.from_table(table, a.stat).values())
    edges = freedman_diaconis_edges(z)
    counts, _ = np.histogram(z, bins=edges)
    width = np.diff(edges)
    mid = (edges[:-1] + edges[1:]) / 2
    with open(out / "histogram.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["left", "right", "count", "density", "normal_density"])
        for lo, hi, c, wd, x in zip(edges[:-1], edges[1:], counts, width, mid):
            w.writerow([lo, hi, int(c), c / (z.size * wd), math.exp(-x * x / 2) / math.sqrt(2 * math.pi)])


if __name__ == "__main__":
    main()
