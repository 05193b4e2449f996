"""Classical Dedekind sums over Farey fractions: Cauchy versus Gaussian fits.

    python scripts/cauchy_contrast.py --Q 500 1000 2000 5000
"""
import argparse
import json

from sczechsums.stats import vardi_contrast


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Q", type=int, nargs="+", default=[500, 1000, 2000, 5000])
    a = ap.parse_args()
    for Q in a.Q:
        r = vardi_contrast(Q)
        r.pop("gaussian_fit")
        print(json.dumps(r))


if __name__ == "__main__":
    main()
