"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (see acceptance_log) before asserting, so
the summary at the end of `pytest` lists all twelve verdicts even when some
fail.  `python tests/test_acceptance.py` runs the same checks without pytest.
"""
import math
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from acceptance_log import record
from oracles import farey_values, kelem_to_rs
from sczechsums.dynamics import (a_constant, branch_image_volume, domain_volume, lambda_st,
                                 leading_eigen, level_sum, mu_level, osc_integral, s0_solve,
                                 symmetry_defects, ulam_build)
from sczechsums.farey import FareyQuery, count_farey, enumerate_farey, farey_table
from sczechsums.hurwitz_cf import cf_expand, determinant_defect, gauss_step
from sczechsums.quad_ring import DomainPoint, KElem, QuadInt, euclid_gcd, ring
from sczechsums.sczech import classical_dedekind, reciprocity_defect
from sczechsums.stats import (SampleSet, char_fn, ks_distance, moments, regression, standardize,
                              vardi_contrast)

pytestmark = pytest.mark.acceptance

X_MAIN = 2500


def _verdict(num, title, ok, detail, t0=None, budget=None):
    if t0 is not None:
        el = time.time() - t0
        detail += f"; {el:.1f}s (target < {budget}s)"
        ok = ok and el < budget
    record(num, title, ok, detail)
    return ok


@pytest.fixture(scope="module")
def main_table():
    return farey_table(FareyQuery(2, X_MAIN))


@pytest.fixture(scope="module")
def twist_base():
    # kept samples are what the twisted operators and the oscillatory integral need
    return ulam_build(2, grid_g=128, cutoff_A=400, samples_per_cell=256, seed=0,
                      keep_samples=True)


def _random_coprime_pairs(D, n, bound, seed):
    R = ring(D)
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        a = QuadInt(R, rng.randint(-bound, bound), rng.randint(-bound, bound))
        c = QuadInt(R, rng.randint(-bound, bound), rng.randint(-bound, bound))
        if a and c and euclid_gcd(a, c).norm() == 1:
            out.append((a, c))
    return out


def test_c01_elliptic_reciprocity():
    t0 = time.time()
    bad, total = 0, 0
    for D in (2, 7, 11):
        for a, c in _random_coprime_pairs(D, 10_000, 1000, seed=D):
            total += 1
            if reciprocity_defect(a, c) != 0:
                bad += 1
    ok = _verdict(1, "elliptic reciprocity", bad == 0,
                  f"{total} pairs, {bad} nonzero defects", t0, 60)
    assert ok


def test_c02_classical_reciprocity():
    t0 = time.time()
    bad = total = 0
    for k in range(2, 501):
        for h in range(1, k):
            if math.gcd(h, k) != 1:
                continue
            total += 1
            lhs = classical_dedekind(h, k) + classical_dedekind(k, h)
            rhs = Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4)
            if lhs != rhs:
                bad += 1
    ok = _verdict(2, "classical reciprocity", bad == 0,
                  f"{total} pairs with k <= 500, {bad} failures", t0, 30)
    assert ok


def _check_cf(z):
    """Problems found in the expansion of z, as a list of strings."""
    probs = []
    cf = cf_expand(z)
    if cf.value() != z:
        probs.append("reconstruction")
    if any(d.norm() < 2 for d in cf.digits):
        probs.append("digit norm < 2")
    # walk the Hurwitz map independently of cf_expand, from the point in the
    # half-open domain (boundary points of the closed domain get a0 != 0)
    w = z - cf.a0
    norms, digits = [w.den.norm()], []
    while not w.is_zero():
        d, w = gauss_step(w)
        digits.append(d)
        norms.append(w.den.norm())
    if tuple(digits) != cf.digits:
        probs.append("digits differ from the Gauss map")
    if any(b >= a for a, b in zip(norms, norms[1:])):
        probs.append("denominator norms not decreasing")
    for n in range(1, cf.length + 1):
        if determinant_defect(cf.a0, cf.digits, n):
            probs.append(f"determinant at depth {n}")
    return probs


def test_c03_cf_correctness():
    t0 = time.time()
    R = ring(2)
    pts = farey_values(2, 200)
    bad = 0
    for r, s in pts:
        z = KElem.from_point(DomainPoint(R, r, s))
        if _check_cf(z):
            bad += 1
    ok = _verdict(3, "continued fractions", bad == 0 and len(pts) > 0,
                  f"{len(pts)} oracle points for D=2, X=200, {bad} with problems", t0, 60)
    assert ok


def test_c04_enumeration_oracle():
    t0 = time.time()
    mism = []
    for D in (2, 7, 11):
        for X in range(1, 51):
            got = [kelem_to_rs(z) for z in enumerate_farey(FareyQuery(D, X))]
            if len(got) != len(set(got)) or set(got) != farey_values(D, X):
                mism.append((D, X))
    c1 = count_farey(FareyQuery(2, 1000)) / 1000 ** 2
    c2 = count_farey(FareyQuery(2, 2500)) / 2500 ** 2
    drift = abs(c2 / c1 - 1)
    ok = _verdict(4, "enumeration oracle", not mism and drift < 0.10,
                  f"oracle mismatches {mism or 'none'} over X=1..50; "
                  f"count/X^2 {c1:.4f} -> {c2:.4f} ({drift:.1%})", t0, 300)
    assert ok


def test_c05_figure1(main_table):
    t0 = time.time()
    ks = {}
    for X in (500, 1000, 2500):
        z, _, _ = standardize(main_table.below(X).dtilde())
        ks[X] = ks_distance(z, "gaussian")
    m = moments(SampleSet.from_table(main_table))
    mono = ks[500] > ks[1000] > ks[2500]
    ok = _verdict(5, "Figure-1 Gaussian shape",
                  ks[2500] <= 0.05 and abs(m["skewness"]) <= 0.15 and mono,
                  f"n={len(main_table)}, KS(500,1000,2500)="
                  f"{ks[500]:.4f},{ks[1000]:.4f},{ks[2500]:.4f} (monotone: {mono}), "
                  f"skew={m['skewness']:.3g}", t0, 900)
    assert ok


def test_c06_mean_abs_growth(main_table):
    sub = main_table.subset(main_table.b2_mask())
    means, ratios = [], []
    for X in (250, 500, 1000, 2500):
        v = np.abs(sub.below(X).dtilde())
        means.append(float(v.mean()))
        ratios.append(means[-1] / math.sqrt(math.log(X) * math.log(math.log(X))))
    inc = all(b > a for a, b in zip(means, means[1:]))
    spread = max(ratios) / min(ratios)
    ok = _verdict(6, "mean |Dt| growth", inc and spread < 2,
                  "means " + ",".join(f"{m:.3f}" for m in means)
                  + f"; normalised spread x{spread:.3f}")
    assert ok


def test_c07_level_sums():
    t0 = time.time()
    errs = {2: level_sum(2, 10)["rel_err"]}
    for D in (7, 11):
        r = level_sum(D, 10)
        errs[D] = max(r["tail_rel_err"], r["central_rel_err"])
    # the closed forms are leading terms; the error falls like n^-2
    small = {D: max(level_sum(D, 1)["tail_rel_err"], level_sum(D, 1)["central_rel_err"])
             for D in (7, 11)}
    ok = _verdict(7, "level-set sums", max(errs.values()) < 1e-3,
                  "n=10 relative errors " + ", ".join(f"D={D}: {e:.2e}" for D, e in errs.items())
                  + " (n=1: " + ", ".join(f"D={D}: {e:.2e}" for D, e in small.items()) + ")",
                  t0, 10)
    assert ok


def test_c08_branch_volumes():
    t0 = time.time()
    slopes, consts = {}, {}
    for D in (2, 7, 11):
        R = ring(D)
        vol = domain_volume(D)
        lx, ly, vals = [], [], []
        for m in np.unique(np.round(np.logspace(1, 2, 9)).astype(int)).tolist():
            h = m // 2
            for a in (QuadInt(R, m), QuadInt(R, h, h + 1), QuadInt(R, 0, m)):
                N = a.norm()
                if not 100 <= N <= 10_000:
                    continue
                v = branch_image_volume(D, a) * N ** 2
                lx.append(math.log(N))
                ly.append(math.log(abs(v - vol)))
                vals.append((N, v))
        slopes[D] = regression(lx, ly)["slope"]
        # fitting v = c + d/N gives the limiting constant without assuming vol(I_D)
        Ns, vs = np.array(vals).T
        c, _ = np.linalg.lstsq(np.c_[np.ones_like(Ns), 1 / Ns], vs, rcond=None)[0]
        consts[D] = c / vol
    ok = _verdict(8, "branch volumes", all(abs(s + 1) <= 0.2 for s in slopes.values()),
                  "slopes " + ", ".join(f"D={D}: {s:.3f}" for D, s in slopes.items())
                  + "; fitted constant / vol(I_D) "
                  + ", ".join(f"{c:.5f}" for c in consts.values()), t0, 60)
    assert ok


def test_c09_transfer_operator():
    t0 = time.time()
    parts, good = [], True
    for D in (2, 7, 11):
        op = ulam_build(D, grid_g=128, cutoff_A=400, samples_per_cell=2025, seed=0,
                        keep_samples=False)
        lam, dens = leading_eigen(op)
        sym = symmetry_defects(dens)
        scaled = [n ** 3 * mu_level(dens, n) for n in range(5, 16)]
        stab = max(scaled) / min(scaled)
        pm = [mu_level(dens, n) / mu_level(dens, -n) for n in range(1, 16)]
        ok_D = (0.995 <= lam <= 1.005 and max(sym.values()) <= 0.02 and stab <= 1.2
                and all(0.95 <= r <= 1.05 for r in pm))
        good = good and ok_D
        parts.append(f"D={D}: lam={lam:.6f}, sym={sym['neg']:.4f}/{sym['conj']:.4f}, "
                     f"n^3 mu max/min={stab:.3f}, mu(n)/mu(-n) in "
                     f"[{min(pm):.3f},{max(pm):.3f}]")
    ok = _verdict(9, "transfer operator", good, "; ".join(parts), t0, 600)
    assert ok


def test_c10_s0_consistency(twist_base):
    t0 = time.time()
    _, dens = leading_eigen(twist_base)
    A = a_constant(dens)
    h = 1e-3
    fd = (lambda_st(twist_base, 1 + h, 0).real - lambda_st(twist_base, 1 - h, 0).real) / (2 * h)
    fd_err = abs(fd / A - 1)
    ts = np.round(np.arange(0.02, 0.2001, 0.02), 10)
    s0 = np.array([s0_solve(twist_base, float(t)).s0 for t in ts])
    ratios = {}
    for t, s in zip(ts, s0):
        if 0.05 <= t <= 0.2 + 1e-12:
            pred = -osc_integral(float(t), dens).real / A
            ratios[float(t)] = (s - 1) / pred
    within = all(abs(r - 1) <= 0.15 for r in ratios.values())
    fit = regression(ts ** 2 * np.log(1 / ts), s0 - 1)
    ok = _verdict(10, "s0 and oscillatory integral",
                  A > 0 and fd_err <= 0.05 and within and fit["r2"] >= 0.9,
                  f"A={A:.4f} (A>0: {A > 0}), FD slope {fd:.4f} ({fd_err:.2%} off), "
                  f"(s0-1)/pred over t in [0.05,0.2]: "
                  + ",".join(f"{r:.3f}" for r in ratios.values())
                  + f"; R^2 vs t^2 log(1/t) {fit['r2']:.4f}", t0, 600)
    assert ok


def test_c11_charfn_shape(main_table):
    ts = np.round(np.arange(0.02, 0.2001, 0.01), 10)
    chi = char_fn(main_table.S(), ts)
    fit = regression(ts ** 2 * np.log(1 / ts), np.log(np.abs(chi)))
    ok = _verdict(11, "characteristic function shape",
                  fit["r2"] >= 0.9 and fit["slope"] < 0,
                  f"slope {fit['slope']:.3f}, R^2 {fit['r2']:.4f}")
    assert ok


def test_c12_cauchy_contrast():
    t0 = time.time()
    reps = {Q: vardi_contrast(Q) for Q in (500, 1000, 2000)}
    r = reps[2000]
    kurt = [reps[Q]["excess_kurtosis"] for Q in (500, 1000, 2000)]
    inc = all(b > a for a, b in zip(kurt, kurt[1:]))
    ok = _verdict(12, "Cauchy contrast", r["cauchy_beats_gaussian"] and inc,
                  f"Q=2000 KS Cauchy {r['ks_cauchy']:.4f} vs best Gaussian "
                  f"{r['ks_gaussian_best_fit']:.4f}; fitted Cauchy scale "
                  f"{r['cauchy_fitted_scale']:.3f} (KS {r['ks_cauchy_fitted_scale']:.4f}); "
                  "excess kurtosis " + ",".join(f"{k:.2f}" for k in kurt), t0, 300)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
