"""Distributional statistics of Sczech samples and the classical Cauchy contrast."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize, special

from .farey import FareyTable
from .sczech import dedekind_sum_array


@dataclass
class SampleSet:
    """Exact rational values num/den (den > 0) with their Farey context."""
    num: np.ndarray
    den: np.ndarray
    X: int = 0
    D: int = 2
    kind: str = "Dt"
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_table(cls, t: FareyTable, kind: str = "Dt") -> "SampleSet":
        if kind == "Dt":
            num, den = t["dt_num"], t["normsq_b"]
        elif kind == "S":
            num, den = t["S"], np.ones(len(t), np.int64)
        else:
            raise ValueError("kind must be 'Dt' or 'S'")
        return cls(np.asarray(num, np.int64), np.asarray(den, np.int64), t.X, t.D, kind,
                   {"count": len(t), "include_zero": t.include_zero})

    @classmethod
    def from_values(cls, values, **kw) -> "SampleSet":
        fr = [Fraction(v) for v in values]
        return cls(np.array([f.numerator for f in fr], np.int64),
                   np.array([f.denominator for f in fr], np.int64), **kw)

    def __len__(self):
        return int(self.num.shape[0])

    def values(self) -> np.ndarray:
        return self.num / self.den


def standardize(values) -> tuple[np.ndarray, float, float]:
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two values")
    mu = float(x.mean())
    sd = float(x.std())
    if sd == 0:
        raise ValueError("zero variance")
    return (x - mu) / sd, mu, sd


def scale_ratio(std: float, X: float) -> float:
    """std / sqrt(log X log log X)."""
    return std / math.sqrt(math.log(X) * math.log(math.log(X)))


def gaussian_cdf(x):
    return special.ndtr(x)


def cauchy_cdf(x, scale: float = 1.0):
    return 0.5 + np.arctan(np.asarray(x) / scale) / math.pi


def ks_distance(sample, reference="gaussian") -> float:
    """sup |F_n - F| for a continuous reference CDF (ties handled by the jump at each value)."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    if reference == "gaussian":
        F = gaussian_cdf(x)
    elif reference == "cauchy":
        F = cauchy_cdf(x)
    elif callable(reference):
        F = reference(x)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    # for tied values only the first (left limit) and last (right limit) matter
    i = np.arange(1, n + 1)
    last = np.r_[x[1:] != x[:-1], True]
    first = np.r_[True, x[1:] != x[:-1]]
    up = np.max((i / n - F)[last])
    down = np.max((F - (i - 1) / n)[first])
    return float(max(up, down, 0.0))


def _power_sums(s: SampleSet, kmax: int = 4):
    """Exact sums of v^k and |v| grouped by denominator."""
    sums = [Fraction(0)] * (kmax + 1)
    sabs = Fraction(0)
    order = np.argsort(s.den, kind="stable")
    den = s.den[order]
    num = s.num[order]
    cuts = np.flatnonzero(np.r_[True, den[1:] != den[:-1], True])
    for a, b in zip(cuts[:-1], cuts[1:]):
        d = int(den[a])
        block = [int(v) for v in num[a:b].tolist()]
        sabs += Fraction(sum(abs(v) for v in block), d)
        pw = [1] * len(block)
        for k in range(kmax + 1):
            sums[k] += Fraction(sum(pw), d ** k)
            pw = [p * v for p, v in zip(pw, block)]
    return sums, sabs


def moments(s: SampleSet) -> dict:
    """Mean, variance, skewness, excess kurtosis and mean |v|, accumulated exactly."""
    n = len(s)
    if n < 4:
        raise ValueError("need at least four values")
    p, sabs = _power_sums(s)
    m1 = p[1] / n
    m2 = p[2] / n - m1 ** 2
    m3 = p[3] / n - 3 * m1 * p[2] / n + 2 * m1 ** 3
    m4 = p[4] / n - 4 * m1 * p[3] / n + 6 * m1 ** 2 * p[2] / n - 3 * m1 ** 4
    var = float(m2)
    return {
        "count": n,
        "mean": float(m1),
        "var": var,
        "var_unbiased": float(m2 * n / (n - 1)),
        "skewness": float(m3) / var ** 1.5 if var > 0 else 0.0,
        "excess_kurtosis": float(m4 / m2 ** 2) - 3.0 if var > 0 else 0.0,
        "mean_abs": float(sabs / n),
    }


def char_fn(values, t_grid) -> np.ndarray:
    """(1/N) sum exp(i t v), grouped over distinct values."""
    v, cnt = np.unique(np.asarray(values, dtype=np.float64), return_counts=True)
    t = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    w = cnt / cnt.sum()
    out = np.empty(t.shape, np.complex128)
    for i, tt in enumerate(t):
        out[i] = np.sum(w * np.exp(1j * tt * v)) if tt != 0 else 1.0
    return out


def dirichlet_coeffs(t_or_table, t: float | None = None) -> dict:
    """a_{n,t} = sum over the points of height^2 n of exp(i t S)."""
    table = t_or_table
    S = table["S"].astype(np.float64)
    n = table["normsq_b"]
    e = np.exp(1j * t * S) if t else np.ones(S.shape, np.complex128)
    keys, inv = np.unique(n, return_inverse=True)
    re = np.bincount(inv, weights=e.real)
    im = np.bincount(inv, weights=e.imag)
    return {int(k): complex(a, b) for k, a, b in zip(keys.tolist(), re, im)}


def freedman_diaconis_edges(x) -> np.ndarray:
    return np.histogram_bin_edges(np.asarray(x, dtype=np.float64), bins="fd")


def regression(x, y) -> dict:
    x, y = np.asarray(x, float), np.asarray(y, float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(coef[0]), "intercept": float(coef[1]), "r2": float(r2)}


# ---------------------------------------------------------------------------
# classical contrast

def farey_fractions(Q: int):
    """(h, k) with 0 <= h <= k <= Q, gcd(h, k) = 1, i.e. the Farey fractions of order Q in [0, 1]."""
    hs, ks = [np.array([0, 1], np.int64)], [np.array([1, 1], np.int64)]
    for k in range(2, Q + 1):
        h = np.arange(1, k, dtype=np.int64)
        h = h[np.gcd(h, k) == 1]
        hs.append(h)
        ks.append(np.full(h.size, k, np.int64))
    return np.concatenate(hs), np.concatenate(ks)


def best_gaussian_ks(x) -> tuple[float, float, float]:
    """min over (mu, sigma) of the KS distance to N(mu, sigma^2); starts from the moment fit."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    mu0, sd0 = float(np.median(x)), float(x.std())
    q = np.subtract(*np.percentile(x, [75, 25])) / 1.349

    def obj(p):
        m, ls = p
        return ks_distance(x, lambda y: gaussian_cdf((y - m) / math.exp(ls)))

    best = None
    for start in ((float(x.mean()), math.log(sd0)), (mu0, math.log(max(q, 1e-12)))):
        r = optimize.minimize(obj, start, method="Nelder-Mead",
                              options={"xatol": 1e-6, "fatol": 1e-7, "maxiter": 400})
        if best is None or r.fun < best.fun:
            best = r
    return float(best.fun), float(best.x[0]), float(math.exp(best.x[1]))


def vardi_contrast(Q: int) -> dict:
    """Classical s(h,k)/log Q over the order-Q Farey fractions versus Cauchy and Gaussian references.

    The limit law says P(s/log Q <= x/(2 pi)) -> Cauchy CDF, so 2 pi s/log Q is
    compared with the standard Cauchy distribution.
    """
    if Q > 5000:
        raise ValueError("Q <= 5000")
    h, k = farey_fractions(Q)
    s = dedekind_sum_array(h, k) / math.log(Q)
    x = 2 * math.pi * s
    ks_c = ks_distance(x, "cauchy")
    ks_g_moment = ks_distance(standardize(x)[0], "gaussian")
    ks_g_best, mu, sd = best_gaussian_ks(x)
    # how far the finite-Q spread is from the limiting scale
    fit = optimize.minimize_scalar(lambda c: ks_distance(x, lambda y: cauchy_cdf(y, c)),
                                   bounds=(0.05, 5.0), method="bounded")
    xs = (x - x.mean()) / x.std()
    return {
        "Q": Q, "count": int(x.size),
        "ks_cauchy": ks_c,
        "ks_gaussian_moment_fit": ks_g_moment,
        "ks_gaussian_best_fit": ks_g_best,
        "gaussian_fit": {"mu": mu, "sigma": sd},
        "ks_cauchy_fitted_scale": float(fit.fun),
        "cauchy_fitted_scale": float(fit.x),
        "median": float(np.median(s)),
        "excess_kurtosis": float(np.mean(xs ** 4) - 3.0),
        "cauchy_beats_gaussian": bool(ks_c < min(ks_g_moment, ks_g_best)),
    }
