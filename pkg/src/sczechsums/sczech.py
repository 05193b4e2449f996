"""Normalized elliptic Dedekind (Sczech) sums and classical Dedekind sums."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .hurwitz_cf import cf_expand, reversed_tail_ratios
from .quad_ring import KElem, QuadInt, euclid_gcd, k_reduce


class ContractViolation(ArithmeticError):
    pass


def imd(x) -> Fraction:
    """(2/sqrt(D)) Im(x): 2v for D = 2 and v for D = 7, 11 when x = u + v w."""
    if isinstance(x, QuadInt):
        return Fraction(x.v * (2 if x.R.D == 2 else 1))
    if isinstance(x, KElem):
        p = x.to_point()
        return p.y * (2 if x.R.D == 2 else 1)
    if isinstance(x, int):
        return Fraction(0)
    raise TypeError(f"imd of {type(x).__name__}")


def _check_tails(digits):
    # Ito's formula needs P(a_m..a_n) != 0 for every tail
    R = digits[0].R
    cur, prev = QuadInt(R, 1), QuadInt(R, 0)
    for a in reversed(digits):
        prev, cur = cur, a * cur + prev
        if not cur:
            raise ContractViolation(f"vanishing continuant in tail of {digits}")


def dtilde_of(z: KElem) -> Fraction:
    """D~ of a field element, read off its Hurwitz expansion."""
    exp = cf_expand(z)
    digits = list(exp.digits)
    n = len(digits)
    if n == 0:
        return Fraction(0)
    _check_tails(digits)
    r1, r2 = reversed_tail_ratios(digits)
    alt = QuadInt(z.R, 0)
    for j, a in enumerate(digits, start=1):
        alt = alt + a if j % 2 else alt - a
    bracket = r1 + r2 * (-1) ** (n + 1) + alt
    return imd(bracket)


def sczech_tilde(a, c) -> Fraction:
    """Normalized Sczech sum D~(a, c) via Ito's continued-fraction formula."""
    if not c:
        raise ZeroDivisionError("c = 0")
    R = c.R
    a = QuadInt.of(R, a)
    return dtilde_of(k_reduce(a, c))


def cost_S(z: KElem) -> Fraction:
    S = Fraction(0)
    for j, a in enumerate(cf_expand(z).digits, start=1):
        S += imd(a) if j % 2 else -imd(a)
    return S


def reciprocity_defect(a: QuadInt, c: QuadInt) -> Fraction:
    R = c.R
    a = QuadInt.of(R, a)
    if not a or not c:
        raise ValueError("reciprocity needs nonzero a and c")
    if euclid_gcd(a, c).norm() != 1:
        raise ValueError(f"{a} and {c} are not coprime")
    ac = k_reduce(a, c)
    rhs = imd(ac + ac.inverse() + k_reduce(QuadInt(R, 1), a * c))
    return sczech_tilde(a, c) + sczech_tilde(c, a) - rhs


@dataclass(frozen=True)
class SczechSample:
    z: KElem
    height_sq: int
    ell: int
    S: Fraction
    Dtilde: Fraction


def sczech_sample(z: KElem) -> SczechSample:
    return SczechSample(z, z.height_sq(), cf_expand(z).length, cost_S(z), dtilde_of(z))


# ---------------------------------------------------------------------------
# classical Dedekind sums

def classical_dedekind(h: int, k: int) -> Fraction:
    """s(h, k) = sum_{l=1}^{k-1} ((l/k)) ((hl/k)), O(k)."""
    if k <= 0:
        raise ValueError("k must be positive")
    if gcd(h, k) != 1:
        raise ValueError(f"gcd({h}, {k}) != 1")
    # for 0 < l < k both sawtooth arguments are non-integers, so
    # ((l/k)) ((hl/k)) = (2l - k)(2r - k) / (4k^2) with r = hl mod k
    acc = 0
    for l in range(1, k):
        acc += (2 * l - k) * (2 * (h * l % k) - k)
    return Fraction(acc, 4 * k * k)


def dedekind_by_reciprocity(h: int, k: int) -> Fraction:
    """s(h, k) from the reciprocity law and periodicity, O(log k)."""
    if k <= 0 or gcd(h, k) != 1:
        raise ValueError("need k > 0 and gcd(h, k) = 1")
    sign, acc = 1, Fraction(0)
    h %= k
    while k > 1:
        acc += sign * (Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4))
        h, k = k % h, h
        sign = -sign
    return acc


def dedekind_sum_array(h, k) -> np.ndarray:
    """Float s(h, k) for arrays of coprime pairs (reciprocity recursion in lockstep)."""
    h = np.asarray(h, dtype=np.int64) % np.asarray(k, dtype=np.int64)
    k = np.array(k, dtype=np.int64, copy=True)
    out = np.zeros(h.shape, dtype=np.float64)
    sign = np.ones(h.shape, dtype=np.float64)
    live = k > 1
    while live.any():
        hh, kk = h[live].astype(np.float64), k[live].astype(np.float64)
        out[live] += sign[live] * ((hh * hh + kk * kk + 1) / (12 * hh * kk) - 0.25)
        nh = k[live] % h[live]
        k[live] = h[live]
        h[live] = nh
        sign[live] = -sign[live]
        live = k > 1
    return out
