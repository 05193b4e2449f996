import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from sczechsums.quad_ring import KElem, QuadInt, euclid_gcd, k_reduce, ring, round_quotient
from sczechsums.sczech import (ContractViolation, classical_dedekind, cost_S,
                               dedekind_by_reciprocity, dedekind_sum_array, dtilde_of, imd,
                               reciprocity_defect, sczech_sample, sczech_tilde, _check_tails)
from strategies import kelems, pairs, quadints

R2, R7 = ring(2), ring(7)


def test_imd_examples():
    assert imd(QuadInt(R2, 0, 1)) == 2
    assert imd(QuadInt(R7, 0, 1)) == 1
    assert imd(QuadInt(R7, 5, 0)) == 0
    assert imd(7) == 0
    assert imd(k_reduce(QuadInt(R2, 0, 1), QuadInt(R2, 3))) == Fraction(2, 3)


def test_sczech_examples():
    w = QuadInt(R2, 0, 1)
    assert sczech_tilde(1, w) == 0
    assert sczech_tilde(QuadInt(R2, 5, 3), QuadInt(R2, 1)) == 0
    assert sczech_tilde(QuadInt(R2, 5, 3), QuadInt(R2, -1)) == 0
    assert cost_S(k_reduce(QuadInt(R2, 1), w)) == 2
    assert cost_S(KElem.from_int(R2, 0)) == 0
    assert cost_S(k_reduce(QuadInt(R2, 2), QuadInt(R2, 5))) == 0
    assert reciprocity_defect(QuadInt(R2, 1), w) == 0
    with pytest.raises(ZeroDivisionError):
        sczech_tilde(1, QuadInt(R2, 0))


def test_reciprocity_rejects_bad_pairs():
    with pytest.raises(ValueError):
        reciprocity_defect(QuadInt(R2, 2), QuadInt(R2, 0, 1))
    with pytest.raises(ValueError):
        reciprocity_defect(QuadInt(R2, 0), QuadInt(R2, 3))


def _coprime(a, c):
    return bool(a) and bool(c) and euclid_gcd(a, c).norm() == 1


@given(pairs(bound=400))
def test_reciprocity_exact(ac):
    a, c = ac
    assume(_coprime(a, c))
    assert reciprocity_defect(a, c) == 0
    assert reciprocity_defect(c, a) == 0


@given(pairs(bound=200), quadints(bound=50))
def test_translation_invariance(ac, m):
    a, c = ac
    assume(m.R == a.R)
    assert sczech_tilde(a + m * c, c) == sczech_tilde(a, c)


@given(kelems(bound=200))
def test_negation_conjugation_symmetry(z):
    # D~ is odd under both z -> -z and z -> conj(z), as the reciprocity law forces
    d = dtilde_of(z)
    assert dtilde_of(-z) == -d
    assert dtilde_of(z.conj()) == -d
    assert dtilde_of(-z) == dtilde_of(z.conj())


def test_sign_of_mixed_symmetry():
    # a point with D~ != 0 shows D~(-z) = -D~(conj z) cannot hold in general
    R = ring(2)
    z = k_reduce(QuadInt(R, 0, 1), QuadInt(R, 1, 1))
    assert dtilde_of(z) != 0
    assert dtilde_of(-z) != -dtilde_of(z.conj())


def _dtilde_by_reciprocity(a, c):
    """Independent oracle: Euclid on (a, c) with reciprocity, periodicity and D~(a, unit) = 0."""
    R = c.R
    sign, acc = 1, Fraction(0)
    while not c.is_unit():
        r = a - c * round_quotient(a, c)
        if not r:
            raise ValueError("not coprime")
        acc += sign * imd(k_reduce(r, c) + k_reduce(c, r) + k_reduce(QuadInt(R, 1), r * c))
        sign = -sign
        a, c = c, r
    return acc


@given(pairs(bound=300))
def test_dtilde_matches_reciprocity_oracle(ac):
    a, c = ac
    assume(_coprime(a, c))
    assert sczech_tilde(a, c) == _dtilde_by_reciprocity(a, c)


@given(kelems(bound=200))
def test_cost_close_to_dtilde(z):
    s = sczech_sample(z)
    assert abs(s.S - s.Dtilde) <= 4
    assert isinstance(s.Dtilde, Fraction)
    # the denominator of D~ divides the height squared
    assert s.height_sq % s.Dtilde.denominator == 0


def test_tail_check_raises_on_vanishing_continuant():
    # P(1, -1) = 1 * -1 + 1 = 0: digits a Hurwitz expansion never produces
    with pytest.raises(ContractViolation):
        _check_tails([QuadInt(R2, 1), QuadInt(R2, -1)])


def test_classical_examples():
    assert classical_dedekind(5, 1) == 0
    assert classical_dedekind(1, 3) == Fraction(1, 18)
    assert classical_dedekind(2, 3) == -Fraction(1, 18)
    # s(1, k) = (k - 1)(k - 2)/(12 k)
    for k in range(1, 40):
        assert classical_dedekind(1, k) == Fraction((k - 1) * (k - 2), 12 * k)
    with pytest.raises(ValueError):
        classical_dedekind(2, 4)


def test_classical_reciprocity_small():
    for k in range(2, 120):
        for h in range(1, k):
            if gcd(h, k) == 1:
                lhs = classical_dedekind(h, k) + classical_dedekind(k, h)
                rhs = Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4)
                assert lhs == rhs


def test_sawtooth_vs_reciprocity_oracle():
    rng = random.Random(7)
    n = 0
    while n < 1000:
        k = rng.randint(1, 3000)
        h = rng.randint(-k, 2 * k)
        if gcd(h, k) != 1:
            continue
        assert classical_dedekind(h, k) == dedekind_by_reciprocity(h, k)
        n += 1


def test_dedekind_array_matches_exact():
    rng = random.Random(3)
    hs, ks = [], []
    while len(hs) < 500:
        k = rng.randint(1, 5000)
        h = rng.randint(0, k)
        if gcd(h, k) == 1:
            hs.append(h)
            ks.append(k)
    got = dedekind_sum_array(hs, ks)
    want = [float(dedekind_by_reciprocity(h, k)) for h, k in zip(hs, ks)]
    assert got == pytest.approx(want, abs=1e-9)


@given(st.integers(2, 2000), st.integers(1, 2000))
def test_classical_oddness(k, h):
    assume(gcd(h, k) == 1)
    assert dedekind_by_reciprocity(k - h, k) == -dedekind_by_reciprocity(h, k)
