"""Hurwitz continued fractions on exact field elements.

The expansion of z is z = a0 + 1/(a1 + 1/(a2 + ... + 1/an)), where a0 = [z]
and every later digit comes from the Hurwitz map G(z) = 1/z - [1/z].
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .quad_ring import KElem, QuadInt, domain_membership, k_reduce, round_quotient


@dataclass(frozen=True)
class CFExpansion:
    a0: QuadInt
    digits: tuple[QuadInt, ...] = field(default_factory=tuple)

    @property
    def length(self) -> int:
        return len(self.digits)

    def value(self) -> KElem:
        """Rebuild z = a0 + h_{a1}(h_{a2}(...h_{an}(0)))."""
        R = self.a0.R
        one = QuadInt(R, 1)
        num, den = QuadInt(R, 0), one
        for a in reversed(self.digits):
            # 1/(a + num/den) = den/(a*den + num)
            num, den = den, a * den + num
        return k_reduce(self.a0 * den + num, den)


def gauss_step(z: KElem) -> tuple[QuadInt, KElem]:
    """One application of the Hurwitz map: (digit, G(z))."""
    if z.is_zero():
        raise ValueError("the Hurwitz map is undefined at 0")
    if not domain_membership(z.to_point(), "closed"):
        raise ValueError(f"{z} is not in the fundamental domain")
    digit = round_quotient(z.den, z.num)
    nxt = k_reduce(z.den - digit * z.num, z.num)
    return digit, nxt


def cf_expand(z: KElem) -> CFExpansion:
    num, den = z.num, z.den
    a0 = round_quotient(num, den)
    num = num - a0 * den
    digits = []
    last = den.norm()
    while num:
        # z = num/den is already reduced, so one step keeps it reduced
        a = round_quotient(den, num)
        num, den = den - a * num, num
        nd = den.norm()
        if nd >= last:
            raise AssertionError("denominator norms failed to decrease")
        last = nd
        digits.append(a)
    return CFExpansion(a0, tuple(digits))


def continuant(seq) -> QuadInt | int:
    """P(a0, ..., am), with P() = 1."""
    prev, cur = 0, 1
    for a in seq:
        prev, cur = cur, cur * a + prev
    return cur


def convergents(a0: QuadInt, digits) -> list[tuple[QuadInt, QuadInt]]:
    """[(p_n, q_n)] for n = 0..len(digits), p_n = P(a0..an), q_n = P(a1..an)."""
    R = a0.R
    p_prev, p = QuadInt(R, 1), a0
    q_prev, q = QuadInt(R, 0), QuadInt(R, 1)
    out = [(p, q)]
    for a in digits:
        p_prev, p = p, p * a + p_prev
        q_prev, q = q, q * a + q_prev
        out.append((p, q))
    return out


def determinant_defect(a0: QuadInt, digits, n: int) -> QuadInt:
    """P(a0..an)P(a1..a_{n-1}) - P(a0..a_{n-1})P(a1..an) - (-1)^(n+1); zero when the identity holds."""
    seq = [a0, *digits[:n]]
    lhs = (continuant(seq) * continuant(seq[1:-1])
           - continuant(seq[:-1]) * continuant(seq[1:]))
    return QuadInt.of(a0.R, lhs) - (-1) ** (n + 1)


def reversed_tail_ratios(digits) -> tuple[KElem, KElem]:
    """P(0,a1..an)/P(a1..an) and P(0,an..a1)/P(an..a1)."""
    digits = list(digits)
    if not digits:
        raise ValueError("need at least one digit")
    R = digits[0].R
    zero = QuadInt(R, 0)
    fwd = QuadInt.of(R, continuant(digits))
    bwd = QuadInt.of(R, continuant(digits[::-1]))
    if fwd != bwd:
        raise AssertionError("palindrome identity P(a1..an) = P(an..a1) failed")
    if not fwd:
        raise ArithmeticError("P(a1..an) vanished")
    r1 = k_reduce(QuadInt.of(R, continuant([zero, *digits])), fwd)
    r2 = k_reduce(QuadInt.of(R, continuant([zero, *digits[::-1]])), bwd)
    return r1, r2
