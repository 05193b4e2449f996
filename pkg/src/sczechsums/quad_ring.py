"""Exact arithmetic in the rings of integers of Q(sqrt(-D)), D in {2, 7, 11}.

Elements are stored in an integral basis {1, w}: w = sqrt(-2) for D = 2 and
w = (1 + sqrt(-D))/2 for D = 7, 11.  Both cases satisfy w^2 = p*w - k with
(p, k) = (0, 2) and (1, (D+1)/4), which keeps every formula below uniform.

All domain predicates are integer or Fraction inequalities; no floats.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

SUPPORTED_D = (2, 7, 11)


@dataclass(frozen=True)
class RingSpec:
    D: int

    def __post_init__(self):
        if self.D not in SUPPORTED_D:
            raise ValueError(f"D must be one of {SUPPORTED_D}, got {self.D!r}")

    @property
    def basis_kind(self) -> str:
        return "rectangular" if self.D == 2 else "hexagonal"

    @property
    def p(self) -> int:
        """Trace of w."""
        return 0 if self.D == 2 else 1

    @property
    def k(self) -> int:
        """Norm of w."""
        return 2 if self.D == 2 else (self.D + 1) // 4

    @property
    def unit_group(self) -> tuple[int, int]:
        return (1, -1)

    @property
    def w_complex(self) -> complex:
        if self.D == 2:
            return complex(0.0, math.sqrt(2.0))
        return complex(0.5, math.sqrt(self.D) / 2)

    def __repr__(self):
        return f"RingSpec(D={self.D})"


@lru_cache(maxsize=None)
def ring(D: int) -> RingSpec:
    return RingSpec(D)


# ---------------------------------------------------------------------------
# raw integer-pair kernels (shared with the vectorised code paths)

def mul_coords(R: RingSpec, a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """(a + b w)(c + d w)."""
    bd = b * d
    return a * c - R.k * bd, a * d + b * c + R.p * bd


def conj_coords(R: RingSpec, u: int, v: int) -> tuple[int, int]:
    return u + R.p * v, -v


def norm_coords(R: RingSpec, u: int, v: int) -> int:
    return u * u + R.p * u * v + R.k * v * v


def in_tilde_scaled(R: RingSpec, X: int, Y: int, N: int) -> bool:
    """Is (X + Y w)/N in the half-open domain?  N > 0."""
    if R.D == 2:
        return -N <= 2 * X < N and -N <= 2 * Y < N
    D = R.D
    e1 = 2 * X + Y
    e2 = 4 * X + 2 * (D + 1) * Y
    e3 = -4 * X + 2 * (D - 1) * Y
    M = (D + 1) * N
    return -N <= e1 < N and -M <= e2 < M and -M < e3 <= M


def in_closed_scaled(R: RingSpec, X: int, Y: int, N: int) -> bool:
    """Is (X + Y w)/N in the closed domain?  N > 0."""
    if R.D == 2:
        return abs(2 * X) <= N and abs(2 * Y) <= N
    D = R.D
    M = (D + 1) * N
    return (abs(2 * X + Y) <= N
            and abs(4 * X + 2 * (D + 1) * Y) <= M
            and abs(-4 * X + 2 * (D - 1) * Y) <= M)


def round_scaled(R: RingSpec, U: int, V: int, N: int) -> tuple[int, int]:
    """Lattice point (m, n) with (U + V w)/N - (m + n w) in the half-open domain."""
    if N <= 0:
        raise ValueError("scale must be positive")
    if R.D == 2:
        return (2 * U + N) // (2 * N), (2 * V + N) // (2 * N)
    # the hexagon spans less than one row of the lattice in the w-coordinate,
    # so only the two rows n = floor(y), floor(y) + 1 can contain the answer
    n0 = V // N
    for n in (n0, n0 + 1):
        m = (2 * U + V - n * N + N) // (2 * N)
        if in_tilde_scaled(R, U - m * N, V - n * N, N):
            return m, n
    raise AssertionError(f"no lattice point found for ({U}, {V})/{N}, D={R.D}")


# ---------------------------------------------------------------------------

class QuadInt:
    """u + v*w in O_K."""

    __slots__ = ("R", "u", "v")

    def __init__(self, R: RingSpec, u: int = 0, v: int = 0):
        self.R = R
        self.u = int(u)
        self.v = int(v)

    @classmethod
    def of(cls, R: RingSpec, x) -> "QuadInt":
        if isinstance(x, QuadInt):
            if x.R != R:
                raise ValueError(f"ring mismatch: {x.R} vs {R}")
            return x
        if isinstance(x, int):
            return cls(R, x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadInt")

    def _coerce(self, other) -> "QuadInt":
        return QuadInt.of(self.R, other)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadInt(self.R, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadInt(self.R, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadInt(self.R, *mul_coords(self.R, self.u, self.v, o.u, o.v))

    __rmul__ = __mul__

    def __neg__(self):
        return QuadInt(self.R, -self.u, -self.v)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == 0 and self.u == other
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self.R == other.R and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.R.D, self.u, self.v))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def conj(self) -> "QuadInt":
        return QuadInt(self.R, *conj_coords(self.R, self.u, self.v))

    def norm(self) -> int:
        return norm_coords(self.R, self.u, self.v)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_canonical(self) -> bool:
        return self.u > 0 or (self.u == 0 and self.v > 0)

    def canonical(self) -> "QuadInt":
        """Unit multiple with first nonzero coordinate positive (0 stays 0)."""
        return self if (self.is_canonical() or not self) else -self

    def exact_div(self, other) -> "QuadInt | None":
        """Quotient self/other if it lies in O_K, else None."""
        o = self._coerce(other)
        N = o.norm()
        if N == 0:
            raise ZeroDivisionError("division by zero in O_K")
        U, V = mul_coords(self.R, self.u, self.v, *conj_coords(self.R, o.u, o.v))
        if U % N or V % N:
            return None
        return QuadInt(self.R, U // N, V // N)

    def divides(self, other) -> bool:
        return self._coerce(other).exact_div(self) is not None

    def to_complex(self) -> complex:
        return self.u + self.v * self.R.w_complex

    def __repr__(self):
        return f"QuadInt(D={self.R.D}, {self.u}, {self.v})"

    def __str__(self):
        return format_quadint(self)


def round_quotient(a: QuadInt, b: QuadInt) -> QuadInt:
    """[a/b]: the lattice point alpha with a/b - alpha in the half-open domain."""
    R = a.R
    N = b.norm()
    if N == 0:
        raise ZeroDivisionError("division by zero in O_K")
    U, V = mul_coords(R, a.u, a.v, *conj_coords(R, b.u, b.v))
    return QuadInt(R, *round_scaled(R, U, V, N))


def euclid_gcd(a: QuadInt, b: QuadInt) -> QuadInt:
    """Canonical gcd by the nearest-integer division chain."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    R = a.R
    pp, kk = R.p, R.k
    au, av, bu, bv = a.u, a.v, b.u, b.v
    last = None
    # same steps as round_quotient, on bare coordinates
    while bu or bv:
        nb = bu * bu + pp * bu * bv + kk * bv * bv
        if last is not None and nb >= last:
            raise AssertionError("Euclidean remainder norms failed to decrease")
        last = nb
        U, V = mul_coords(R, au, av, bu + pp * bv, -bv)
        m, n = round_scaled(R, U, V, nb)
        qb = mul_coords(R, m, n, bu, bv)
        au, av, bu, bv = bu, bv, au - qb[0], av - qb[1]
    return QuadInt(R, au, av).canonical()


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainPoint:
    """z = x + y*w with exact rational coordinates."""
    R: RingSpec
    x: Fraction
    y: Fraction

    @property
    def re(self) -> Fraction:
        return self.x + Fraction(self.R.p, 2) * self.y

    @property
    def im_units(self) -> Fraction:
        """Im z divided by Im w (sqrt(2) for D = 2, sqrt(D)/2 otherwise)."""
        return self.y

    def scaled(self) -> tuple[int, int, int]:
        """Integers (U, V, N), N > 0, with z = (U + V w)/N."""
        N = self.x.denominator * self.y.denominator // math.gcd(self.x.denominator, self.y.denominator)
        return int(self.x * N), int(self.y * N), N

    def to_complex(self) -> complex:
        return float(self.x) + float(self.y) * self.R.w_complex


def domain_membership(z: DomainPoint, which: str = "closed") -> bool:
    """Exact membership in the closed domain ("closed") or the half-open one ("tilde")."""
    U, V, N = z.scaled()
    if which in ("closed", "I"):
        return in_closed_scaled(z.R, U, V, N)
    if which in ("tilde", "I~"):
        return in_tilde_scaled(z.R, U, V, N)
    raise ValueError(f"unknown domain {which!r}")


def nearest_integer(z) -> QuadInt:
    """[z] for an exact field point (DomainPoint or KElem)."""
    if isinstance(z, KElem):
        return round_quotient(z.num, z.den)
    U, V, N = z.scaled()
    return QuadInt(z.R, *round_scaled(z.R, U, V, N))


# ---------------------------------------------------------------------------

class KElem:
    """Reduced canonical fraction num/den in K; build with k_reduce."""

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: QuadInt, _trusted: bool = False):
        if not _trusted:
            r = k_reduce(num, den)
            num, den = r.num, r.den
        self.num = num
        self.den = den

    @property
    def R(self) -> RingSpec:
        return self.num.R

    @property
    def reduced(self) -> bool:
        return True

    @classmethod
    def from_int(cls, R: RingSpec, x) -> "KElem":
        return cls(QuadInt.of(R, x), QuadInt(R, 1), _trusted=True)

    def height_sq(self) -> int:
        return self.den.norm()

    def _coerce(self, other) -> "KElem":
        if isinstance(other, KElem):
            if other.R != self.R:
                raise ValueError(f"ring mismatch: {other.R} vs {self.R}")
            return other
        return KElem(QuadInt.of(self.R, other), QuadInt(self.R, 1), _trusted=True)

    def __add__(self, other):
        o = self._coerce(other)
        return k_reduce(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return k_reduce(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return k_reduce(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by zero in K")
        return k_reduce(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return KElem(-self.num, self.den, _trusted=True)

    def inverse(self) -> "KElem":
        return KElem.from_int(self.R, 1) / self

    def conj(self) -> "KElem":
        return k_reduce(self.num.conj(), self.den.conj())

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, QuadInt)):
            other = self._coerce(other)
        if not isinstance(other, KElem):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.R.D, self.num.u, self.num.v, self.den.u, self.den.v))

    def key(self) -> tuple[int, int, int, int]:
        return (self.num.u, self.num.v, self.den.u, self.den.v)

    def to_point(self) -> DomainPoint:
        R = self.R
        N = self.den.norm()
        U, V = mul_coords(R, self.num.u, self.num.v, *conj_coords(R, self.den.u, self.den.v))
        return DomainPoint(R, Fraction(U, N), Fraction(V, N))

    @classmethod
    def from_point(cls, z: DomainPoint) -> "KElem":
        U, V, N = z.scaled()
        return k_reduce(QuadInt(z.R, U, V), QuadInt(z.R, N))

    def to_complex(self) -> complex:
        return self.num.to_complex() / self.den.to_complex()

    def __repr__(self):
        return f"KElem(D={self.R.D}, {format_quadint(self.num)}/{format_quadint(self.den)})"

    def __str__(self):
        return format_kelem(self)


def k_reduce(num: QuadInt, den: QuadInt) -> KElem:
    R = den.R
    num = QuadInt.of(R, num)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return KElem(QuadInt(R, 0), QuadInt(R, 1), _trusted=True)
    g = euclid_gcd(num, den)
    n, d = num.exact_div(g), den.exact_div(g)
    if not d.is_canonical():
        n, d = -n, -d
    return KElem(n, d, _trusted=True)


# ---------------------------------------------------------------------------
# text format: "u+v*w" and "num/den"

_QI = re.compile(r"^\s*([+-]?\d+)?\s*(?:([+-])\s*(\d*)\s*\*?\s*w)?\s*$")


def parse_quadint(R: RingSpec, s: str) -> QuadInt:
    s = s.strip()
    m = _QI.match(s)
    if m and s and (m.group(1) is not None or m.group(2) is not None):
        u = int(m.group(1) or 0)
        v = 0
        if m.group(2) is not None:
            v = int(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
        return QuadInt(R, u, v)
    # bare "w", "-w", "3*w"
    m2 = re.match(r"^\s*([+-]?\d*)\s*\*?\s*w\s*$", s)
    if m2:
        c = m2.group(1)
        v = -1 if c == "-" else 1 if c in ("", "+") else int(c)
        return QuadInt(R, 0, v)
    raise ValueError(f"cannot parse ring element {s!r}; expected 'u+v*w'")


def format_quadint(x: QuadInt) -> str:
    return f"{x.u}{x.v:+d}*w"


def parse_kelem(R: RingSpec, s: str) -> KElem:
    if "/" in s:
        a, b = s.split("/", 1)
        return k_reduce(parse_quadint(R, a), parse_quadint(R, b))
    return k_reduce(parse_quadint(R, s), QuadInt(R, 1))


def format_kelem(z: KElem) -> str:
    return f"{format_quadint(z.num)}/{format_quadint(z.den)}"
