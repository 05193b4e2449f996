"""Shared hypothesis strategies for ring and field elements."""
from fractions import Fraction

from hypothesis import assume, strategies as st

from sczechsums.quad_ring import DomainPoint, QuadInt, k_reduce, ring

Ds = st.sampled_from([2, 7, 11])


@st.composite
def quadints(draw, D=None, bound=60, nonzero=False):
    D = draw(Ds) if D is None else D
    u = draw(st.integers(-bound, bound))
    v = draw(st.integers(-bound, bound))
    if nonzero:
        assume(u or v)
    return QuadInt(ring(D), u, v)


@st.composite
def pairs(draw, bound=60, nonzero=True):
    D = draw(Ds)
    return draw(quadints(D, bound, nonzero)), draw(quadints(D, bound, nonzero))


@st.composite
def points(draw, D=None, span=4, maxden=12):
    """Rational points x + y w with small denominators, so domain edges are hit often."""
    D = draw(Ds) if D is None else D
    n = draw(st.integers(1, maxden))
    x = Fraction(draw(st.integers(-span * n, span * n)), n)
    m = draw(st.integers(1, maxden))
    y = Fraction(draw(st.integers(-span * m, span * m)), m)
    return DomainPoint(ring(D), x, y)


@st.composite
def kelems(draw, D=None, bound=40):
    D = draw(Ds) if D is None else D
    a = draw(quadints(D, bound))
    b = draw(quadints(D, bound, nonzero=True))
    return k_reduce(a, b)
