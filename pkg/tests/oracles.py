"""Slow reference enumerations that share no code with the package.

Numbers are written r + s*sqrt(-D) and stored doubled, (2r, 2s), so both
lattices have integer coordinates.  The closed domain is the Voronoi cell
of the lattice: z belongs to it when Re(z * conj(l)) <= |l|^2 / 2 for every
nonzero lattice point l.
"""
import math
from fractions import Fraction


def doubled(D, u, v):
    """(2r, 2s) of u + v w, with w = sqrt(-2) or (1 + sqrt(-D))/2."""
    return (2 * u, 2 * v) if D == 2 else (2 * u + v, v)


def lattice(D, radius):
    return [doubled(D, u, v) for u in range(-radius, radius + 1)
            for v in range(-radius, radius + 1) if u or v]


def farey_values(D, X):
    """{a/b in the closed domain : 1 <= |b|^2 < X} as a set of exact (r, s) pairs."""
    neigh = [(l0, D * l1, l0 * l0 + D * l1 * l1) for l0, l1 in lattice(D, 2)]
    B = math.isqrt(4 * X) + 2
    # 4|x|^2 = R^2 + D S^2 for doubled coordinates (R, S)
    elems = sorted((R * R + D * S * S, R, S) for R, S in
                   (doubled(D, u, v) for u in range(-B, B + 1) for v in range(-B, B + 1)))
    vals = set()
    for M, Rb, Sb in elems:
        if M >= 4 * X:
            break
        if M < 4:
            continue
        for Ma, Ra, Sa in elems:
            # the domain sits in the unit disc, so |a| <= |b|
            if Ma > M:
                break
            # z = a conj(b) / |b|^2 = (Rn + Sn sqrt(-D)) / M
            Rn = Ra * Rb + D * Sa * Sb
            Sn = Sa * Rb - Ra * Sb
            # Re(z conj l) <= |l|^2/2 with l doubled: 4 (Rn l0 + D Sn l1) <= M |2l|^2
            if all(4 * (Rn * l0 + Sn * dl1) <= M * n2 for l0, dl1, n2 in neigh):
                vals.add((Fraction(Rn, M), Fraction(Sn, M)))
    return vals


def kelem_to_rs(z):
    """Exact (r, s) of a package KElem, via its basis coordinates."""
    p = z.to_point()
    if z.R.D == 2:
        return (p.x, p.y)
    return (p.x + p.y / 2, p.y / 2)
