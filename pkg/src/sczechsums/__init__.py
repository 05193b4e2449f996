"""Elliptic Dedekind sums over Q(sqrt(-D)), D in {2, 7, 11}, via Hurwitz continued fractions."""
__version__ = "0.1.0"
