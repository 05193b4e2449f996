"""Enumeration of the Farey sets K(X) = {a/b in I_D : 1 <= |b|^2 < X}.

Large runs use a vectorised integer kernel: for every candidate numerator a of
a canonical denominator b it runs the Hurwitz division chain on (a, b) in
lockstep, which gives coprimality (the last nonzero remainder is the gcd), the
length, the cost S and the exact value of D~ in one pass.  Integers stay in
int64; coordinates are bounded by |b|^2 so this is safe far beyond desk scale.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .quad_ring import KElem, QuadInt, RingSpec, ring

MAX_X = 10 ** 7


@dataclass(frozen=True)
class FareyQuery:
    D: int
    X: int
    include_zero: bool = True
    boundary: str = "closed"

    def __post_init__(self):
        ring(self.D)
        if self.X < 1:
            raise ValueError("X must be >= 1")
        if self.X > MAX_X:
            raise ValueError(f"X > {MAX_X} is outside the int64-safe range")
        if self.boundary not in ("closed", "tilde"):
            raise ValueError("boundary must be 'closed' or 'tilde'")


def enumerate_denominators(D: int, X: int) -> list[QuadInt]:
    """Canonical b with 1 <= |b|^2 < X, ordered by (norm, u, v)."""
    R = ring(D)
    out = []
    vmax = math.isqrt(4 * X // (4 * R.k - R.p)) + 1
    for v in range(-vmax, vmax + 1):
        # |u + p v/2| <= sqrt(X)
        c = R.p * v
        lo = (-c - 2 * math.isqrt(X) - 2) // 2
        hi = (-c + 2 * math.isqrt(X) + 2) // 2 + 1
        for u in range(lo, hi + 1):
            b = QuadInt(R, u, v)
            if b.is_canonical() and 1 <= b.norm() < X:
                out.append(b)
    out.sort(key=lambda b: (b.norm(), b.u, b.v))
    return out


# ---------------------------------------------------------------------------
# vectorised integer kernels

def vmul(R: RingSpec, a, b, c, d):
    bd = b * d
    return a * c - R.k * bd, a * d + b * c + R.p * bd


def vconj(R: RingSpec, u, v):
    return u + R.p * v, -v


def vnorm(R: RingSpec, u, v):
    return u * u + R.p * u * v + R.k * v * v


def vin_closed(R: RingSpec, X, Y, N):
    if R.D == 2:
        return (np.abs(2 * X) <= N) & (np.abs(2 * Y) <= N)
    D = R.D
    M = (D + 1) * N
    return ((np.abs(2 * X + Y) <= N)
            & (np.abs(4 * X + 2 * (D + 1) * Y) <= M)
            & (np.abs(-4 * X + 2 * (D - 1) * Y) <= M))


def vin_tilde(R: RingSpec, X, Y, N):
    if R.D == 2:
        return (-N <= 2 * X) & (2 * X < N) & (-N <= 2 * Y) & (2 * Y < N)
    D = R.D
    M = (D + 1) * N
    e1 = 2 * X + Y
    e2 = 4 * X + 2 * (D + 1) * Y
    e3 = -4 * X + 2 * (D - 1) * Y
    return (-N <= e1) & (e1 < N) & (-M <= e2) & (e2 < M) & (-M < e3) & (e3 <= M)


def vround(R: RingSpec, U, V, N):
    """Vectorised round_scaled: lattice point nearest (U + V w)/N in the half-open domain."""
    if R.D == 2:
        return (2 * U + N) // (2 * N), (2 * V + N) // (2 * N)
    n = V // N
    m = (2 * U + V - n * N + N) // (2 * N)
    ok = vin_tilde(R, U - m * N, V - n * N, N)
    n2 = n + 1
    m2 = (2 * U + V - n2 * N + N) // (2 * N)
    n = np.where(ok, n, n2)
    m = np.where(ok, m, m2)
    return m, n


def vimd(R: RingSpec, v):
    return 2 * v if R.D == 2 else v


def cf_batch(R: RingSpec, au, av, bu, bv):
    """Hurwitz chain for the fractions a/b (b != 0), elementwise.

    Returns dict with gcd norm, length ell, cost S (integer), the numerator
    of D~ over |b|^2 (exact when gcd is a unit) and the integer part a0.
    """
    au, av, bu, bv = (np.asarray(x, dtype=np.int64) for x in (au, av, bu, bv))
    Nb = vnorm(R, bu, bv)
    U, V = vmul(R, au, av, *vconj(R, bu, bv))
    m0, n0 = vround(R, U, V, Nb)
    tu, tv = vmul(R, m0, n0, bu, bv)
    ru, rv = au - tu, av - tv                     # z - a0 = r/b
    size = au.shape[0]
    num_u, num_v = ru.copy(), rv.copy()
    den_u, den_v = bu.copy(), bv.copy()
    qpu, qpv = np.zeros(size, np.int64), np.zeros(size, np.int64)
    qcu, qcv = np.ones(size, np.int64), np.zeros(size, np.int64)
    S = np.zeros(size, np.int64)
    ell = np.zeros(size, np.int64)
    live = np.flatnonzero((num_u != 0) | (num_v != 0))
    sign = 1
    while live.size:
        nu, nv, du, dv = num_u[live], num_v[live], den_u[live], den_v[live]
        Nn = vnorm(R, nu, nv)
        U, V = vmul(R, du, dv, *vconj(R, nu, nv))
        au_, av_ = vround(R, U, V, Nn)           # digit [den/num]
        pu, pv = vmul(R, au_, av_, nu, nv)
        num_u[live], num_v[live] = du - pu, dv - pv
        den_u[live], den_v[live] = nu, nv
        S[live] += sign * vimd(R, av_)
        ell[live] += 1
        # q_j = q_{j-1} a_j + q_{j-2}
        cu, cv = qcu[live], qcv[live]
        xu, xv = vmul(R, cu, cv, au_, av_)
        qcu[live], qcv[live] = xu + qpu[live], xv + qpv[live]
        qpu[live], qpv[live] = cu, cv
        sign = -sign
        live = live[(num_u[live] != 0) | (num_v[live] != 0)]
    gnorm = vnorm(R, den_u, den_v)
    # D~ |b|^2 = imd(r conj b) + (-1)^(n+1) imd(q_{n-1} conj q_n) + |b|^2 S
    _, zv = vmul(R, ru, rv, *vconj(R, bu, bv))
    _, tv2 = vmul(R, qpu, qpv, *vconj(R, qcu, qcv))
    par = np.where(ell % 2 == 1, 1, -1)
    dt_num = vimd(R, zv) + par * vimd(R, tv2) + Nb * S
    # (q_n = +-b only when a/b is reduced; the caller filters on gnorm == 1)
    return {"gcd_norm": gnorm, "ell": ell, "S": S, "dt_num": dt_num,
            "a0_u": m0, "a0_v": n0, "qn_u": qcu, "qn_v": qcv}


# ---------------------------------------------------------------------------

def _numerator_box(R: RingSpec, N: int) -> tuple[int, int]:
    """Integer bounds (Bu, Bv) with b*I_D inside |a_u| <= Bu, |a_v| <= Bv."""
    if R.D == 2:
        # |a|^2 <= 3N/4 and |a|^2 = a_u^2 + 2 a_v^2
        return math.isqrt(3 * N // 4) + 1, math.isqrt(3 * N // 8) + 1
    D = R.D
    # circumradius^2 of the hexagon is (D+1)^2/(16D); |a_v| sqrt(D)/2 <= |a|
    Bv = math.isqrt((D + 1) ** 2 * N // (4 * D * D)) + 1
    Bu = math.isqrt((D + 1) ** 2 * N // (16 * D)) + 1 + Bv // 2 + 1
    return Bu, Bv


def _candidates(R: RingSpec, dens: list[QuadInt]):
    AU, AV, BU, BV = [], [], [], []
    for b in dens:
        Bu, Bv = _numerator_box(R, b.norm())
        gu, gv = np.meshgrid(np.arange(-Bu, Bu + 1, dtype=np.int64),
                             np.arange(-Bv, Bv + 1, dtype=np.int64), indexing="ij")
        AU.append(gu.ravel())
        AV.append(gv.ravel())
        BU.append(np.full(gu.size, b.u, np.int64))
        BV.append(np.full(gu.size, b.v, np.int64))
    if not AU:
        z = np.zeros(0, np.int64)
        return z, z, z, z
    return np.concatenate(AU), np.concatenate(AV), np.concatenate(BU), np.concatenate(BV)


COLUMNS = ("a_u", "a_v", "b_u", "b_v", "normsq_b", "ell", "S", "dt_num")


@dataclass
class FareyTable:
    """Columnar Farey set with exact S and D~ = dt_num / normsq_b."""
    D: int
    X: int
    cols: dict = field(default_factory=dict)
    include_zero: bool = True

    def __len__(self):
        return int(self.cols["a_u"].shape[0])

    def __getitem__(self, name):
        return self.cols[name]

    def subset(self, mask) -> "FareyTable":
        return FareyTable(self.D, self.X, {k: v[mask] for k, v in self.cols.items()},
                          self.include_zero)

    def below(self, X: int) -> "FareyTable":
        """Restriction to |b|^2 < X (a Farey set of smaller height)."""
        t = self.subset(self.cols["normsq_b"] < X)
        t.X = X
        return t

    def dtilde(self) -> np.ndarray:
        return self.cols["dt_num"] / self.cols["normsq_b"]

    def S(self) -> np.ndarray:
        return self.cols["S"].astype(np.float64)

    def point_coords(self):
        """(U, V, N) with z = (U + V w)/N."""
        R = ring(self.D)
        U, V = vmul(R, self["a_u"], self["a_v"], *vconj(R, self["b_u"], self["b_v"]))
        return U, V, self["normsq_b"]

    def b2_mask(self) -> np.ndarray:
        """Points of the strip 0 <= Re < 1, 0 < Im <= 1/sqrt2 after translation by O_K (D = 2).

        Inside I_2 that is -1/2 <= Re < 1/2 and 0 < Im, which picks one
        representative of each class mod 1 in the upper half of the domain.
        """
        if self.D != 2:
            raise ValueError("the strip filter is defined for D = 2")
        U, V, N = self.point_coords()
        return (V > 0) & (2 * V <= N) & (-N <= 2 * U) & (2 * U < N)

    def kelems(self):
        R = ring(self.D)
        for au, av, bu, bv in zip(self["a_u"].tolist(), self["a_v"].tolist(),
                                  self["b_u"].tolist(), self["b_v"].tolist()):
            yield KElem(QuadInt(R, au, av), QuadInt(R, bu, bv), _trusted=True)

    def to_csv(self, path):
        g = np.gcd(self["dt_num"], self["normsq_b"])
        cols = [self["a_u"], self["a_v"], self["b_u"], self["b_v"], self["normsq_b"],
                self["ell"], self["S"], np.ones(len(self), np.int64),
                self["dt_num"] // g, self["normsq_b"] // g]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a_u", "a_v", "b_u", "b_v", "normsq_b", "ell",
                        "S_num", "S_den", "Dt_num", "Dt_den"])
            for row in zip(*(c.tolist() for c in cols)):
                w.writerow(row)


def _table_block(D: int, dens_uv: list[tuple[int, int]], boundary: str, chunk: int):
    R = ring(D)
    dens = [QuadInt(R, u, v) for u, v in dens_uv]
    parts = {k: [] for k in COLUMNS}
    i = 0
    while i < len(dens):
        # group denominators so that each batch holds about `chunk` candidates
        j, size = i, 0
        while j < len(dens) and (size == 0 or size < chunk):
            Bu, Bv = _numerator_box(R, dens[j].norm())
            size += (2 * Bu + 1) * (2 * Bv + 1)
            j += 1
        au, av, bu, bv = _candidates(R, dens[i:j])
        i = j
        U, V = vmul(R, au, av, *vconj(R, bu, bv))
        Nb = vnorm(R, bu, bv)
        inside = vin_closed(R, U, V, Nb) if boundary == "closed" else vin_tilde(R, U, V, Nb)
        au, av, bu, bv = au[inside], av[inside], bu[inside], bv[inside]
        res = cf_batch(R, au, av, bu, bv)
        keep = res["gcd_norm"] == 1
        parts["a_u"].append(au[keep])
        parts["a_v"].append(av[keep])
        parts["b_u"].append(bu[keep])
        parts["b_v"].append(bv[keep])
        parts["normsq_b"].append(vnorm(R, bu[keep], bv[keep]))
        for k in ("ell", "S", "dt_num"):
            parts[k].append(res[k][keep])
    return {k: (np.concatenate(v) if v else np.zeros(0, np.int64)) for k, v in parts.items()}


def farey_table(q: FareyQuery, workers: int = 1, chunk: int = 400_000) -> FareyTable:
    """All of K(X) with exact statistics, in deterministic order."""
    dens = [(b.u, b.v) for b in enumerate_denominators(q.D, q.X)]
    if workers <= 1 or len(dens) < 2 * workers:
        cols = _table_block(q.D, dens, q.boundary, chunk)
    else:
        # contiguous blocks, balanced by total norm (candidate count ~ norm)
        R = ring(q.D)
        w = np.cumsum([QuadInt(R, u, v).norm() for u, v in dens])
        cuts = np.searchsorted(w, np.linspace(0, w[-1], workers + 1)[1:-1])
        blocks = np.split(np.arange(len(dens)), cuts)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_table_block, q.D, [dens[i] for i in blk], q.boundary, chunk)
                    for blk in blocks]
            outs = [f.result() for f in futs]
        cols = {k: np.concatenate([o[k] for o in outs]) for k in COLUMNS}
    t = FareyTable(q.D, q.X, cols, q.include_zero)
    if not q.include_zero:
        t = t.subset((t["a_u"] != 0) | (t["a_v"] != 0))
    return t


def enumerate_farey(q: FareyQuery):
    """Stream K(X) as reduced canonical KElem."""
    return farey_table(q).kelems()


def count_farey(q: FareyQuery, chunk: int = 400_000) -> int:
    R = ring(q.D)
    total = 0
    dens = enumerate_denominators(q.D, q.X)
    # one denominator batch at a time keeps memory flat
    i = 0
    while i < len(dens):
        j, size = i, 0
        while j < len(dens) and (size == 0 or size < chunk):
            Bu, Bv = _numerator_box(R, dens[j].norm())
            size += (2 * Bu + 1) * (2 * Bv + 1)
            j += 1
        au, av, bu, bv = _candidates(R, dens[i:j])
        i = j
        U, V = vmul(R, au, av, *vconj(R, bu, bv))
        Nb = vnorm(R, bu, bv)
        inside = vin_closed(R, U, V, Nb) if q.boundary == "closed" else vin_tilde(R, U, V, Nb)
        res = cf_batch(R, au[inside], av[inside], bu[inside], bv[inside])
        total += int(np.count_nonzero(res["gcd_norm"] == 1))
    return total - (0 if q.include_zero else 1)
