"""Numerical dynamics of the Hurwitz map: geometry, level sets, Ulam operators.

Float code paths work on complex128 arrays.  The rounding [w] picks the
nearest lattice point, which is the same as the half-open rule away from the
(measure zero) cell boundaries, because I_D is the Voronoi cell of O_K.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq
from scipy.spatial import cKDTree
from scipy.special import roots_legendre

from .quad_ring import DomainPoint, KElem, QuadInt, nearest_integer, ring
from .sczech import imd


class NonConvergence(RuntimeError):
    pass


class QuadratureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# geometry

def half_height(D: int) -> float:
    """Largest |Im z| on I_D."""
    return 1 / math.sqrt(2) if D == 2 else (D + 1) / (4 * math.sqrt(D))


def domain_volume(D: int) -> float:
    return math.sqrt(2) if D == 2 else math.sqrt(D) / 2


def in_domain(D: int, z) -> np.ndarray:
    x, y = np.real(z), np.imag(z)
    c = half_height(D)
    ok = (np.abs(x) <= 0.5) & (np.abs(y) <= c)
    if D != 2:
        s = math.sqrt(D)
        ok &= (np.abs(y + x / s) <= c) & (np.abs(y - x / s) <= c)
    return ok


def nearest_lattice(D: int, w):
    """Basis coordinates (m, n) of the lattice point nearest to w (float arrays)."""
    w = np.asarray(w, dtype=np.complex128)
    if D == 2:
        return np.floor(w.real + 0.5), np.floor(w.imag / math.sqrt(2) + 0.5)
    s = math.sqrt(D)
    y = 2 * w.imag / s
    x = w.real - y / 2
    n1 = np.floor(y)
    n2 = n1 + 1
    m1 = np.floor(x + (y - n1) / 2 + 0.5)
    m2 = np.floor(x + (y - n2) / 2 + 0.5)
    om = complex(0.5, s / 2)
    d1 = np.abs(w - (m1 + n1 * om))
    d2 = np.abs(w - (m2 + n2 * om))
    pick = d1 <= d2
    return np.where(pick, m1, m2), np.where(pick, n1, n2)


def lattice_complex(D: int, m, n):
    return m + n * ring(D).w_complex


def gauss_map(D: int, z):
    """(m, n, G(z)) for nonzero z, with [1/z] = m + n w."""
    w = 1.0 / np.asarray(z, dtype=np.complex128)
    m, n = nearest_lattice(D, w)
    return m, n, w - lattice_complex(D, m, n)


def imd_coord(D: int, n):
    """(2/sqrt(D)) Im(m + n w) = 2n for D = 2, n otherwise."""
    return 2 * n if D == 2 else n


@dataclass(frozen=True)
class LevelSetId:
    """V_{r,n}: the points whose digit [1/z] is alpha = r + n w."""
    D: int
    r: int
    n: int

    @property
    def alpha(self) -> QuadInt:
        return QuadInt(ring(self.D), self.r, self.n)

    @property
    def psi_R(self):
        return self.r if self.D == 2 else self.r + self.n / 2


def psi_levels(z: DomainPoint):
    """(psi_R, psi_I): real part of [1/z] and its imaginary level (an integer)."""
    k = KElem.from_point(z)
    if k.is_zero():
        raise ValueError("psi levels are undefined at 0")
    a = nearest_integer(k.inverse())
    return Fraction(a.u) + Fraction(a.R.p * a.v, 2), a.v


def period_psi(z: KElem):
    """Psi(z) = imd([1/z] - [1/G(z)]) exactly; needs z and G(z) nonzero."""
    a1 = nearest_integer(z.inverse())
    g = z.inverse() - a1
    a2 = nearest_integer(g.inverse())
    return imd(a1 - a2)


# ---------------------------------------------------------------------------
# quadrature over I_D

def _gl(order):
    x, w = roots_legendre(order)
    return x, w


def _integrate_domain(D: int, f, panels: int, order: int) -> float:
    xg, wg = _gl(order)
    c = half_height(D)
    total = 0.0
    if D == 2:
        ex = np.linspace(-0.5, 0.5, panels + 1)
        ey = np.linspace(-c, c, panels + 1)
        X = ((ex[:-1, None] + ex[1:, None]) / 2 + (ex[1:, None] - ex[:-1, None]) / 2 * xg).ravel()
        WX = ((ex[1:, None] - ex[:-1, None]) / 2 * wg).ravel()
        Y = ((ey[:-1, None] + ey[1:, None]) / 2 + (ey[1:, None] - ey[:-1, None]) / 2 * xg).ravel()
        WY = ((ey[1:, None] - ey[:-1, None]) / 2 * wg).ravel()
        vals = f(X[:, None] + 1j * Y[None, :])
        return float(WX @ vals @ WY)
    s = math.sqrt(D)
    # split at x = 0 where the half-height c - |x|/sqrt(D) has a kink;
    # map y = h(x) * eta with eta in [-1, 1]
    for lo, hi in ((-0.5, 0.0), (0.0, 0.5)):
        ex = np.linspace(lo, hi, panels + 1)
        X = ((ex[:-1, None] + ex[1:, None]) / 2 + (ex[1:, None] - ex[:-1, None]) / 2 * xg).ravel()
        WX = ((ex[1:, None] - ex[:-1, None]) / 2 * wg).ravel()
        H = c - np.abs(X) / s
        ee = np.linspace(-1, 1, panels + 1)
        E = ((ee[:-1, None] + ee[1:, None]) / 2 + (ee[1:, None] - ee[:-1, None]) / 2 * xg).ravel()
        WE = ((ee[1:, None] - ee[:-1, None]) / 2 * wg).ravel()
        vals = f(X[:, None] + 1j * H[:, None] * E[None, :])
        total += float((WX * H) @ vals @ WE)
    return total


def branch_image_volume(D: int, alpha, order: int = 24, rtol: float = 1e-12,
                        max_panels: int = 64) -> float:
    """Integral over I_D of |z + alpha|^-4 (the area of V_alpha up to O(|alpha|^-6) effects)."""
    if isinstance(alpha, QuadInt):
        if alpha.norm() < 2:
            raise ValueError("need norm(alpha) >= 2")
        a = complex(alpha.to_complex())
    else:
        a = complex(alpha)
    f = lambda z: np.abs(z + a) ** -4.0
    panels = 2
    prev = _integrate_domain(D, f, panels, order)
    while panels < max_panels:
        panels *= 2
        cur = _integrate_domain(D, f, panels, order)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    raise QuadratureError(f"branch volume did not converge: last change {abs(cur - prev) / abs(cur):.2e}")


def level_sum(D: int, n: int, R: int = 10 ** 6) -> dict:
    """Truncated lattice sums over one imaginary level and their closed forms.

    D = 2: sum_r (r^2 + 2n^2)^-2 against pi/(4 sqrt2 n^3).
    D = 7, 11: sum_r [(r + n/2)^2 + n^2 D/4]^-2 split at |2r + n| = nD into
    a tail and a central part; terms on the split line count half in each.
    """
    if n < 1:
        raise ValueError("n >= 1")
    r = np.arange(-R, R + 1, dtype=np.float64)
    if D == 2:
        s = float(np.sum(1.0 / (r * r + 2.0 * n * n) ** 2))
        comp = math.pi / (4 * math.sqrt(2) * n ** 3)
        return {"D": D, "n": n, "R": R, "sum": s, "closed_form": comp,
                "rel_err": abs(s - comp) / comp}
    u = r + n / 2
    terms = 1.0 / (u * u + n * n * D / 4) ** 2
    k = np.abs(2 * np.arange(-R, R + 1) + n)
    edge = k == n * D
    tail = float(np.sum(terms[k > n * D]) + 0.5 * np.sum(terms[edge]))
    central = float(np.sum(terms[k < n * D]) + 0.5 * np.sum(terms[edge]))
    at = math.atan(math.sqrt(D))
    c_tail = ((4 * math.pi - 8 * at) / D ** 1.5 - 8 / (D * (D + 1))) / n ** 3
    c_central = (8 / (D * (D + 1)) + 8 * at / D ** 1.5) / n ** 3
    return {"D": D, "n": n, "R": R,
            "tail": tail, "tail_closed_form": c_tail, "tail_rel_err": abs(tail - c_tail) / c_tail,
            "central": central, "central_closed_form": c_central,
            "central_rel_err": abs(central - c_central) / c_central,
            "edge_terms": int(edge.sum())}


def tail_mass_bound(D: int, A: float) -> float:
    """sum over alpha with norm(alpha) > A of vol(I_D)/norm(alpha)^2."""
    Rk = ring(D)
    M = int(50 * A)
    vmax = math.isqrt(4 * M // (4 * Rk.k - Rk.p)) + 1
    total = 0.0
    for v in range(-vmax, vmax + 1):
        uc = -Rk.p * v / 2
        half = math.sqrt(M) + 1
        u = np.arange(math.floor(uc - half), math.ceil(uc + half) + 1, dtype=np.float64)
        N = u * u + Rk.p * u * v + Rk.k * v * v
        sel = (N > A) & (N <= M)
        total += float(np.sum(1.0 / N[sel] ** 2))
    # lattice points have density 1/vol, so the tail beyond M is ~ pi/(vol M)
    total += math.pi / (domain_volume(D) * M)
    return domain_volume(D) * total


# ---------------------------------------------------------------------------
# Ulam discretisation

@dataclass
class UlamGrid:
    D: int
    g: int
    hx: float
    hy: float
    c: float
    area: np.ndarray          # clipped area per cell (estimated from samples)
    n_in: np.ndarray          # samples per cell inside I_D
    remap: np.ndarray         # cell id -> active cell id (inactive cells go to a neighbour)

    @property
    def ncell(self):
        return self.g * self.g

    def cell_of(self, w):
        ix = np.clip(((w.real + 0.5) / self.hx).astype(np.int64), 0, self.g - 1)
        iy = np.clip(((w.imag + self.c) / self.hy).astype(np.int64), 0, self.g - 1)
        return self.remap[ix * self.g + iy]

    def centers(self):
        ix, iy = np.meshgrid(np.arange(self.g), np.arange(self.g), indexing="ij")
        return ((-0.5 + (ix + 0.5) * self.hx) + 1j * (-self.c + (iy + 0.5) * self.hy)).ravel()

    def reflect_index(self, kind: str) -> np.ndarray:
        ix, iy = np.meshgrid(np.arange(self.g), np.arange(self.g), indexing="ij")
        if kind == "neg":
            jx, jy = self.g - 1 - ix, self.g - 1 - iy
        elif kind == "conj":
            jx, jy = ix, self.g - 1 - iy
        else:
            raise ValueError(kind)
        return (jx * self.g + jy).ravel()


@dataclass
class UlamOperator:
    grid: UlamGrid
    matrix: sp.csr_matrix
    s: float = 1.0
    t: float = 0.0
    steps: int = 1
    branch_cutoff: float = 400.0
    tail: str = "lump"
    seed: int = 0
    samples_per_cell: int = 0
    escape_rows: np.ndarray | None = None   # per-cell fraction of samples with norm([1/z]) > cutoff
    level_hist: np.ndarray | None = None     # per-cell counts of psi_I, columns -nmax..nmax, overflow
    nmax: int = 0
    logT_sum: np.ndarray | None = None       # per-cell sum of log T over samples
    samples: dict | None = None
    base: "UlamOperator | None" = None

    @property
    def D(self):
        return self.grid.D

    def escape_area(self) -> float:
        """Lebesgue area of the samples whose first digit exceeds the cutoff."""
        return float(np.sum(self.escape_rows * self.grid.area))

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()


@dataclass
class DensityEstimate:
    grid: UlamGrid
    mass: np.ndarray                  # pi_i, sums to 1
    source: UlamOperator | None = None

    @property
    def density(self) -> np.ndarray:
        out = np.zeros_like(self.mass)
        ok = self.grid.area > 0
        out[ok] = self.mass[ok] / self.grid.area[ok]
        return out

    def integral(self) -> float:
        return float(np.sum(self.mass))


def _row_samples(D, g, ix, k, seed, hx, hy, c):
    rng = np.random.default_rng([seed, ix])
    sx, sy = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    sx, sy = sx.ravel(), sy.ravel()
    iy = np.arange(g)
    X = -0.5 + (ix + (sx[None, :] + rng.random((g, k * k))) / k) * hx
    Y = -c + (iy[:, None] + (sy[None, :] + rng.random((g, k * k))) / k) * hy
    z = (X + 1j * Y).ravel()
    cell = np.repeat(ix * g + iy, k * k)
    return z, cell


def _make_grid(D, g, k, seed):
    c = half_height(D)
    hx, hy = 1.0 / g, 2 * c / g
    n_in = np.zeros(g * g, np.int64)
    for ix in range(g):
        z, cell = _row_samples(D, g, ix, k, seed, hx, hy, c)
        n_in += np.bincount(cell, weights=in_domain(D, z) & (z != 0), minlength=g * g).astype(np.int64)
    area = n_in / (k * k) * hx * hy
    active = n_in > 0
    remap = np.arange(g * g)
    if not active.all():
        ctr_x, ctr_y = np.meshgrid(np.arange(g), np.arange(g), indexing="ij")
        ctr = np.stack([ctr_x.ravel(), ctr_y.ravel()], 1)
        act = np.flatnonzero(active)
        tree = cKDTree(ctr[act])
        _, j = tree.query(ctr[~active])
        remap[~active] = act[j]
    return UlamGrid(D, g, hx, hy, c, area, n_in, remap)


def ulam_build(D: int, grid_g: int = 128, cutoff_A: float = 400, samples_per_cell: int = 2025,
               seed: int = 0, tail: str = "lump", keep_samples: bool | None = None,
               nmax: int = 64) -> UlamOperator:
    """Stratified Monte-Carlo Ulam matrix of the Hurwitz map on a g x g grid.

    Each cell gets k x k jittered samples (k = isqrt(samples_per_cell)), one RNG
    stream per grid column.  A sample whose digit has norm above the cutoff is
    counted as escape mass; with tail="lump" it still contributes its true
    transition, with tail="drop" it is removed (sub-stochastic rows).
    """
    ring(D)
    if grid_g < 16:
        raise ValueError("grid_g >= 16")
    if cutoff_A < 20:
        raise ValueError("cutoff_A >= 20")
    if tail not in ("lump", "drop"):
        raise ValueError("tail must be 'lump' or 'drop'")
    k = max(1, math.isqrt(samples_per_cell))
    g = grid_g
    grid = _make_grid(D, g, k, seed)
    if keep_samples is None:
        keep_samples = g * g * k * k <= 8_000_000
    Rk = ring(D)
    ncell = g * g
    esc = np.zeros(ncell)
    hist = np.zeros((ncell, 2 * nmax + 2))
    logT = np.zeros(ncell)
    M = sp.csr_matrix((ncell, ncell))
    keep = {key: [] for key in ("src", "d1", "d2", "psi1", "psi2", "logT", "big1", "big2")}
    inv_n = np.zeros(ncell)
    inv_n[grid.n_in > 0] = 1.0 / grid.n_in[grid.n_in > 0]
    step = max(1, 2_000_000 // (g * k * k))
    for ix0 in range(0, g, step):
        zs, cs = [], []
        for ix in range(ix0, min(g, ix0 + step)):
            z, cell = _row_samples(D, g, ix, k, seed, grid.hx, grid.hy, grid.c)
            ok = in_domain(D, z) & (z != 0)
            zs.append(z[ok])
            cs.append(cell[ok])
        z, src = np.concatenate(zs), np.concatenate(cs)
        m1, n1, gz = gauss_map(D, z)
        d1 = grid.cell_of(gz)
        N1 = m1 * m1 + Rk.p * m1 * n1 + Rk.k * n1 * n1
        big1 = N1 > cutoff_A
        with np.errstate(divide="ignore", invalid="ignore"):
            m2, n2, g2 = gauss_map(D, np.where(gz == 0, 1.0, gz))
        g2 = np.where(gz == 0, 0.0, g2)
        lt = 4 * np.log(np.abs(z)) + 4 * np.log(np.where(gz == 0, 1e-300, np.abs(gz)))
        w = inv_n[src]
        use = ~big1 if tail == "drop" else np.ones_like(big1)
        M = M + sp.csr_matrix((w[use], (src[use], d1[use])), shape=(ncell, ncell))
        esc += np.bincount(src, weights=big1 * w, minlength=ncell)
        col = np.where(np.abs(n1) > nmax, 2 * nmax + 1, n1 + nmax).astype(np.int64)
        hist += np.bincount(src * (2 * nmax + 2) + col,
                            minlength=ncell * (2 * nmax + 2)).reshape(ncell, -1)
        logT += np.bincount(src, weights=lt, minlength=ncell)
        if keep_samples:
            N2 = m2 * m2 + Rk.p * m2 * n2 + Rk.k * n2 * n2
            keep["src"].append(src.astype(np.int32))
            keep["d1"].append(d1.astype(np.int32))
            keep["d2"].append(grid.cell_of(g2).astype(np.int32))
            keep["psi1"].append(imd_coord(D, n1).astype(np.int64))
            keep["psi2"].append(imd_coord(D, n2).astype(np.int64))
            keep["logT"].append(lt)
            keep["big1"].append(big1)
            keep["big2"].append(N2 > cutoff_A)
    samples = {kk: np.concatenate(v) for kk, v in keep.items()} if keep_samples else None
    return UlamOperator(grid=grid, matrix=M.tocsr(), s=1.0, t=0.0, steps=1,
                        branch_cutoff=cutoff_A, tail=tail, seed=seed,
                        samples_per_cell=k * k, escape_rows=esc, level_hist=hist,
                        nmax=nmax, logT_sum=logT, samples=samples)


class _TwistCache:
    """Sorted (src, dst) structure so each (s, t) only re-weights and reduces."""

    def __init__(self, base: UlamOperator):
        smp = base.samples
        ncell = base.grid.ncell
        use = np.ones(smp["src"].shape[0], bool)
        if base.tail == "drop":
            use = ~(smp["big1"] | smp["big2"])
        src, dst = smp["src"][use].astype(np.int64), smp["d2"][use].astype(np.int64)
        key = src * ncell + dst
        order = np.argsort(key, kind="stable")
        ks = key[order]
        starts = np.flatnonzero(np.r_[True, ks[1:] != ks[:-1]])
        self.order = order
        self.starts = starts
        self.indices = (ks[starts] % ncell).astype(np.int32)
        rows = ks[starts] // ncell
        self.indptr = np.r_[0, np.cumsum(np.bincount(rows, minlength=ncell))].astype(np.int64)
        inv_n = np.zeros(ncell)
        inv_n[base.grid.n_in > 0] = 1.0 / base.grid.n_in[base.grid.n_in > 0]
        self.w0 = inv_n[src][order]
        self.logT = smp["logT"][use][order]
        self.psi = (smp["psi1"][use] - smp["psi2"][use])[order].astype(np.float64)
        self.shape = (ncell, ncell)

    def matrix(self, s, t):
        if t == 0:
            w = self.w0 * np.exp((s - 1) * self.logT)
        else:
            w = self.w0 * np.exp((s - 1) * self.logT + 1j * t * self.psi)
        data = np.add.reduceat(w, self.starts)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=self.shape)


def _twist_cache(base: UlamOperator) -> _TwistCache:
    if base.samples is None:
        raise ValueError("the base operator was built without keep_samples")
    cache = getattr(base, "_twist", None)
    if cache is None:
        cache = _TwistCache(base)
        base._twist = cache
    return cache


def ulam_twisted(base: UlamOperator, s: float, t: float) -> UlamOperator:
    """Ulam matrix of K_{s,t} f = L^2[g_{s,t} f], g_{s,t} = exp(i t Psi) T^(s-1), from the base samples."""
    if abs(s - 1) > 0.2 or abs(t) > 0.5:
        raise ValueError("need |s - 1| <= 0.2 and |t| <= 0.5")
    M = _twist_cache(base).matrix(s, t)
    return UlamOperator(grid=base.grid, matrix=M, s=s, t=t, steps=2,
                        branch_cutoff=base.branch_cutoff, tail=base.tail, seed=base.seed,
                        samples_per_cell=base.samples_per_cell, base=base)


def _power(M: sp.csr_matrix, p0: np.ndarray, tol: float, maxiter: int):
    MT = M.T.tocsr()
    p = p0 / np.linalg.norm(p0)
    lam = 0.0
    for it in range(maxiter):
        q = MT @ p
        lam = np.vdot(p, q) / np.vdot(p, p)
        res = np.linalg.norm(q - lam * p)
        nq = np.linalg.norm(q)
        if nq == 0:
            raise NonConvergence("iteration collapsed to zero")
        # fix the phase so that the total mass is real and positive
        tot = q.sum()
        phase = tot / abs(tot) if abs(tot) > 0 else 1.0
        p = q / (nq * phase)
        if res <= tol * abs(lam):
            return lam, p, it + 1
    raise NonConvergence(f"power iteration: residual {res:.3e} after {maxiter} steps")


def leading_eigen(op: UlamOperator, tol: float = 1e-10, maxiter: int = 5000, p0=None):
    """Dominant eigenvalue (largest modulus) and its left eigenvector as a density."""
    if p0 is None:
        p0 = op.grid.area.astype(np.complex128 if np.iscomplexobj(op.matrix.data) else np.float64)
    lam, p, _ = _power(op.matrix, np.asarray(p0), tol, maxiter)
    mass = np.real(p)
    mass = np.where(mass < 0, 0.0, mass)
    mass = mass / mass.sum()
    if not np.iscomplexobj(op.matrix.data):
        lam = float(np.real(lam))
    return lam, DensityEstimate(op.grid, mass, op)


def symmetry_defects(density: DensityEstimate) -> dict:
    m = density.mass
    return {kind: float(np.sum(np.abs(m - m[density.grid.reflect_index(kind)])))
            for kind in ("neg", "conj")}


def _source(density: DensityEstimate) -> UlamOperator:
    op = density.source
    if op is None:
        raise ValueError("density has no source operator")
    return op.base if op.base is not None else op


def a_constant(density: DensityEstimate) -> float:
    """Integral of log T against the invariant measure, T(z) = |z G(z)|^4."""
    op = _source(density)
    g = op.grid
    mean = np.zeros(g.ncell)
    ok = g.n_in > 0
    mean[ok] = op.logT_sum[ok] / g.n_in[ok]
    return float(density.mass @ mean)


def osc_integral(t: float, density: DensityEstimate, variant: str = "Psi") -> complex:
    """Integral of exp(i t Psi) - 1 against mu; variant "psi1" uses the first digit only."""
    op = _source(density)
    smp = op.samples
    if smp is None:
        raise ValueError("osc_integral needs an operator built with keep_samples")
    if variant == "Psi":
        x = smp["psi1"] - smp["psi2"]
    elif variant == "psi1":
        x = smp["psi1"]
    else:
        raise ValueError(variant)
    e = np.exp(1j * t * x.astype(np.float64)) - 1.0
    ncell = op.grid.ncell
    src = smp["src"]
    re = np.bincount(src, weights=e.real, minlength=ncell)
    im = np.bincount(src, weights=e.imag, minlength=ncell)
    ok = op.grid.n_in > 0
    inv = np.zeros(ncell)
    inv[ok] = 1.0 / op.grid.n_in[ok]
    return complex(density.mass @ (re * inv) + 1j * (density.mass @ (im * inv)))


def mu_level(density: DensityEstimate, n: int) -> float:
    """mu(V_n) for the imaginary level n of the first digit."""
    op = _source(density)
    if abs(n) > op.nmax:
        raise ValueError(f"|n| > nmax = {op.nmax}")
    g = op.grid
    ok = g.n_in > 0
    frac = np.zeros(g.ncell)
    frac[ok] = op.level_hist[ok, n + op.nmax] / g.n_in[ok]
    return float(density.mass @ frac)


def lambda_st(base: UlamOperator, s: float, t: float, p0=None, tol: float = 1e-11):
    lam, _ = leading_eigen(ulam_twisted(base, s, t), tol=tol, p0=p0)
    return complex(lam)


@dataclass
class S0Result:
    t: float
    s0: float
    lam_imag: float
    flagged: bool
    evaluations: list = field(default_factory=list)


def s0_solve(base: UlamOperator, t: float, bracket=(0.85, 1.15), xtol: float = 1e-9,
             imag_tol: float = 1e-3) -> S0Result:
    """Root s of Re lambda(s, t) = 1 with a bracketing solver; |Im lambda| is monitored."""
    if abs(t) > 0.3:
        raise ValueError("|t| <= 0.3")
    evals = []
    p0 = None
    cache = {}

    def f(s):
        if s not in cache:
            cache[s] = lambda_st(base, s, t, p0=p0)
            evals.append((s, cache[s]))
        return cache[s].real - 1.0

    f1 = f(1.0)
    if t == 0 and abs(f1) < 1e-9:
        return S0Result(t, 1.0, 0.0, False, evals)
    lo, hi = bracket
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise NonConvergence(f"no sign change of Re lambda - 1 on [{lo}, {hi}]: {flo:.3e}, {fhi:.3e}")
    # 1.0 sits inside the bracket; use the half that holds the sign change
    if flo * f1 <= 0:
        hi = 1.0
    else:
        lo = 1.0
    s0 = brentq(f, lo, hi, xtol=xtol)
    lam = lambda_st(base, s0, t)
    flagged = abs(lam.imag) > imag_tol
    return S0Result(t, float(s0), float(lam.imag), bool(flagged), evals)
