"""Command-line entry point: sczechsums <subcommand> ...

Every run prints one JSON object on stdout (and to --json PATH when given)
holding the full configuration, seed, git revision and wall time.  Failures
print a JSON error object on stderr and exit with

    2  bad configuration or unwritable output
    3  contract violation (e.g. a nonzero reciprocity defect)
    4  numerical non-convergence
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import subprocess
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (NonConvergence, QuadratureError, a_constant, domain_volume, leading_eigen,
                       level_sum, mu_level, osc_integral, s0_solve, symmetry_defects,
                       tail_mass_bound, ulam_build, ulam_twisted)
from .farey import FareyQuery, farey_table
from .hurwitz_cf import cf_expand, convergents
from .quad_ring import (SUPPORTED_D, euclid_gcd, format_kelem, format_quadint, k_reduce,
                        parse_quadint, ring)
from .sczech import (ContractViolation, classical_dedekind, cost_S, dedekind_by_reciprocity,
                     dtilde_of, reciprocity_defect)
from .stats import (SampleSet, char_fn, freedman_diaconis_edges, ks_distance, moments,
                    regression, standardize, vardi_contrast)

EXIT_OK, EXIT_CONFIG, EXIT_CONTRACT, EXIT_NONCONV = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    args: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {"subcommand": self.subcommand, **self.args}


def git_revision() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True, text=True,
                             cwd=Path(__file__).resolve().parent, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else "unknown"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def parse_tgrid(spec: str) -> np.ndarray:
    """'a:b:step' inclusive of b (up to rounding), or a comma list."""
    try:
        if ":" in spec:
            a, b, h = (float(p) for p in spec.split(":"))
            if h <= 0 or b < a:
                raise ConfigError(f"bad t-grid {spec!r}")
            n = int(math.floor((b - a) / h + 1e-9)) + 1
            return np.round(a + h * np.arange(n), 12)
        return np.array([float(p) for p in spec.split(",")])
    except ValueError as e:
        raise ConfigError(f"bad t-grid {spec!r}: {e}") from None


def _check_D(D: int):
    if D not in SUPPORTED_D:
        raise ConfigError(f"D must be one of {SUPPORTED_D}, got {D}")


def _qi(R, text):
    try:
        return parse_quadint(R, text)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _open_out(path):
    try:
        return open(path, "w", newline="")
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e}") from None


def _write_csv(path, header, rows):
    with _open_out(path) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands

def cmd_cf(a):
    _check_D(a.D)
    R = ring(a.D)
    num, den = _qi(R, a.num), _qi(R, a.den)
    if not den:
        raise ConfigError("zero denominator")
    z = k_reduce(num, den)
    e = cf_expand(z)
    if e.value() != z:
        raise ContractViolation("continued fraction does not reconstruct its input")
    conv = convergents(e.a0, e.digits)
    return {"z": format_kelem(z), "a0": format_quadint(e.a0),
            "digits": [format_quadint(d) for d in e.digits],
            "convergents": [f"{format_quadint(p)}/{format_quadint(q)}" for p, q in conv],
            "ell": e.length}


def cmd_sczech(a):
    _check_D(a.D)
    R = ring(a.D)
    x, c = _qi(R, a.a), _qi(R, a.c)
    if not c:
        raise ConfigError("c must be nonzero")
    z = k_reduce(x, c)
    out = {"z": format_kelem(z), "Dtilde": dtilde_of(z), "S": cost_S(z),
           "ell": cf_expand(z).length}
    if x and euclid_gcd(x, c).norm() == 1:
        d = reciprocity_defect(x, c)
        out["defect"] = d
        if d != 0:
            raise ContractViolation(f"reciprocity defect {d} for ({x}, {c})")
    else:
        out["defect"] = None
    return out


def cmd_classical(a):
    if a.k <= 0 or math.gcd(a.h, a.k) != 1:
        raise ConfigError("need k > 0 and gcd(h, k) = 1")
    s = classical_dedekind(a.h, a.k)
    alt = dedekind_by_reciprocity(a.h, a.k)
    if s != alt:
        raise ContractViolation(f"sawtooth sum {s} != reciprocity value {alt}")
    return {"h": a.h, "k": a.k, "s": s, "float": float(s)}


def _table(a):
    _check_D(a.D)
    try:
        q = FareyQuery(a.D, a.X, include_zero=not a.no_zero,
                       boundary="tilde" if a.tilde else "closed")
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return farey_table(q, workers=a.threads)


def cmd_enumerate(a):
    t = _table(a)
    if a.csv:
        try:
            t.to_csv(a.csv)
        except OSError as e:
            raise ConfigError(f"cannot write {a.csv}: {e}") from None
    return {"count": len(t), "count_over_X2": len(t) / a.X ** 2,
            "max_ell": int(t["ell"].max()) if len(t) else 0, "csv": a.csv}


def cmd_distribution(a):
    t = _table(a)
    s = SampleSet.from_table(t, a.stat)
    x = s.values()
    out = {"count": len(s), "stat": a.stat}
    edges = freedman_diaconis_edges(x)
    counts, _ = np.histogram(x, bins=edges)
    mean = float(x.mean())
    cedges = freedman_diaconis_edges(x - mean)
    ccounts, _ = np.histogram(x - mean, bins=cedges)
    out["histogram"] = {"bins": int(counts.size), "mean": mean,
                        "edges_min": float(edges[0]), "edges_max": float(edges[-1])}
    if a.ks:
        zs, mu, sd = standardize(x)
        g = ks_distance(zs, "gaussian")
        c = ks_distance(zs, "cauchy")
        out["ks"] = {"gaussian": g, "cauchy": c, "cauchy_over_gaussian": c / g if g else None,
                     "mean": mu, "std": sd}
    if a.moments:
        out["moments"] = moments(s)
    if a.csv:
        # raw and mean-centred histograms share one row index
        n = max(counts.size, ccounts.size)
        rows = []
        for i in range(n):
            r = [i]
            r += [edges[i], edges[i + 1], int(counts[i])] if i < counts.size else ["", "", ""]
            r += [cedges[i], cedges[i + 1], int(ccounts[i])] if i < ccounts.size else ["", "", ""]
            rows.append(r)
        _write_csv(a.csv, ["bin", "left", "right", "count",
                           "centred_left", "centred_right", "centred_count"], rows)
        out["csv"] = a.csv
    return out


def cmd_charfn(a):
    tg = parse_tgrid(a.tgrid)
    t = _table(a)
    x = SampleSet.from_table(t, a.stat).values()
    chi = char_fn(x, tg)
    out = {"count": len(t), "t": tg, "re": chi.real, "im": chi.imag, "abs": np.abs(chi)}
    sel = (tg > 0) & (tg < 1) & (np.abs(chi) > 0)
    if sel.sum() >= 3:
        u = tg[sel] ** 2 * np.log(1 / tg[sel])
        out["fit_log_abs_vs_t2log"] = regression(u, np.log(np.abs(chi[sel])))
    if a.csv:
        _write_csv(a.csv, ["t", "re", "im", "abs"],
                   zip(tg.tolist(), chi.real.tolist(), chi.imag.tolist(), np.abs(chi).tolist()))
        out["csv"] = a.csv
    return out


def _ulam(a, need_samples: bool):
    _check_D(a.D)
    spc = a.samples if a.samples is not None else (256 if need_samples else 2025)
    try:
        return ulam_build(a.D, grid_g=a.grid, cutoff_A=a.cutoff, samples_per_cell=spc,
                          seed=a.seed, tail=a.tail, keep_samples=need_samples or None)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def cmd_ulam(a):
    twisted = not (a.s == 1 and a.t == 0)
    base = _ulam(a, twisted)
    lam0, dens = leading_eigen(base)
    A = a_constant(dens)
    out = {"lambda_1_0": lam0, "A": A, "escape_mass": base.escape_area(),
           "escape_fraction": base.escape_area() / domain_volume(a.D),
           "tail_bound": tail_mass_bound(a.D, a.cutoff),
           "symmetry_defects": symmetry_defects(dens),
           "samples_per_cell": base.samples_per_cell}
    if twisted:
        try:
            op = ulam_twisted(base, a.s, a.t)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        lam, _ = leading_eigen(op)
        out["lambda"] = complex(lam)
    else:
        out["lambda"] = lam0
    if a.density_csv:
        g = base.grid
        c = g.centers()
        dens_vals = dens.density
        _write_csv(a.density_csv, ["cell", "x", "y", "mass", "density"],
                   ((i, c[i].real, c[i].imag, dens.mass[i], dens_vals[i])
                    for i in range(g.ncell)))
        out["density_csv"] = a.density_csv
    return out


def cmd_levelsets(a):
    _check_D(a.D)
    if a.nmax < 1:
        raise ConfigError("nmax >= 1")
    rows = [level_sum(a.D, n, R=a.R) for n in range(1, a.nmax + 1)]
    out = {"level_sums": rows}
    if a.mu:
        base = _ulam(a, False)
        _, dens = leading_eigen(base)
        top = min(a.nmax, base.nmax)
        out["mu"] = [{"n": n, "mu_n": mu_level(dens, n), "mu_minus_n": mu_level(dens, -n),
                      "n3_mu_n": n ** 3 * mu_level(dens, n)} for n in range(1, top + 1)]
    return out


def cmd_s0curve(a):
    tg = parse_tgrid(a.tgrid)
    if np.any(np.abs(tg) > 0.3):
        raise ConfigError("|t| <= 0.3 on the s0 grid")
    base = _ulam(a, True)
    _, dens = leading_eigen(base)
    A = a_constant(dens)
    rows, flags = [], []
    for t in tg.tolist():
        r = s0_solve(base, t)
        osc = osc_integral(t, dens)
        rows.append((t, r.s0, osc.real, osc.imag))
        flags.append({"t": t, "lam_imag": r.lam_imag, "flagged": r.flagged,
                      "evaluations": len(r.evaluations)})
    if a.csv:
        _write_csv(a.csv, ["t", "s0", "osc_re", "osc_im"], rows)
    return {"A": A, "rows": [list(r) for r in rows], "monitor": flags, "csv": a.csv}


def cmd_vardi(a):
    try:
        return vardi_contrast(a.Q)
    except ValueError as e:
        raise ConfigError(str(e)) from None


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sczechsums",
                                description="Elliptic Dedekind sums, Hurwitz continued fractions "
                                            "and their statistics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", metavar="PATH", help="also write the JSON report here")
        sp.set_defaults(func=fn)
        return sp

    def farey_opts(sp):
        sp.add_argument("D", type=int)
        sp.add_argument("X", type=int)
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--no-zero", action="store_true", help="drop z = 0")
        sp.add_argument("--tilde", action="store_true", help="half-open domain instead of closed")

    def ulam_opts(sp):
        sp.add_argument("D", type=int)
        sp.add_argument("--grid", type=int, default=128)
        sp.add_argument("--cutoff", type=float, default=400.0)
        sp.add_argument("--samples", type=int, default=None, help="samples per cell")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tail", choices=("lump", "drop"), default="lump")

    sp = add("cf", cmd_cf, "Hurwitz expansion of num/den")
    sp.add_argument("D", type=int)
    sp.add_argument("num")
    sp.add_argument("den")

    sp = add("sczech", cmd_sczech, "D~(a, c), S and the reciprocity check")
    sp.add_argument("D", type=int)
    sp.add_argument("a")
    sp.add_argument("c")

    sp = add("classical", cmd_classical, "classical Dedekind sum s(h, k)")
    sp.add_argument("h", type=int)
    sp.add_argument("k", type=int)

    sp = add("enumerate", cmd_enumerate, "Farey set K(X) with exact statistics")
    farey_opts(sp)
    sp.add_argument("--csv", metavar="PATH")

    sp = add("distribution", cmd_distribution, "histogram, KS and moments of D~ or S")
    farey_opts(sp)
    sp.add_argument("--stat", choices=("Dt", "S"), default="Dt")
    sp.add_argument("--csv", metavar="PATH", help="histogram CSV")
    sp.add_argument("--ks", action="store_true")
    sp.add_argument("--moments", action="store_true")

    sp = add("charfn", cmd_charfn, "empirical characteristic function")
    farey_opts(sp)
    sp.add_argument("--stat", choices=("Dt", "S"), default="S")
    sp.add_argument("--tgrid", default="0.02:0.2:0.01")
    sp.add_argument("--csv", metavar="PATH")

    sp = add("ulam", cmd_ulam, "Ulam transfer operator and its leading eigenvalue")
    ulam_opts(sp)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--density-csv", metavar="PATH")

    sp = add("levelsets", cmd_levelsets, "level-set lattice sums (and mu(V_n) with --mu)")
    ulam_opts(sp)
    sp.add_argument("--nmax", type=int, default=15)
    sp.add_argument("--R", type=int, default=10 ** 6, help="truncation of the lattice sums")
    sp.add_argument("--mu", action="store_true")

    sp = add("s0curve", cmd_s0curve, "s0(t) and the oscillatory integral on a t grid")
    ulam_opts(sp)
    sp.add_argument("--tgrid", default="0.02:0.2:0.02")
    sp.add_argument("--csv", metavar="PATH")

    sp = add("vardi", cmd_vardi, "classical s(h,k)/log Q against Cauchy and Gaussian")
    sp.add_argument("Q", type=int)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    cfg = RunConfig(a.subcommand, {k: v for k, v in vars(a).items()
                                   if k not in ("func", "subcommand")})
    t0 = time.perf_counter()
    try:
        result = a.func(a)
        code = EXIT_OK
    except (ConfigError, OSError) as e:
        return _fail(cfg, e, EXIT_CONFIG)
    except (ContractViolation, AssertionError) as e:
        return _fail(cfg, e, EXIT_CONTRACT)
    except (NonConvergence, QuadratureError) as e:
        return _fail(cfg, e, EXIT_NONCONV)
    report = {"config": cfg.echo(), "seed": getattr(a, "seed", None), "git_revision": git_revision(),
              "version": __version__, "wall_time": round(time.perf_counter() - t0, 3),
              "result": result}
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    if a.json:
        try:
            Path(a.json).write_text(text + "\n")
        except OSError as e:
            return _fail(cfg, e, EXIT_CONFIG)
    print(text)
    return code


def _fail(cfg: RunConfig, e: Exception, code: int) -> int:
    err = {"config": cfg.echo(), "error": type(e).__name__, "message": str(e), "exit_code": code,
           "git_revision": git_revision()}
    print(json.dumps(_jsonable(err), sort_keys=True), file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))
