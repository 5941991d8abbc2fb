"""Command-line front end.

Every command writes a table (CSV or JSON) or a JSON record.  Failures are
reported on stderr as ``{"error": {"code": ..., "message": ...}}``.

Exit codes: 0 success, 1 error, 2 success with warnings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from functools import lru_cache

import numpy as np

from . import specfun
from .eikonal import eikonal_amplitude, eikonal_amplitude_all_angle, eikonal_cross_section
from .errors import ConfigError, ScatteringError, UnsupportedPotentialError
from .exact import (
    numerov_scattering_length,
    singular_exact_factor,
    singular_exact_length,
    square_cross_section,
    square_scattering_length,
    yukawa_cross_section,
)
from .numerics import tolerance_override
from .path_mc import McConfig, mc_phi, mc_scattering_length
from .perturbation import born_length, jensen_length_bound
from .potentials import Singular, SquareBarrier, Yukawa
from .quantum_mean import (
    calibrate_kc_amplitude,
    calibrate_kc_sigma,
    qma_amplitude,
    qma_cross_section_from_amplitude,
    qma_scattering_length,
    qma_sigma,
    singular_qma_factor,
)
from .unitary import solve_unitary, unitary_forward_amplitude, unitary_sigma

ESS_WARN = 100.0
SIG_DIGITS = 12

LENGTH_GRID = "0.5:50:20:log"
XSEC_GRID = "0.01:10:12:log"
N_GRID = "2:40:39"
FIGURE_COUPLINGS = (5.0, 10.0, 15.0)

FIGURES = {
    1: ("G", "a_exact", "a_qma_b1", "a_qma_b08"),
    2: ("G", "k", "sigma_exact", "sigma_qma_b1", "sigma_qma_b08"),
    3: ("N", "f_qma", "f_exact"),
    4: ("G", "a_numerov", "a_qma_b1", "a_qma_b07"),
    5: ("G", "k", "sigma_qma", "sigma_numerov"),
    6: ("G", "a_numerov", "a_unitary"),
    7: ("G", "k", "sigma_unitary", "sigma_numerov"),
    8: ("G", "k", "sigma_unitary", "sigma_exact"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


class Table:
    def __init__(self, columns, config):
        self.columns = list(columns)
        self.rows = []
        self.config = config
        self.warnings = []
        self.meta = {}

    def add(self, row):
        self.rows.append(row)

    def warn(self, row_key, exc):
        rec = exc.to_dict() if isinstance(exc, ScatteringError) else {"code": "warning", "message": str(exc)}
        rec["row"] = row_key
        self.warnings.append(rec)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self):
        rows = [{c: _json_num(row.get(c)) for c in self.columns} for row in self.rows]
        out = {"config": self.config, "columns": self.columns, "rows": rows, "warnings": self.warnings}
        out.update(self.meta)
        return json.dumps(out, indent=2)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.{SIG_DIGITS}g}"


def _json_num(v):
    if v is None:
        return None
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return float(f"{v:.{SIG_DIGITS}g}") if math.isfinite(v) else None


def parse_grid(text):
    """``lo:hi:n`` (linear) or ``lo:hi:n:log``; a single number is a one-point grid."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) not in (3, 4):
            raise ValueError
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"bad grid {text!r}; expected lo:hi:n[:log]") from None
    if n < 1:
        raise ConfigError("grid must be nonempty", grid=text)
    if n > 1 and not hi > lo:
        raise ConfigError("grid must be strictly increasing", grid=text)
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"unknown grid spacing {parts[3]!r}")
        if lo <= 0:
            raise ConfigError("log grid needs lo > 0", grid=text)
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def make_potential(args, G=None, N=None):
    G = args.G if G is None else G
    if args.potential == "square":
        return SquareBarrier(G, args.R)
    if args.potential == "singular":
        return Singular(G, args.N if N is None else int(round(N)))
    return Yukawa(G)


# ------------------------------------------------------------ cached references


@lru_cache(maxsize=None)
def _yukawa_sigma(G, k):
    return yukawa_cross_section(Yukawa(G), k)[0]


@lru_cache(maxsize=None)
def _yukawa_length(G):
    return numerov_scattering_length(Yukawa(G))


@lru_cache(maxsize=None)
def _unitary(pot):
    return solve_unitary(pot)


def exact_length(pot):
    if isinstance(pot, SquareBarrier):
        return square_scattering_length(pot.G, pot.R)
    if isinstance(pot, Singular):
        return singular_exact_length(pot.G, pot.N)
    return _yukawa_length(pot.G)


def exact_sigma(pot, k):
    if isinstance(pot, SquareBarrier):
        return square_cross_section(pot.G, pot.R, k)[0]
    if isinstance(pot, Yukawa):
        return _yukawa_sigma(pot.G, k)
    raise UnsupportedPotentialError("no exact cross section for the singular family at k > 0")


# ------------------------------------------------------------ commands

LENGTH_SCHEMES = ("exact", "born", "jensen", "qma", "unitary", "mc")
XSEC_SCHEMES = ("exact", "eikonal", "qma", "qma-amp", "unitary")
AMP_SCHEMES = ("eikonal", "eikonal-allangle", "qma", "unitary")


def _schemes(text, allowed):
    out = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in out if s not in allowed]
    if not out or bad:
        raise ConfigError(f"unknown scheme(s) {bad or text!r}; choose from {', '.join(allowed)}")
    return out


def _mc_config(args):
    return McConfig(
        n_paths=args.paths, d_nu=args.dnu, nu_max=args.numax, seed=args.seed, antithetic=args.antithetic, n_nodes=args.nodes
    )


def cmd_length(args):
    schemes = _schemes(args.scheme or "exact,qma", LENGTH_SCHEMES)
    var = args.sweep
    grid = parse_grid(args.grid or (N_GRID if var == "N" else LENGTH_GRID))
    if var == "N" and args.potential != "singular":
        raise ConfigError("an N sweep needs --potential singular")
    table = Table([var] + [f"a_{s}" for s in schemes], _config(args, schemes=schemes, grid=grid.tolist()))
    for x in grid:
        row = {var: int(round(x)) if var == "N" else x}
        try:
            b = x if var == "b" else args.b
            pot = make_potential(args, G=x if var == "G" else None, N=x if var == "N" else None)
        except ScatteringError as exc:
            table.warn(row[var], exc)
            table.add(row)
            continue
        for s in schemes:
            try:
                if s == "exact":
                    val = exact_length(pot)
                elif s == "born":
                    val = born_length(pot)
                elif s == "jensen":
                    val = jensen_length_bound(pot)
                elif s == "qma":
                    val = qma_scattering_length(pot, b)
                elif s == "unitary":
                    val = _unitary(pot).a if pot.G else 0.0
                else:
                    val = mc_scattering_length(pot, _mc_config(args)).mean
                row[f"a_{s}"] = val
            except ScatteringError as exc:
                table.warn(row[var], exc)
        table.add(row)
    return table


def _calibrated_kc(pot, variant, b, given):
    if given is not None:
        return given, None
    if variant == "unitary":
        sol = _unitary(pot)
        return sol.k_c, sol.to_dict()
    cal = calibrate_kc_sigma(pot, b) if variant == "sigma" else calibrate_kc_amplitude(pot, b)
    return cal.k_c, cal.to_dict()


def cmd_xsec(args):
    schemes = _schemes(args.scheme or "exact", XSEC_SCHEMES)
    grid = parse_grid(args.grid or XSEC_GRID)
    pot = make_potential(args)
    table = Table(["k"] + [f"sigma_{s}" for s in schemes], _config(args, schemes=schemes, grid=grid.tolist()))
    cals = {}
    kcs = {}
    for s in schemes:
        try:
            if s == "qma":
                kcs[s], cals[s] = _calibrated_kc(pot, args.variant or "sigma", args.b, args.kc)
            elif s == "qma-amp":
                kcs[s], cals[s] = _calibrated_kc(pot, "amplitude", args.b, args.kc)
            elif s == "unitary":
                sol = _unitary(pot)
                kcs[s], cals[s] = sol, sol.to_dict()
        except ScatteringError as exc:
            table.warn(f"calibration:{s}", exc)
    table.meta["calibration"] = cals
    for k in grid:
        row = {"k": k}
        for s in schemes:
            try:
                if s == "exact":
                    val = exact_sigma(pot, k)
                elif s == "eikonal":
                    val = eikonal_cross_section(pot, k)
                elif s not in kcs:
                    continue
                elif s == "qma":
                    val = qma_sigma(pot, k, kcs[s])
                elif s == "qma-amp":
                    val = qma_cross_section_from_amplitude(pot, k, kcs[s])
                else:
                    val = unitary_sigma(pot, k, kcs[s])
                row[f"sigma_{s}"] = val
            except ScatteringError as exc:
                table.warn(k, exc)
        table.add(row)
    return table


def cmd_amp(args):
    schemes = _schemes(args.scheme or "eikonal", AMP_SCHEMES)
    grid = parse_grid(args.grid or "0:0.5:11")
    pot = make_potential(args)
    cols = ["theta"]
    for s in schemes:
        cols += [f"re_{s}", f"im_{s}"]
    table = Table(cols, _config(args, schemes=schemes, grid=grid.tolist(), k=args.k))
    kcs = {}
    for s in ("qma", "unitary"):
        if s in schemes:
            try:
                kcs[s], cal = _calibrated_kc(pot, "amplitude" if s == "qma" else "unitary", args.b, args.kc)
                table.meta.setdefault("calibration", {})[s] = cal
            except ScatteringError as exc:
                table.warn(f"calibration:{s}", exc)
    for th in grid:
        row = {"theta": th}
        for s in schemes:
            try:
                if s == "eikonal":
                    f = eikonal_amplitude(pot, args.k, th)
                elif s == "eikonal-allangle":
                    f = eikonal_amplitude_all_angle(pot, args.k, th)
                elif s not in kcs:
                    continue
                elif s == "unitary" and th == 0:
                    f = unitary_forward_amplitude(pot, args.k, kcs[s])
                else:
                    f = qma_amplitude(pot, args.k, th, kcs[s])
                row[f"re_{s}"], row[f"im_{s}"] = f.real, f.imag
            except ScatteringError as exc:
                table.warn(th, exc)
        table.add(row)
    return table


def cmd_calibrate(args):
    variant = args.variant or "amplitude"
    pot = make_potential(args)
    if variant == "unitary":
        rec = solve_unitary(pot).to_dict()
    elif variant == "sigma":
        rec = calibrate_kc_sigma(pot, args.b).to_dict()
    else:
        rec = calibrate_kc_amplitude(pot, args.b).to_dict()
    rec["config"] = _config(args)
    return rec


def cmd_mc(args):
    pot = make_potential(args)
    cfg = _mc_config(args)
    est = mc_phi(pot, args.r, cfg) if args.r is not None else mc_scattering_length(pot, cfg)
    rec = {
        "quantity": "psi(r)" if args.r is not None else "scattering_length",
        "mean": est.mean,
        "stderr": est.stderr,
        "ess": est.ess,
        "n_paths": est.n_paths,
        "config": dict(_config(args), mc=asdict(cfg)),
        "warnings": [],
    }
    if isinstance(pot, Singular):
        rec["warnings"].append({"code": "experimental", "message": "Monte Carlo for the singular family is experimental"})
    if est.ess < ESS_WARN:
        rec["warnings"].append({"code": "low_ess", "message": f"effective sample size {est.ess:.1f} is below {ESS_WARN:g}"})
    return rec


# ------------------------------------------------------------ figures


def figure_table(fig, grid_text=None, couplings=FIGURE_COUPLINGS):
    """Data for one figure as a :class:`Table` with the schema in ``FIGURES``."""
    if fig not in FIGURES:
        raise ConfigError(f"unknown figure {fig}; choose 1..8")
    table = Table(FIGURES[fig], {"figure": fig, "grid": grid_text, "couplings": list(couplings)})
    if fig in (1, 4, 6):
        for G in parse_grid(grid_text or LENGTH_GRID):
            if fig == 1:
                p = SquareBarrier(G)
                row = {"a_exact": square_scattering_length(G), "a_qma_b1": qma_scattering_length(p, 1.0)}
                row["a_qma_b08"] = qma_scattering_length(p, 0.8)
            elif fig == 4:
                p = Yukawa(G)
                row = {"a_numerov": _yukawa_length(G), "a_qma_b1": qma_scattering_length(p, 1.0)}
                row["a_qma_b07"] = qma_scattering_length(p, 0.7)
            else:
                row = {"a_numerov": _yukawa_length(G), "a_unitary": _unitary(Yukawa(G)).a}
            row["G"] = G
            table.add(row)
        return table
    if fig == 3:
        for N in parse_grid(grid_text or N_GRID):
            if abs(N - round(N)) > 1e-9:
                raise ConfigError("figure 3 needs an integer N grid", N=N)
            N = int(round(N))
            table.add({"N": N, "f_qma": singular_qma_factor(N, 1.0), "f_exact": singular_exact_factor(N)})
        return table
    ks = parse_grid(grid_text or XSEC_GRID)
    cals = {}
    for G in couplings:
        if fig == 2:
            p = SquareBarrier(G)
            kc1 = calibrate_kc_amplitude(p, 1.0)
            kc08 = calibrate_kc_amplitude(p, 0.8)
            cals[G] = {"b1": kc1.to_dict(), "b08": kc08.to_dict()}
        elif fig == 5:
            p = Yukawa(G)
            cal = calibrate_kc_sigma(p, 1.0)
            cals[G] = cal.to_dict()
        else:
            p = Yukawa(G) if fig == 7 else SquareBarrier(G)
            sol = _unitary(p)
            cals[G] = sol.to_dict()
        for k in ks:
            row = {"G": G, "k": k}
            if fig == 2:
                row["sigma_exact"] = exact_sigma(p, k)
                row["sigma_qma_b1"] = qma_cross_section_from_amplitude(p, k, kc1.k_c)
                row["sigma_qma_b08"] = qma_cross_section_from_amplitude(p, k, kc08.k_c)
            elif fig == 5:
                row["sigma_qma"] = qma_sigma(p, k, cal.k_c)
                row["sigma_numerov"] = exact_sigma(p, k)
            elif fig == 7:
                row["sigma_unitary"] = unitary_sigma(p, k, sol)
                row["sigma_numerov"] = exact_sigma(p, k)
            else:
                row["sigma_unitary"] = unitary_sigma(p, k, sol)
                row["sigma_exact"] = exact_sigma(p, k)
            table.add(row)
    table.meta["calibration"] = {str(G): c for G, c in cals.items()}
    return table


def cmd_figure(args):
    return figure_table(args.id, args.grid)


def cmd_specfun_check(args):
    xs = parse_grid(args.grid or "0.1:20:8:log")
    table = Table(["x", "j0", "k0", "erfi", "gamma"], _config(args, grid=xs.tolist()))
    for x in xs:
        erfi = specfun.erfi(x) if x < 26 else None
        table.add({"x": x, "j0": specfun.bessel_j0(x), "k0": specfun.bessel_k0(x), "erfi": erfi, "gamma": specfun.gamma(x)})
    return table


# ------------------------------------------------------------ plumbing


def _config(args, **extra):
    keep = ("command", "potential", "G", "R", "N", "b", "kc", "scheme", "variant", "sweep", "rel_tol", "max_evals", "seed")
    out = {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}
    out.update(extra)
    return out


def build_parser():
    p = _Parser(prog="pathscatter", description="Scattering lengths, amplitudes and cross sections for repulsive potentials.")
    common = _Parser(add_help=False)
    common.add_argument("--potential", choices=("square", "singular", "yukawa"), default="square")
    common.add_argument("--G", type=float, default=1.0, help="coupling (default 1)")
    common.add_argument("--R", type=float, default=1.0, help="barrier radius")
    common.add_argument("--N", type=int, default=2, help="singular exponent, V = G/r^(2N)")
    common.add_argument("--b", type=float, default=1.0, help="quantum-mean spread parameter")
    common.add_argument("--kc", type=float, default=None, help="use this k_c instead of calibrating")
    common.add_argument("--scheme", default=None, help="comma-separated list")
    common.add_argument("--variant", choices=("amplitude", "sigma", "unitary"), default=None)
    common.add_argument("--grid", default=None, help="lo:hi:n[:log]")
    common.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    common.add_argument("--max-evals", dest="max_evals", type=int, default=None)
    common.add_argument("--seed", type=int, default=12345)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("length", parents=[common], help="scattering length sweep")
    s.add_argument("--sweep", choices=("G", "b", "N"), default="G")
    s.add_argument("--paths", type=int, default=4096)
    s.add_argument("--dnu", type=float, default=0.01)
    s.add_argument("--numax", type=float, default=40.0)
    s.add_argument("--antithetic", action="store_true")
    s.add_argument("--nodes", type=int, default=12)
    s.set_defaults(func=cmd_length)

    s = sub.add_parser("xsec", parents=[common], help="total cross section over a k grid")
    s.set_defaults(func=cmd_xsec)

    s = sub.add_parser("amp", parents=[common], help="amplitude over an angle grid")
    s.add_argument("--k", type=float, default=1.0)
    s.set_defaults(func=cmd_amp)

    s = sub.add_parser("calibrate", parents=[common], help="solve for k_c")
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("mc", parents=[common], help="Brownian-path Monte Carlo")
    s.add_argument("--paths", type=int, default=4096, help="paths per radial node")
    s.add_argument("--dnu", type=float, default=0.01)
    s.add_argument("--numax", type=float, default=40.0)
    s.add_argument("--antithetic", action="store_true")
    s.add_argument("--nodes", type=int, default=12)
    s.add_argument("--r", type=float, default=None, help="estimate psi(r) instead of the length")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("figure", parents=[common], help="data behind figures 1-8")
    s.add_argument("id", type=int)
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("specfun-check", parents=[common], help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_specfun_check)
    return p


def _emit(text, path, stdout):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        with tolerance_override(args.rel_tol, args.max_evals):
            result = args.func(args)
    except ScatteringError as exc:
        stderr.write(json.dumps({"error": exc.to_dict()}) + "\n")
        return 1
    if isinstance(result, Table):
        text = result.to_json() + "\n" if args.format == "json" else result.to_csv()
        warnings = result.warnings
    else:
        if args.format == "csv":
            flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
            text = _record_csv(flat)
        else:
            text = json.dumps(result, indent=2, default=float) + "\n"
        warnings = result.get("warnings", [])
    _emit(text, args.out, stdout)
    for w in warnings:
        stderr.write(json.dumps({"warning": w}, default=str) + "\n")
    return 2 if warnings else 0


def _record_csv(flat):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(flat))
    w.writerow([_fmt(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v for v in flat.values()])
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
