"""Quadrature, bracketed root finding and the path-sampling RNG contract.

The finite-interval rule is QUADPACK's adaptive Gauss-Kronrod (21-point,
with epsilon extrapolation) from :func:`scipy.integrate.quad`; everything
else here is layered on top of it.
"""

from __future__ import annotations

import math
import warnings
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special as sp

from .errors import BracketError, DomainError, QuadratureError

__all__ = [
    "QuadratureResult",
    "RootResult",
    "DEFAULT_REL_TOL",
    "AMPLITUDE_REL_TOL",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "integrate_bessel_oscillatory",
    "find_root_bracketed",
    "expand_bracket",
    "scan_brackets",
    "path_stream",
    "tolerance_override",
]

DEFAULT_REL_TOL = 1e-9
AMPLITUDE_REL_TOL = 1e-7
DEFAULT_MAX_EVALS = 21 * 2000

_OVERRIDE = {"rel_tol": None, "max_evals": None}


@contextmanager
def tolerance_override(rel_tol=None, max_evals=None):
    """Force every quadrature in the block to use these settings."""
    saved = dict(_OVERRIDE)
    if rel_tol is not None:
        if not 0 < rel_tol < 1:
            raise DomainError("rel_tol must lie in (0, 1)", rel_tol=rel_tol)
        _OVERRIDE["rel_tol"] = rel_tol
    if max_evals is not None:
        if max_evals < 21:
            raise DomainError("max_evals must be >= 21", max_evals=max_evals)
        _OVERRIDE["max_evals"] = int(max_evals)
    try:
        yield
    finally:
        _OVERRIDE.update(saved)


@dataclass(frozen=True)
class QuadratureResult:
    value: float | complex
    err_est: float
    evals: int


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    bracket: tuple
    iterations: int


def _quad_real(f, a, b, rel_tol, abs_tol, max_evals, points):
    rel_tol = _OVERRIDE["rel_tol"] or rel_tol
    max_evals = _OVERRIDE["max_evals"] or max_evals
    limit = max(50, max_evals // 21)
    kwargs = dict(epsabs=abs_tol, epsrel=rel_tol, limit=limit, full_output=1)
    if points is not None:
        inner = [p for p in points if a < p < b]
        if inner:
            kwargs["points"] = inner
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kwargs)
    val, err, info = out[0], out[1], out[2]
    ier = 0 if len(out) == 3 else 1
    return val, err, info["neval"], ier, (out[3] if len(out) > 3 else "")


def integrate_adaptive(
    f,
    a,
    b,
    rel_tol=DEFAULT_REL_TOL,
    abs_tol=0.0,
    max_evals=DEFAULT_MAX_EVALS,
    points=None,
    complex_valued=False,
):
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Integrable endpoint singularities are fine.  Complex integrands need
    ``complex_valued=True``; real and imaginary parts are integrated
    separately and the error estimates added.

    Raises :class:`QuadratureError` (carrying the best estimate) when the
    requested tolerance is not met within ``max_evals``.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError("need finite a < b", a=a, b=b)
    rel_tol = _OVERRIDE["rel_tol"] or rel_tol
    if complex_valued:
        re = _quad_real(lambda x: f(x).real, a, b, rel_tol, abs_tol, max_evals, points)
        im = _quad_real(lambda x: f(x).imag, a, b, rel_tol, abs_tol, max_evals, points)
        value = complex(re[0], im[0])
        err = math.hypot(re[1], im[1])
        evals = re[2] + im[2]
        failed = (re[3], re[4]) if re[3] else (im[3], im[4])
    else:
        val, err, evals, ier, msg = _quad_real(f, a, b, rel_tol, abs_tol, max_evals, points)
        value = float(val)
        failed = (ier, msg)
    if not np.isfinite(value):
        raise QuadratureError("integral is not finite", best=value, err_est=err)
    if failed[0]:
        # QUADPACK also flags round-off stalls whose estimate is still fine
        if err > 10.0 * max(abs_tol, rel_tol * abs(value)):
            raise QuadratureError(
                f"adaptive quadrature did not converge: {failed[1]}".strip(),
                best=value,
                err_est=err,
            )
    return QuadratureResult(value, float(err), int(evals))


def integrate_semi_infinite(f, a, rel_tol=DEFAULT_REL_TOL, abs_tol=0.0, max_evals=DEFAULT_MAX_EVALS, complex_valued=False):
    """Integrate ``f`` over ``[a, inf)``.

    Uses ``t = 1/(1 + x - a)`` to map onto ``(0, 1]`` and delegates to
    :func:`integrate_adaptive`.
    """

    def g(t):
        if t <= 0.0:
            return 0.0
        x = a + (1.0 - t) / t
        return f(x) / (t * t)

    return integrate_adaptive(g, 0.0, 1.0, rel_tol, abs_tol, max_evals, complex_valued=complex_valued)


def _geometric_points(lo, hi, ratio=4.0):
    """Breakpoints splitting a long first panel into scale-sized pieces."""
    start = lo if lo > 0 else 1e-3 * hi
    pts = []
    x = start * ratio
    while x < hi:
        pts.append(x)
        x *= ratio
    return pts or None


def _euler_average(partial_sums):
    """Repeated pairwise averaging of a sequence of partial sums."""
    s = np.asarray(partial_sums)
    while len(s) > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return s[0]


def integrate_bessel_oscillatory(
    g,
    omega,
    rel_tol=AMPLITUDE_REL_TOL,
    abs_tol=0.0,
    max_panels=2000,
    complex_valued=False,
    support=math.inf,
    lower=0.0,
):
    """Compute ``int_lower^inf rho J0(omega rho) g(rho) d rho``.

    For ``omega > 0`` the range is split at the zeros of ``J0(omega rho)``;
    the panel sums alternate and are accelerated by Euler averaging.  A
    finite ``support`` truncates the range (``g`` vanishes beyond it).
    """
    if omega < 0 or not math.isfinite(omega):
        raise DomainError("omega must be finite and >= 0", omega=omega)
    rel_tol = _OVERRIDE["rel_tol"] or rel_tol

    def integrand(rho):
        return rho * sp.j0(omega * rho) * g(rho)

    if math.isfinite(support):
        n_zeros = 0 if omega == 0 else int(omega * support / math.pi) + 2
        edges = [lower]
        if n_zeros:
            edges += [z for z in sp.jn_zeros(0, n_zeros) / omega if lower < z < support]
        edges.append(support)
        total, err, evals = 0.0, 0.0, 0
        for lo, hi in zip(edges[:-1], edges[1:]):
            # later panels are judged against the running total, not their own size
            tol_abs = max(abs_tol, 0.1 * rel_tol * abs(total))
            r = integrate_adaptive(integrand, lo, hi, rel_tol, tol_abs, complex_valued=complex_valued)
            total += r.value
            err += r.err_est
            evals += r.evals
        return QuadratureResult(total, err, evals)

    if omega == 0:
        return integrate_semi_infinite(
            lambda r: r * g(r), lower, rel_tol, abs_tol, complex_valued=complex_valued
        )

    block = 64 + int(omega * lower / math.pi)
    zeros = sp.jn_zeros(0, block) / omega
    zeros = zeros[zeros > lower]
    lo = lower
    sums, terms = [], []
    total, err, evals = 0.0, 0.0, 0
    prev_est = None
    for n in range(max_panels):
        if n >= len(zeros):
            block *= 2
            zeros = sp.jn_zeros(0, block) / omega
            zeros = zeros[zeros > lower]
        hi = zeros[n]
        r = integrate_adaptive(
            integrand,
            lo,
            hi,
            0.1 * rel_tol,
            max(0.1 * abs_tol, 0.01 * rel_tol * abs(total)),
            points=_geometric_points(lo, hi) if n == 0 else None,
            complex_valued=complex_valued,
        )
        total += r.value
        err += r.err_est
        evals += r.evals
        lo = hi
        sums.append(total)
        terms.append(r.value)
        scale = max(abs(total), abs_tol / max(rel_tol, 1e-300))
        # direct convergence for rapidly decaying g
        if n >= 3 and all(abs(t) <= 0.01 * rel_tol * scale for t in terms[-3:]):
            return QuadratureResult(total, err + sum(abs(t) for t in terms[-3:]), evals)
        if n >= 8:
            est = _euler_average(sums[-12:])
            if prev_est is not None and abs(est - prev_est) <= rel_tol * max(abs(est), 1e-300) + abs_tol:
                return QuadratureResult(est, err + abs(est - prev_est), evals)
            prev_est = est
    raise QuadratureError(
        "Euler acceleration did not converge",
        best=prev_est,
        err_est=None,
        partial_sums=[complex(s) if complex_valued else float(s) for s in sums[-12:]],
    )


def find_root_bracketed(g, lo, hi, tol=1e-12, xtol=1e-15, max_iter=200):
    """Brent's method on a sign-changing bracket.

    Succeeds only if ``|g(root)| <= tol``; the bracket must straddle a sign
    change.
    """
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0:
        return RootResult(float(lo), 0.0, (lo, hi), 0)
    if g_hi == 0:
        return RootResult(float(hi), 0.0, (lo, hi), 0)
    if np.sign(g_lo) == np.sign(g_hi):
        raise BracketError("no sign change across bracket", lo=lo, hi=hi, g_lo=g_lo, g_hi=g_hi)
    root, info = optimize.brentq(
        g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=max_iter, full_output=True, disp=False
    )
    residual = float(g(root))
    if abs(residual) > tol:
        raise BracketError(
            "root residual above tolerance", root=root, residual=residual, tol=tol
        )
    return RootResult(float(root), residual, (float(lo), float(hi)), int(info.iterations))


def expand_bracket(g, seed, factor=2.0, max_steps=60):
    """Expand geometrically up and down from ``seed > 0`` until ``g`` changes sign."""
    if not seed > 0:
        raise DomainError("seed must be > 0", seed=seed)
    g0 = g(seed)
    if g0 == 0:
        return (seed, seed)
    up_prev, down_prev = seed, seed
    g_up, g_down = g0, g0
    for _ in range(max_steps):
        up, down = up_prev * factor, down_prev / factor
        g_up_new = g(up)
        if np.sign(g_up_new) != np.sign(g_up):
            return (up_prev, up)
        g_down_new = g(down)
        if np.sign(g_down_new) != np.sign(g_down):
            return (down, down_prev)
        up_prev, down_prev, g_up, g_down = up, down, g_up_new, g_down_new
    raise BracketError("no sign change found", seed=seed, steps=max_steps)


def scan_brackets(g, lo, hi, per_decade=8):
    """Sample ``g`` on a geometric grid over ``[lo, hi]``; return every sign-change bracket."""
    n = max(2, int(round(per_decade * math.log10(hi / lo))) + 1)
    xs = np.geomspace(lo, hi, n)
    vals = [g(x) for x in xs]
    brackets = []
    for x0, x1, v0, v1 in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if v0 == 0:
            brackets.append((x0, x0))
        elif np.sign(v0) != np.sign(v1) and v1 != 0:
            brackets.append((float(x0), float(x1)))
    if vals[-1] == 0:
        brackets.append((xs[-1], xs[-1]))
    return brackets, list(zip(xs.tolist(), [float(v) for v in vals]))


def path_stream(seed, stream, index):
    """Counter-based generator for one Monte Carlo path.

    The Philox key is ``(seed, stream)`` and the path index occupies the top
    counter word, so every path owns a disjoint block of the sequence and
    draws never depend on evaluation order.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    counter = np.array([0, 0, 0, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
