"""Reference solutions: partial waves for the square barrier, Numerov for Yukawa.

Scattering lengths are reported positive for repulsion,
``a = -lim_{k->0} delta_0(k)/k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp

from . import specfun
from .errors import ConvergenceError, DomainError, UnsupportedPotentialError
from .potentials import SquareBarrier, Yukawa

__all__ = [
    "PhaseShiftTable",
    "RadialGrid",
    "square_phase_shift",
    "square_phase_shifts",
    "square_scattering_length",
    "square_cross_section",
    "default_grid",
    "numerov_phase_shift",
    "numerov_phase_shifts",
    "numerov_scattering_length",
    "yukawa_cross_section",
    "singular_exact_length",
    "singular_exact_factor",
    "singular_length_from_ode",
]

PHASE_CUTOFF = 1e-12
NUMEROV_TOL = 1e-8


@dataclass
class PhaseShiftTable:
    k: float
    entries: list = field(default_factory=list)
    ell_max: int = 0
    converged: bool = False

    @property
    def deltas(self):
        return np.array([d for _, d in self.entries])

    def cross_section(self):
        ell = np.arange(len(self.entries))
        return float(4 * math.pi / self.k**2 * np.sum((2 * ell + 1) * np.sin(self.deltas) ** 2))


def _check_k(k):
    if not (math.isfinite(k) and k > 0):
        raise DomainError("momentum k must be finite and > 0", k=k)


# ---------------------------------------------------------------- square barrier


def _square_principal(G, R, k, ell):
    """Principal-branch phase shifts; ``k`` and ``ell`` broadcast."""
    k = np.asarray(k, dtype=float)
    ell = np.asarray(ell)
    if G == 0:
        return np.zeros(np.broadcast(k, ell).shape)
    x = k * R
    j, jp, y, yp = specfun.spherical_bessel_pair(ell, x)
    q2 = G - k * k
    with np.errstate(all="ignore"):
        # classically forbidden interior: log-derivative from scaled i_l
        kap = np.sqrt(np.maximum(q2, 0.0))
        i_l, i_p = specfun.modified_spherical_i_pair(ell, kap * R, scaled=True)
        L_low = np.where(kap > 0, kap * i_p / np.where(i_l == 0, 1.0, i_l), ell / R)
        num_low = k * jp - L_low * j
        den_low = k * yp - L_low * y
        # above the barrier; multiply through by j_l(kbar R) to avoid dividing
        kbar = np.sqrt(np.maximum(-q2, 0.0))
        xb = np.maximum(kbar * R, 1e-300)
        jb = sp.spherical_jn(ell, xb)
        jbp = sp.spherical_jn(ell, xb, derivative=True)
        num_high = k * jp * jb - kbar * jbp * j
        den_high = k * yp * jb - kbar * jbp * y
        num = np.where(q2 >= 0, num_low, num_high)
        den = np.where(q2 >= 0, den_low, den_high)
        delta = np.arctan2(num * np.sign(den), np.abs(den))
    # y_l overflow for ell >> kR: the phase shift has underflowed to zero
    delta = np.where(np.isfinite(delta), delta, 0.0)
    return delta


def square_phase_shift(G, R, k, ell):
    """Phase shift ``delta_l(k)`` for the square barrier, continuous in ``k``.

    The branch is fixed by following the principal value up from
    ``k -> 0`` where ``delta_l`` vanishes.
    """
    _check_k(k)
    if int(ell) != ell or ell < 0:
        raise DomainError("ell must be a non-negative integer", ell=ell)
    SquareBarrier(G, R)
    n = int(max(64, 40 * (k * R + math.sqrt(G) * R)))
    ks = np.linspace(k / n, k, n)
    path = _square_principal(G, R, ks, int(ell))
    return float(np.unwrap(path, period=math.pi)[-1])


def square_phase_shifts(G, R, k, cutoff=PHASE_CUTOFF, block=32, ell_cap=100000):
    """Principal-value phase shifts for ``l = 0, 1, ...`` until ``|delta_l| < cutoff``."""
    _check_k(k)
    SquareBarrier(G, R)
    deltas = []
    start = 0
    while start < ell_cap:
        ell = np.arange(start, start + block)
        d = _square_principal(G, R, k, ell)
        deltas.extend(d.tolist())
        # converged once beyond the classical turning region and tiny
        small = np.abs(d) < cutoff
        past = ell > k * R
        done = np.nonzero(small & past)[0]
        if len(done):
            stop = start + done[0]
            deltas = deltas[: stop + 1]
            return PhaseShiftTable(k, list(enumerate(deltas)), stop, True)
        start += block
        block *= 2
    return PhaseShiftTable(k, list(enumerate(deltas)), len(deltas) - 1, False)


def square_scattering_length(G, R=1.0):
    """``a = R - tanh(sqrt(G) R)/sqrt(G)``."""
    SquareBarrier(G, R)
    if G == 0:
        return 0.0
    s = math.sqrt(G)
    return R - math.tanh(s * R) / s


def square_cross_section(G, R, k, cutoff=PHASE_CUTOFF):
    """Partial-wave cross section; returns ``(sigma, ell_max)``."""
    table = square_phase_shifts(G, R, k, cutoff)
    if not table.converged:
        raise ConvergenceError("partial-wave sum did not converge", k=k, ell_max=table.ell_max)
    return table.cross_section(), table.ell_max


# ---------------------------------------------------------------- Numerov


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    h: float
    match_radius: float

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("grid step must be > 0", h=self.h)
        if not self.match_radius < self.r_max:
            raise DomainError("match radius must lie inside the grid", match_radius=self.match_radius, r_max=self.r_max)


def _require_yukawa(pot):
    if not isinstance(pot, Yukawa):
        raise UnsupportedPotentialError("Numerov reference is implemented for the Yukawa family", family=pot.family)


def default_grid(pot, h=0.01, k=None):
    """Grid whose match radius sits where ``2 m V < 1e-14`` (and ``r >= 25``)."""
    _require_yukawa(pot)
    r = 25.0
    while 2 * pot.mass * pot.G * math.exp(-r) / r >= 1e-14:
        r += 1.0
    gap = 2.0 if k is None else min(math.pi / (2 * k), 2.0)
    return RadialGrid(r_max=r + gap + 1.0, h=h, match_radius=r)


def _series_start(pot, k, ell, r):
    """Regular solution ``sum c_n r**(n+l+1)`` near the origin (one ``ell``)."""
    p0 = 2 * pot.mass * pot.G
    nterms = 40
    p = [p0 * (-1) ** j / math.factorial(j) for j in range(nterms)]
    c = [1.0]
    for n in range(1, nterms):
        s = sum(p[j] * c[n - 1 - j] for j in range(n))
        if n >= 2:
            s -= k * k * c[n - 2]
        c.append(s / (n * (n + 2 * ell + 1)))
    r = np.asarray(r, dtype=float)
    return np.polyval(c[::-1], r) * r ** (ell + 1)


def _numerov_run(pot, k, ells, h, r_points):
    """Integrate every ``ell`` outwards and return ``u`` at ``r_points`` (grid-aligned).

    Low partial waves start from the power series at ``h, 2h``.  High ones
    start deep inside the centrifugal barrier, where the irregular solution
    is suppressed by ~1e-40, with ``u = 0`` at the node before.
    """
    ells = np.asarray(ells, dtype=float)
    idx_pts = [int(round(r / h)) for r in r_points]
    n_end = max(idx_pts)
    U0 = 2 * pot.mass * pot.G
    cent = ells * (ells + 1)
    c = h * h / 12.0

    with np.errstate(divide="ignore", invalid="ignore"):
        rt = np.sqrt(cent) / k if k > 0 else np.full(len(ells), np.inf)
        r0 = rt * 10.0 ** (-20.0 / (ells + 1))
    deep = (ells >= 8) & (r0 > 3 * h)
    start = np.full(len(ells), 2, dtype=np.int64)
    u_prev = np.zeros(len(ells))
    u_cur = np.zeros(len(ells))
    for i, ell in enumerate(ells):
        if deep[i]:
            start[i] = min(int(r0[i] / h) if np.isfinite(r0[i]) else n_end + 1, n_end + 1)
            u_cur[i] = 1e-30
        else:
            u_prev[i] = _series_start(pot, k, int(ell), h)
            u_cur[i] = _series_start(pot, k, int(ell), 2 * h)

    def Q_at(n):
        r = n * h
        return cent / r**2 + U0 * math.exp(-r) / r - k * k

    # summed form on w = (1 - h^2 Q/12) u keeps roundoff growth linear in steps
    n0 = int(start.min())
    w_prev = np.zeros(len(ells))
    w_cur = np.zeros(len(ells))
    d = np.zeros(len(ells))
    out = {n: np.zeros(len(ells)) for n in idx_pts}
    for n in range(n0, n_end):
        Q = Q_at(n)
        Qp = Q_at(n + 1)
        starting = start == n
        if np.any(starting):
            Qm = Q_at(n - 1)
            w_prev = np.where(starting, (1 - c * Qm) * u_prev, w_prev)
            w_cur = np.where(starting, (1 - c * Q) * u_cur, w_cur)
            d = np.where(starting, w_cur - w_prev, d)
        active = start <= n
        u_n = np.where(active, w_cur / (1 - c * Q), u_cur)
        d = np.where(active, d + h * h * Q * u_n, d)
        w_cur = np.where(active, w_cur + d, w_cur)
        u_cur = np.where(active, w_cur / (1 - c * Qp), u_cur)
        big = np.abs(u_cur) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            u_cur, w_cur, d = u_cur * scale, w_cur * scale, d * scale
            for m in out:
                out[m] = out[m] * scale
        if n + 1 in out:
            out[n + 1] = np.where(start <= n + 1, u_cur, 0.0)
    return [out[n] for n in idx_pts], start


def _match_points(grid, k, h):
    r1 = round(grid.match_radius / h) * h
    gap = min(math.pi / (2 * k), 2.0) if k > 0 else 2.0
    r2 = round((grid.match_radius + gap) / h) * h
    if r2 > grid.r_max + 1e-9:
        raise DomainError("grid too short for the matching points", r_max=grid.r_max, needed=r2)
    return r1, r2


def _numerov_deltas_at_h(pot, k, ells, grid, h):
    r1, r2 = _match_points(grid, k, h)
    (u1, u2), start = _numerov_run(pot, k, ells, h, [r1, r2])
    ells = np.asarray(ells)
    x1, x2 = k * r1, k * r2
    j1, y1 = x1 * sp.spherical_jn(ells, x1), x1 * sp.spherical_yn(ells, x1)
    j2, y2 = x2 * sp.spherical_jn(ells, x2), x2 * sp.spherical_yn(ells, x2)
    num = u2 * j1 - u1 * j2
    den = u2 * y1 - u1 * y2
    with np.errstate(all="ignore"):
        delta = np.arctan2(num * np.sign(den), np.abs(den))
    # turning point beyond the matching region: no phase accumulated
    skip = (start * h >= r1) | ~np.isfinite(delta)
    return np.where(skip, 0.0, delta)


def _richardson(fn, h0, tol, max_halvings=6):
    """Step-halving with fourth-order Richardson until successive extrapolants agree."""
    h = h0
    prev = fn(h)
    prev_ext = None
    for _ in range(max_halvings):
        h /= 2
        cur = fn(h)
        diff = cur - prev
        diff = (diff + math.pi / 2) % math.pi - math.pi / 2 if np.ndim(diff) == 0 else np.mod(diff + np.pi / 2, np.pi) - np.pi / 2
        ext = cur + diff / 15.0
        if prev_ext is not None:
            change = np.max(np.abs(ext - prev_ext))
            if change <= tol:
                return ext, h
        prev_ext, prev = ext, cur
    raise ConvergenceError("Richardson step-halving did not reach tolerance", tol=tol, h=h, change=float(change))


def numerov_phase_shifts(pot, k, ells, grid=None, tol=NUMEROV_TOL):
    """Phase shifts for several ``ell`` (vectorized), Richardson-extrapolated."""
    _require_yukawa(pot)
    _check_k(k)
    ells = np.atleast_1d(np.asarray(ells, dtype=int))
    if pot.G == 0:
        return np.zeros(len(ells))
    grid = grid or default_grid(pot, k=k)
    ext, _ = _richardson(lambda h: _numerov_deltas_at_h(pot, k, ells, grid, h), grid.h, tol)
    return ext


def numerov_phase_shift(pot, k, ell, grid=None, tol=NUMEROV_TOL):
    """Phase shift ``delta_l(k)`` of the Yukawa potential by Numerov integration."""
    return float(numerov_phase_shifts(pot, k, [ell], grid, tol)[0])


def numerov_scattering_length(pot, grid=None, tol=1e-9):
    """Zero-energy length from ``u'' = 2 m V u``; ``u = C (r - a)`` outside the range."""
    _require_yukawa(pot)
    if pot.G == 0:
        return 0.0
    grid = grid or default_grid(pot)

    def at_h(h):
        ra = round(grid.match_radius / h) * h
        rb = round((grid.match_radius + 2.0) / h) * h
        (ua, ub), _ = _numerov_run(pot, 0.0, [0], h, [ra, rb])
        return float((ub[0] * ra - ua[0] * rb) / (ub[0] - ua[0]))

    h = grid.h
    prev = at_h(h)
    prev_ext = None
    for _ in range(6):
        h /= 2
        cur = at_h(h)
        ext = cur + (cur - prev) / 15.0
        if prev_ext is not None and abs(ext - prev_ext) <= tol * max(1.0, abs(ext)):
            return ext
        prev, prev_ext = cur, ext
    raise ConvergenceError("scattering length did not converge under step halving", h=h)


def yukawa_cross_section(pot, k, grid=None, tol=NUMEROV_TOL, ell_cap=2000):
    """Partial-wave sum over Numerov phase shifts; returns ``(sigma, ell_max)``."""
    _require_yukawa(pot)
    _check_k(k)
    if pot.G == 0:
        return 0.0, 0
    grid = grid or default_grid(pot, k=k)
    deltas = []
    start, block = 0, 16
    while start < ell_cap:
        ells = np.arange(start, start + block)
        d = numerov_phase_shifts(pot, k, ells, grid, tol)
        deltas.extend(d.tolist())
        quiet = np.abs(d) < 10 * tol
        beyond = ells > k * grid.match_radius / 4
        hit = np.nonzero(quiet & beyond)[0]
        if len(hit):
            deltas = deltas[: start + hit[0] + 1]
            table = PhaseShiftTable(k, list(enumerate(deltas)), len(deltas) - 1, True)
            return table.cross_section(), table.ell_max
        start += block
        block *= 2
    raise ConvergenceError("partial-wave sum did not converge", k=k, ell_max=len(deltas) - 1)


# ---------------------------------------------------------------- singular potential


def singular_exact_factor(N):
    """``f(N)`` with ``a = (G/(N-1))**nu f(N)``, ``nu = 1/(2(N-1))``."""
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2", N=N)
    nu = 1.0 / (2 * (N - 1))
    return 2.0 ** (-2 * nu) * math.gamma(1 - nu) / math.gamma(1 + nu)


def singular_exact_length(G, N):
    """Zero-energy length of ``G / r**(2N)`` in the closed form quoted for it.

    This form coincides with the direct solution of the zero-energy radial
    equation only at ``N = 3``; see :func:`singular_length_from_ode`.
    """
    if not (math.isfinite(G) and G >= 0):
        raise DomainError("G must be >= 0", G=G)
    nu = 1.0 / (2 * (N - 1))
    return (G / (N - 1)) ** nu * singular_exact_factor(N)


def singular_length_from_ode(G, N, mass=1.0):
    """Length from the exact solution ``u = sqrt(r) K_nu(z)`` of ``u'' = 2 m G r**(-2N) u``.

    ``z = sqrt(2 m G) / ((N-1) r**(N-1))``; expanding ``K_nu`` at small ``z``
    gives ``a = (sqrt(2 m G)/(2(N-1)))**(2 nu) Gamma(1-nu)/Gamma(1+nu)``.
    """
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2", N=N)
    nu = 1.0 / (2 * (N - 1))
    base = math.sqrt(2 * mass * G) / (2 * (N - 1))
    return base ** (2 * nu) * math.gamma(1 - nu) / math.gamma(1 + nu)
