"""Straight-line machinery shared by the eikonal, quantum-mean and unitary schemes.

Two kinds of object live here.

* Impact-parameter moments ``int_0^inf rho h(m Y(rho)) d rho`` of the
  reduced chord integral ``m Y``.  Each family gets a substitution that
  removes its awkward region: ``L = sqrt(R^2 - rho^2)`` for the square
  barrier, ``rho = exp(-t)`` near the Yukawa origin, and
  ``u = m Y(rho)`` for the power law, whose slowly decaying tail is split
  off analytically or handled by a Fourier-weighted rule.
* The linear-path amplitude

      f = -m int rho J0(k rho sin th) F(rho) d rho,
      F(rho) = int dz V exp(i beta z - gamma W(z)),   W(z) = int_z^inf V ds,

  with ``beta = 2 k sin^2(th/2)``.  ``gamma = i m/k`` is the all-angle
  eikonal, ``gamma = m/(k_c - i k)`` the quantum-mean form.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import integrate
from scipy import special as sp

from .errors import ConvergenceError, QuadratureError, UnsupportedPotentialError
from .numerics import (
    AMPLITUDE_REL_TOL,
    integrate_adaptive,
    integrate_bessel_oscillatory,
    integrate_semi_infinite,
)
from .potentials import Singular, SquareBarrier, Yukawa

__all__ = [
    "chord_moment",
    "chord_sin2_moment",
    "chord_real_moment",
    "chord_square_moment",
    "linear_path_inner",
    "linear_path_amplitude",
]

REL_TOL = 1e-11


# ------------------------------------------------------------ helpers


def _quad_weighted(f, a, weight, omega, b=None):
    """Fourier-weighted QUADPACK rule (QAWF on ``[a, inf)`` or QAWO on ``[a, b]``)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if b is None:
            val, err = integrate.quad(f, a, np.inf, weight=weight, wvar=omega, limlst=200, limit=400)[:2]
        else:
            val, err = integrate.quad(f, a, b, weight=weight, wvar=omega, limit=400, epsrel=1e-12, epsabs=0)[:2]
    if not math.isfinite(val):
        raise QuadratureError("Fourier-weighted quadrature failed", best=val, err_est=err)
    return val


def _power_params(pot):
    """``m Y = A rho**(-p)`` for the singular family."""
    p = 2 * pot.N - 1
    A = pot.mass * pot.G * pot.chord_coefficient
    return A, p


def _tail_exp_power(s, u1, lam):
    """``int_{u1}^inf u^(-s-1) exp(-lam u) du`` for complex ``lam`` with ``Re lam >= 0``."""
    lr, li = lam.real, lam.imag
    amp = lambda u: u ** (-s - 1) * math.exp(-lr * u)
    if lr == 0:
        re = _quad_weighted(amp, u1, "cos", li)
        im = -_quad_weighted(amp, u1, "sin", li)
        return complex(re, im)
    end = u1 + 60.0 / lr
    if li == 0:
        return complex(integrate_adaptive(amp, u1, end, 1e-13).value, 0.0)
    re = _quad_weighted(amp, u1, "cos", li, end)
    im = -_quad_weighted(amp, u1, "sin", li, end)
    return complex(re, im)


def _tail_exp_power_u(s, u1, lam):
    """``int_{u1}^inf u^(-s) exp(-lam u) du`` (``Re lam > 0``)."""
    lr, li = lam.real, lam.imag
    amp = lambda u: u ** (-s) * math.exp(-lr * u)
    end = u1 + 60.0 / lr
    if li == 0:
        return complex(integrate_adaptive(amp, u1, end, 1e-13).value, 0.0)
    re = _quad_weighted(amp, u1, "cos", li, end)
    im = -_quad_weighted(amp, u1, "sin", li, end)
    return complex(re, im)


_LINEAR_SERIES = [0.0, 0.0] + [(-1) ** n * (n - 1) / math.factorial(n) for n in range(2, 16)]


def _chunked(f, a, b, width, rel_tol, complex_valued):
    """Sum of adaptive integrals over ``[a, b]`` cut into pieces of ``width``.

    Later pieces are held to a tolerance relative to the running total, so
    cancelling oscillatory tails cannot stall the rule.
    """
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    total = 0j if complex_valued else 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        abs_tol = 0.1 * rel_tol * abs(total)
        total += integrate_adaptive(f, lo, hi, rel_tol, abs_tol, complex_valued=complex_valued).value
    return total


# pieces carry about this many oscillations when the profile phase is fast
_CHUNK_CYCLES = 20.0


def _rho_integral(pot, h, rel_tol=REL_TOL, complex_valued=False, rate=0.0):
    """``int_0^inf rho h(mY(rho)) d rho`` for the square and Yukawa families.

    ``rate`` bounds ``|d phase / d(mY)|`` of an oscillating profile; when the
    total phase is large the range is split so each piece holds a bounded
    number of oscillations.
    """
    gm = 2 * pot.mass * pot.G
    if isinstance(pot, SquareBarrier):
        # rho d rho = -L dL with mY = G L (since m = 1/2 and Y = 2 G L)
        f = lambda L: L * h(gm * L)
        if rate * gm * pot.R > 4 * math.pi * _CHUNK_CYCLES:
            return _chunked(f, 0.0, pot.R, 2 * math.pi * _CHUNK_CYCLES / (rate * gm), rel_tol, complex_valued)
        return integrate_adaptive(f, 0.0, pot.R, rel_tol, complex_valued=complex_valued).value
    if isinstance(pot, Yukawa):
        mY = lambda rho: pot.mass * 2 * pot.G * sp.k0(rho)
        # rho = exp(-t) near the logarithmic singularity of K0; the weight
        # exp(-2t) makes everything past t = 400 irrelevant
        f_in = lambda t: math.exp(-2 * t) * h(mY(math.exp(-t))) if t < 400 else 0.0
        f_out = lambda r: r * h(mY(r))
        if rate * gm <= 2 * math.pi * _CHUNK_CYCLES / 4:
            inner = integrate_semi_infinite(f_in, 0.0, rel_tol, complex_valued=complex_valued).value
            outer = integrate_semi_infinite(f_out, 1.0, rel_tol, complex_valued=complex_valued).value
            return inner + outer
        # d phase/dt = rate mY'(rho) rho <= rate gm since rho K1(rho) <= 1;
        # past t_end the weight exp(-2t) leaves less than 1e-17 of a bounded profile
        t_end = 20.0
        inner = _chunked(f_in, 0.0, t_end, 2 * math.pi * _CHUNK_CYCLES / (rate * gm), rel_tol, complex_valued)
        # outside rho = 1 the phase rate is at most rate gm K1(1)
        r_end = 1.0
        while rate * mY(r_end) > 2 * math.pi:
            r_end += 1.0
        outer = 0.0
        if r_end > 1.0:
            width = 2 * math.pi * _CHUNK_CYCLES / (rate * gm * sp.k1(1.0))
            outer = _chunked(f_out, 1.0, r_end, width, rel_tol, complex_valued)
        outer += integrate_semi_infinite(f_out, r_end, rel_tol, complex_valued=complex_valued).value
        return inner + outer
    raise UnsupportedPotentialError(f"no chord moment rule for the {pot.family} family", family=pot.family)


# ------------------------------------------------------------ impact-parameter moments


def chord_moment(pot, lam, with_linear=False, rel_tol=REL_TOL):
    """``int rho [1 - exp(-lam mY)(1 + c lam mY)] d rho`` with ``c = with_linear``.

    ``lam`` is complex with ``Re lam >= 0`` and ``lam != 0``.  Purely
    imaginary ``lam`` gives the eikonal profile, real ``lam`` the damped
    quantum-mean one.
    """
    lam = complex(lam)
    if pot.G == 0:
        return 0j
    if lam.real < 0 or lam == 0:
        raise ValueError("lam must satisfy Re lam >= 0 and lam != 0")
    c = 1.0 if with_linear else 0.0

    if isinstance(pot, Singular):
        A, p = _power_params(pot)
        s = 2.0 / p
        pref = A**s / p
        if with_linear and lam.real == 0:
            raise UnsupportedPotentialError("undamped linear profile diverges for the singular family")
        u1 = 1.0 / abs(lam)
        head = integrate_adaptive(
            lambda u: u ** (-s - 1) * (-np.expm1(-lam * u) - c * lam * u * np.exp(-lam * u)),
            0.0,
            u1,
            rel_tol,
            complex_valued=True,
        ).value
        tail = u1 ** (-s) / s - _tail_exp_power(s, u1, lam)
        if with_linear:
            tail -= lam * _tail_exp_power_u(s, u1, lam)
        return complex(pref * (head + tail))

    def h(x):
        z = lam * x
        if not with_linear:
            return -np.expm1(-z)
        if abs(z) < 0.1:
            # sum_{n>=2} (-1)^n (n-1) z^n / n!, free of the O(z) cancellation
            return sum(_LINEAR_SERIES[n] * z**n for n in range(2, 16))
        return -np.expm1(-z) - z * np.exp(-z)

    return complex(_rho_integral(pot, h, rel_tol, complex_valued=True, rate=abs(lam.imag)))


def chord_sin2_moment(pot, kscale, rel_tol=REL_TOL):
    """``int rho sin^2(mY/(2 kscale)) d rho`` with a real sine-squared integrand."""
    if pot.G == 0:
        return 0.0
    if isinstance(pot, Singular):
        A, p = _power_params(pot)
        A = A / kscale
        s = 2.0 / p
        pref = A**s / p
        u1 = 1.0
        head = integrate_adaptive(lambda u: u ** (-s - 1) * math.sin(u / 2) ** 2, 0.0, u1, rel_tol).value
        # sin^2(u/2) = (1 - cos u)/2 on the tail
        tail = 0.5 * (u1 ** (-s) / s - _quad_weighted(lambda u: u ** (-s - 1), u1, "cos", 1.0))
        return pref * (head + tail)
    return float(_rho_integral(pot, lambda x: math.sin(x / (2 * kscale)) ** 2, rel_tol, rate=1.0 / kscale))


def chord_real_moment(pot, h, rel_tol=REL_TOL, rate=0.0):
    """``int rho h(mY) d rho`` for a real profile ``h`` (square and Yukawa only)."""
    if pot.G == 0:
        return 0.0
    return float(_rho_integral(pot, h, rel_tol, rate=rate))


def chord_square_moment(pot, rel_tol=REL_TOL):
    """``int rho (mY)^2 d rho``, the small-coupling limit of every profile."""
    if isinstance(pot, Singular):
        raise UnsupportedPotentialError("(mY)^2 is not integrable at rho = 0 for the singular family")
    return chord_real_moment(pot, lambda x: x * x, rel_tol)


# ------------------------------------------------------------ linear-path amplitude


@lru_cache(maxsize=None)
def _cheb_panel(n):
    """Lobatto nodes on [-1, 1] and the matrix mapping samples to ``int_x^1``."""
    x = np.cos(np.pi * np.arange(n + 1) / n)
    V = C.chebvander(x, n)
    S = np.empty((n + 1, n + 1))
    for j in range(n + 1):
        coef = np.zeros(n + 1)
        coef[j] = 1.0
        anti = C.chebint(coef)
        S[:, j] = C.chebval(1.0, anti) - C.chebval(x, anti)
    return x, S @ np.linalg.inv(V)


def _inner_panels(g, u_lo, u_hi, phase, gamma, panels, n=24):
    """``int g(u) exp(i phase(u) - gamma W(u)) du``, ``W(u) = int_u^hi g``."""
    x, S = _cheb_panel(n)
    edges = np.linspace(u_lo, u_hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = mid[:, None] + half[:, None] * x[None, :]
    gv = g(u)
    # cumulative from each node to its panel's right end
    within = (gv @ S.T) * half[:, None]
    totals = within[:, -1]
    right = np.concatenate([np.cumsum(totals[::-1])[::-1][1:], [0.0]])
    W = within + right[:, None]
    vals = gv * np.exp(1j * phase(u) - gamma * W)
    return complex(np.sum((vals @ S[-1]) * half)), float(np.sum(totals))


def linear_path_inner(pot, rho, beta, gamma, tol=1e-12):
    """``F(rho)``; closed form for the square barrier, spectral panels for Yukawa."""
    gamma = complex(gamma)
    if isinstance(pot, SquareBarrier):
        if rho >= pot.R:
            return 0j
        L = math.sqrt(pot.R**2 - rho**2)
        w = 1j * beta + gamma * pot.G
        x = 2 * w * L
        ratio = -np.expm1(-x) / x if abs(x) > 1e-12 else 1 - x / 2
        return complex(pot.G * np.exp(1j * beta * L) * 2 * L * ratio)
    if isinstance(pot, Yukawa):
        G = pot.G
        # z = rho sinh u turns V dz into G exp(-rho cosh u) du
        U = math.acosh(1.0 + 45.0 / rho)
        g = lambda u: G * np.exp(-rho * np.cosh(u))
        phase = lambda u: beta * rho * np.sinh(u)
        cycles = beta * rho * math.sinh(U) / (2 * math.pi)
        panels = max(4, int(2 * cycles) + 1)
        prev, _ = _inner_panels(g, -U, U, phase, gamma, panels)
        for _ in range(12):
            panels *= 2
            cur, Y = _inner_panels(g, -U, U, phase, gamma, panels)
            if abs(cur - prev) <= tol * max(abs(cur), Y, 1e-300):
                return cur
            prev = cur
        raise ConvergenceError("inner line integral did not converge", rho=rho, beta=beta)
    raise UnsupportedPotentialError(
        f"linear-path amplitude is not available for the {pot.family} family", family=pot.family
    )


def linear_path_amplitude(pot, k, theta, gamma, rel_tol=AMPLITUDE_REL_TOL):
    """``-m int rho J0(k rho sin th) F(rho) d rho`` as a complex number."""
    if pot.G == 0:
        return 0j
    beta = 2 * k * math.sin(theta / 2) ** 2
    omega = k * math.sin(theta)
    cache = {}

    def F(rho):
        if rho <= 0:
            return 0j
        if rho not in cache:
            cache[rho] = linear_path_inner(pot, rho, beta, gamma)
        return cache[rho]

    res = integrate_bessel_oscillatory(
        F, omega, rel_tol, complex_valued=True, support=pot.support
    )
    return complex(-pot.mass * res.value)
