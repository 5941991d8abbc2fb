"""Straight-line (eikonal) amplitudes and cross sections.

With the reduced chord phase ``phi(rho) = m Y(rho) / k``:

    f(k, th)  = i k int rho J0(k rho th) [1 - exp(-i phi)] d rho
    Im f(k,0) = k int rho [1 - cos phi] d rho
    sigma(k)  = 8 pi int rho sin^2(phi / 2) d rho

The all-angle variant keeps the longitudinal phase ``2 k z sin^2(th/2)`` and
the partial chord ``int_z^inf V`` along the path.
"""

from __future__ import annotations

import math

from scipy import special as sp

from .chords import (
    chord_moment,
    chord_sin2_moment,
    chord_square_moment,
    linear_path_amplitude,
    _power_params,
    _quad_weighted,
)
from .errors import DomainError
from .numerics import AMPLITUDE_REL_TOL, integrate_bessel_oscillatory
from .potentials import Singular

__all__ = [
    "K_MIN",
    "eikonal_amplitude",
    "eikonal_amplitude_all_angle",
    "eikonal_cross_section",
    "eikonal_forward_im",
    "eikonal_sigma_asymptotic",
    "eikonal_im_f_asymptotic",
    "singular_eikonal_sigma",
]

K_MIN = 1e-3


def _check(k, theta=0.0, k_min=K_MIN):
    if not (math.isfinite(k) and k >= k_min):
        raise DomainError(f"eikonal schemes need k >= {k_min}", k=k)
    if not 0.0 <= theta <= math.pi:
        raise DomainError("theta must lie in [0, pi]", theta=theta)


def _singular_amplitude(pot, k, q, rel_tol):
    """``int rho J0(q rho)[1 - exp(-i phi)]`` for ``phi = A rho^-p``, ``q > 0``."""
    A, p = _power_params(pot)
    A /= k
    s = 2.0 / p
    u1 = 50.0
    rho_c = (A / u1) ** (1.0 / p)
    # inside rho_c the phase exceeds u1; change variables to u = phi
    bessel = lambda u: u ** (-s - 1) * sp.j0(q * (A / u) ** (1.0 / p))
    osc = complex(_quad_weighted(bessel, u1, "cos", 1.0), -_quad_weighted(bessel, u1, "sin", 1.0))
    inner = rho_c * sp.j1(q * rho_c) / q - (A**s / p) * osc
    outer = integrate_bessel_oscillatory(
        lambda r: complex(1 - math.cos(A * r**-p), math.sin(A * r**-p)),
        q,
        rel_tol,
        complex_valued=True,
        lower=rho_c,
    ).value
    return inner + outer


def eikonal_amplitude(pot, k, theta=0.0, rel_tol=AMPLITUDE_REL_TOL, k_min=K_MIN):
    """Small-angle eikonal amplitude ``f(k, theta)`` (complex)."""
    _check(k, theta, k_min)
    if pot.G == 0:
        return 0j
    q = k * theta
    if isinstance(pot, Singular):
        if q == 0:
            return complex(1j * k * chord_moment(pot, 1j / k))
        return complex(1j * k * _singular_amplitude(pot, k, q, rel_tol))

    def profile(rho):
        x = pot.reduced_chord(rho) / k
        return complex(1 - math.cos(x), math.sin(x))

    res = integrate_bessel_oscillatory(profile, q, rel_tol, complex_valued=True, support=pot.support)
    return complex(1j * k * res.value)


def eikonal_amplitude_all_angle(pot, k, theta, rel_tol=AMPLITUDE_REL_TOL, k_min=K_MIN):
    """All-angle straight-line amplitude; square barrier and Yukawa."""
    _check(k, theta, k_min)
    return linear_path_amplitude(pot, k, theta, 1j * pot.mass / k, rel_tol)


def eikonal_forward_im(pot, k, k_min=K_MIN):
    """``Im f(k, 0) = k int rho [1 - cos(mY/k)] d rho``."""
    _check(k, 0.0, k_min)
    if pot.G == 0:
        return 0.0
    return k * chord_moment(pot, 1j / k).real


def eikonal_cross_section(pot, k, k_min=K_MIN):
    """``sigma = 8 pi int rho sin^2(mY/2k) d rho``."""
    _check(k, 0.0, k_min)
    return 8 * math.pi * chord_sin2_moment(pot, k)


def eikonal_sigma_asymptotic(pot, k):
    """Leading large-``k`` cross section ``(2 pi/k^2) int rho (mY)^2``."""
    return 2 * math.pi / k**2 * chord_square_moment(pot)


def eikonal_im_f_asymptotic(pot, k):
    """Leading large-``k`` forward ``Im f = (1/2k) int rho (mY)^2``."""
    return chord_square_moment(pot) / (2 * k)


def singular_eikonal_sigma(G, N, k):
    """Closed form of the eikonal cross section for ``G / r**(2N)``."""
    if not (math.isfinite(k) and k > 0):
        raise DomainError("k must be > 0", k=k)
    pot = Singular(G, N)
    if G == 0:
        return 0.0
    e = 2.0 / (2 * N - 1)
    c = pot.chord_coefficient
    return (
        2
        * math.pi
        * (pot.mass * G / k) ** e
        * c**e
        * math.gamma((2 * N - 3) / (2 * N - 1))
        * math.sin(math.pi * (2 * N + 1) / (2 * (2 * N - 1)))
    )
