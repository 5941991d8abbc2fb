"""Zero-momentum cumulant phases and the lengths built from them.

At ``k = 0`` the first cumulant of the path-averaged potential is

    Phi_1(r) = -2m [ M(r)/r + T(r) ],   M(r) = int_0^r y^2 V,  T(r) = int_r^inf y V,

and its derivative is ``2m M(y)/y**2``.  The second cumulant is the
radial double integral of that derivative squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedPotentialError
from .numerics import integrate_adaptive, integrate_semi_infinite
from .potentials import Singular

__all__ = [
    "PhaseFunctions",
    "phi1_zero_k",
    "phi1_derivative",
    "phi2_zero_k",
    "phase_functions",
    "born_length",
    "jensen_length_bound",
]


@dataclass(frozen=True)
class PhaseFunctions:
    phi1: float
    phi2: float


def _reject_singular(pot):
    if isinstance(pot, Singular):
        raise UnsupportedPotentialError(
            "zero-momentum phases diverge for the singular family", family=pot.family
        )


def phi1_zero_k(pot, r):
    _reject_singular(pot)
    if pot.G == 0:
        return 0.0 if np.ndim(r) == 0 else np.zeros(np.shape(r))
    r_arr = np.asarray(r, dtype=float)
    out = -2 * pot.mass * (pot.interior_moment(r_arr) / r_arr + pot.tail_moment(r_arr))
    return float(out) if np.ndim(r) == 0 else out


def phi1_derivative(pot, y):
    _reject_singular(pot)
    y_arr = np.asarray(y, dtype=float)
    out = 2 * pot.mass * pot.interior_moment(y_arr) / y_arr**2
    return float(out) if np.ndim(y) == 0 else out


def phi2_zero_k(pot, r, rel_tol=1e-10):
    """Second cumulant ``(1/r) int_0^r y^2 Phi_1'^2 + int_r^inf y Phi_1'^2``."""
    _reject_singular(pot)
    if pot.G == 0:
        return 0.0
    d2 = lambda y: phi1_derivative(pot, y) ** 2 if y > 0 else 0.0
    kink = [pot.support] if math.isfinite(pot.support) else None
    inner = integrate_adaptive(lambda y: y * y * d2(y), 0.0, r, rel_tol, points=kink).value / r
    if math.isfinite(pot.support) and r < pot.support:
        mid = integrate_adaptive(lambda y: y * d2(y), r, pot.support, rel_tol).value
        start = pot.support
    else:
        mid, start = 0.0, r
    tail = integrate_semi_infinite(lambda y: y * d2(y), start, rel_tol).value
    return inner + mid + tail


def phase_functions(pot, r):
    return PhaseFunctions(phi1_zero_k(pot, r), phi2_zero_k(pot, r))


def _radial_moment(pot, weight, rel_tol=1e-11):
    """``2m int_0^inf r^2 V(r) weight(r) dr``."""
    f = lambda r: r * r * pot.value(r) * weight(r) if r > 0 else 0.0
    if math.isfinite(pot.support):
        val = integrate_adaptive(f, 0.0, pot.support, rel_tol).value
    else:
        val = integrate_semi_infinite(f, 0.0, rel_tol).value
    return 2 * pot.mass * val


def born_length(pot):
    """``a_B = 2m int r^2 V``; the singular family diverges."""
    _reject_singular(pot)
    if math.isfinite(pot.support):
        return 2 * pot.mass * float(pot.interior_moment(pot.support))
    return _radial_moment(pot, lambda r: 1.0)


def jensen_length_bound(pot):
    """Lower bound ``2m int r^2 V exp(Phi_1)`` on the scattering length."""
    _reject_singular(pot)
    if pot.G == 0:
        return 0.0
    return _radial_moment(pot, lambda r: math.exp(phi1_zero_k(pot, r)))
