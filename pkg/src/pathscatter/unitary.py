"""Unitary approximation.

The forward amplitude keeps the quantum-mean form with a scale ``k_c``,

    f(k, 0) = (-k_c + i k) int rho [1 - exp(-mY/(k_c - i k))] d rho,

and ``k_c`` is fixed by the optical theorem at zero momentum,
``A(k_c)^2 = I(k_c)`` with ``A = f(0, 0)`` and ``I = (Im f/k)|_{k=0}``.
The cross section is then ``4 pi Im f(k, 0)/k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chords import chord_moment, chord_real_moment
from .errors import BracketError, CalibrationError, DegenerateCalibrationError, DomainError
from .numerics import find_root_bracketed, scan_brackets
from .quantum_mean import KC_RANGE, RESIDUAL_TOL, qma_cross_section_from_amplitude

__all__ = [
    "UnitarySolution",
    "unitary_forward_amplitude",
    "unitary_length",
    "unitary_threshold",
    "unitary_im_f",
    "solve_unitary",
    "unitary_sigma",
    "unitary_amplitude_ratio",
    "square_unitary_forward_closed",
    "square_unitary_threshold_closed",
]


@dataclass(frozen=True)
class UnitarySolution:
    k_c: float
    a: float
    i0: float
    residual: float = 0.0
    candidates: list = field(default_factory=list)

    def to_dict(self):
        return {
            "k_c": self.k_c,
            "a": self.a,
            "i0": self.i0,
            "residual": self.residual,
            "candidates": self.candidates,
            "variant": "unitary",
        }


def _check_kc(k_c):
    if not (math.isfinite(k_c) and k_c > 0):
        raise DomainError("k_c must be finite and > 0", k_c=k_c)


def unitary_forward_amplitude(pot, k, k_c):
    """Complex forward amplitude; real and equal to ``-unitary_length`` at ``k = 0``."""
    _check_kc(k_c)
    if not (math.isfinite(k) and k >= 0):
        raise DomainError("k must be >= 0", k=k)
    if pot.G == 0:
        return 0j
    w = complex(k_c, -k)
    return complex(-w * chord_moment(pot, 1.0 / w))


def unitary_length(pot, k_c):
    """``-A(k_c) = k_c int rho [1 - exp(-mY/k_c)] d rho`` (positive)."""
    _check_kc(k_c)
    return k_c * chord_moment(pot, 1.0 / k_c).real


def unitary_threshold(pot, k_c):
    """``I(k_c) = int rho [1 - exp(-x)(1 + x)] d rho``, ``x = mY/k_c``."""
    _check_kc(k_c)
    return chord_moment(pot, 1.0 / k_c, with_linear=True).real


def _one_minus_exp_1p(a):
    # 1 - exp(-a)(1 + a), exact to rounding for small a
    if a < 1e-3:
        return a * a * (0.5 - a / 3 + a * a / 8)
    return -math.expm1(-a) - a * math.exp(-a)


def _one_minus_sinc(b):
    if abs(b) < 1e-3:
        return b * b / 6 * (1 - b * b / 20)
    return 1 - math.sin(b) / b


def unitary_im_f(pot, k, k_c):
    """``Im f(k,0) = k int rho [1 - exp(-al)(cos be + (k_c/k) sin be)] d rho``.

    ``al = k_c x/(k_c^2 + k^2)``, ``be = k x/(k_c^2 + k^2)``, ``x = mY``.  The
    integrand is rearranged as
    ``[1 - e^-al (1 + al)] + al e^-al (1 - sinc be) + 2 e^-al sin^2(be/2)``,
    every term of which is non-negative.
    """
    _check_kc(k_c)
    if not (math.isfinite(k) and k >= 0):
        raise DomainError("k must be >= 0", k=k)
    if pot.G == 0:
        return 0.0
    if k == 0:
        return 0.0
    d = k_c * k_c + k * k

    def h(x):
        al = k_c * x / d
        be = k * x / d
        e = math.exp(-al)
        return _one_minus_exp_1p(al) + al * e * _one_minus_sinc(be) + 2 * e * math.sin(be / 2) ** 2

    return k * chord_real_moment(pot, h, rate=k / d)


def solve_unitary(pot):
    """Solve ``A(k_c)^2 = I(k_c)``; the smallest root is selected.

    ``A^2 - I`` is negative as ``k_c -> 0`` (``A`` vanishes, ``I`` does not)
    and positive as ``k_c -> inf`` (``I`` falls as ``1/k_c^2``), so at least
    one sign change exists for any repulsive potential.
    """
    if pot.G == 0:
        raise DegenerateCalibrationError("unitary calibration is undefined at G = 0 (both sides vanish)")

    def g(kc):
        a = unitary_length(pot, kc)
        return a * a / unitary_threshold(pot, kc) - 1.0

    brackets, samples = scan_brackets(g, *KC_RANGE)
    if not brackets:
        raise CalibrationError("no sign change for the unitary calibration", scan=[[x, v] for x, v in samples[::4]])
    roots = []
    for lo, hi in brackets:
        try:
            roots.append(find_root_bracketed(g, lo, hi, tol=RESIDUAL_TOL).root)
        except BracketError:
            continue
    if not roots:
        raise CalibrationError("unitary calibration: no root met the residual tolerance")
    kc = roots[0]
    a = unitary_length(pot, kc)
    i0 = unitary_threshold(pot, kc)
    return UnitarySolution(kc, a, i0, 4 * math.pi * (a * a - i0), roots)


def unitary_sigma(pot, k, solution):
    """``sigma(k) = 4 pi Im f(k, 0)/k``, with ``4 pi I(k_c)`` at ``k = 0``."""
    if not (math.isfinite(k) and k >= 0):
        raise DomainError("k must be >= 0", k=k)
    if pot.G == 0:
        return 0.0
    if k == 0:
        return 4 * math.pi * unitary_threshold(pot, solution.k_c)
    return 4 * math.pi * unitary_im_f(pot, k, solution.k_c) / k


def unitary_amplitude_ratio(pot, k, solution):
    """Diagnostic: angle-integrated ``|f|^2`` over the optical-theorem ``sigma``."""
    return qma_cross_section_from_amplitude(pot, k, solution.k_c) / unitary_sigma(pot, k, solution)


def square_unitary_forward_closed(G, R, k, k_c):
    """``(R^2/2)(-k_c + i k)[1 - (2/D^2)(1 - (1 + D) e^-D)]``, ``D = G R/(k_c - i k)``."""
    w = complex(k_c, -k)
    D = G * R / w
    if abs(D) < 0.5:
        # the bracket cancels to O(D); sum its Taylor series instead
        bracket = -2 * sum((-1) ** n * (n - 1) / math.factorial(n) * D ** (n - 2) for n in range(3, 24))
    else:
        bracket = 1 - 2 / D**2 * (1 - (1 + D) * np.exp(-D))
    return complex(R * R / 2 * (-w) * bracket)


def square_unitary_threshold_closed(G, R, k_c):
    """``R^2 [1/2 - 3/D^2 + e^-D (1 + 3/D + 3/D^2)]`` with ``D = G R/k_c``."""
    D = G * R / k_c
    if D < 0.5:
        return R * R * sum((-1) ** n * (n - 1) * (n - 3) / math.factorial(n) * D ** (n - 2) for n in range(4, 26))
    return R * R * (0.5 - 3 / D**2 + math.exp(-D) * (1 + 3 / D + 3 / D**2))
