"""Quantum-mean approximation.

The path fluctuation inside the potential is replaced by its Brownian
spread, which turns the zero-energy path average into

    a(b) = 2m int_0^inf r^2 V(r) exp(-(2m/b) T(r)) dr,   T(r) = int_r^inf s V(s) ds.

At finite momentum the straight-line phase ``m/k`` is softened to
``m/(k_c - i k)``; ``k_c`` is then fixed either by matching the amplitude
at ``k = 0`` to ``a(b)`` or by matching ``sigma(0)`` to ``4 pi a^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import special as sp

from .chords import chord_moment, chord_sin2_moment, linear_path_amplitude
from .errors import (
    BracketError,
    CalibrationError,
    DegenerateCalibrationError,
    DomainError,
    QuadratureError,
    UnsupportedPotentialError,
)
from .numerics import (
    AMPLITUDE_REL_TOL,
    find_root_bracketed,
    integrate_adaptive,
    integrate_semi_infinite,
    scan_brackets,
)
from .potentials import Singular, SquareBarrier

__all__ = [
    "QmaParams",
    "Calibration",
    "qma_scattering_length",
    "square_qma_length_closed",
    "singular_qma_factor",
    "singular_qma_length",
    "qma_sigma_zero",
    "qma_amplitude",
    "qma_forward_length",
    "calibrate_kc_amplitude",
    "qma_sigma",
    "square_qma_sigma_closed",
    "calibrate_kc_sigma",
    "qma_cross_section_from_amplitude",
]

KC_RANGE = (1e-3, 1e3)
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class QmaParams:
    b: float = 1.0
    k_c: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError("spread parameter b must be > 0", b=self.b)
        if self.k_c is not None and not self.k_c > 0:
            raise DomainError("k_c must be > 0", k_c=self.k_c)


@dataclass(frozen=True)
class Calibration:
    k_c: float
    residual: float
    variant: str
    candidates: list = field(default_factory=list)

    def to_dict(self):
        return {"k_c": self.k_c, "residual": self.residual, "variant": self.variant, "candidates": self.candidates}


def _check_b(b):
    QmaParams(b)


def qma_scattering_length(pot, b=1.0, rel_tol=1e-12):
    """Scattering length ``a(b)`` by quadrature of its defining integral."""
    _check_b(b)
    if pot.G == 0:
        return 0.0
    m = pot.mass

    def f(r):
        if r <= 0:
            return 0.0
        return r * r * pot.value(r) * math.exp(-(2 * m / b) * pot.tail_moment(r))

    if math.isfinite(pot.support):
        val = integrate_adaptive(f, 0.0, pot.support, rel_tol).value
    elif isinstance(pot, Singular):
        # the exponent switches the integrand on near the scale r_s
        r_s = (pot.G / (b * (pot.N - 1))) ** (1.0 / (2 * pot.N - 2))
        val = integrate_adaptive(f, 0.0, r_s, rel_tol).value + integrate_semi_infinite(f, r_s, rel_tol).value
    else:
        val = integrate_semi_infinite(f, 0.0, rel_tol).value
    return 2 * m * val


def square_qma_length_closed(G, R=1.0, b=1.0):
    """``a = b R [1 - D(sqrt c)/sqrt c]``, ``c = G R^2/(2b)``, ``D`` the Dawson function.

    Equivalent to ``b R [1 - (1/2) sqrt(pi/c) exp(-c) erfi(sqrt c)]``.
    """
    SquareBarrier(G, R)
    _check_b(b)
    if G == 0:
        return 0.0
    c = G * R * R / (2 * b)
    x = math.sqrt(c)
    return b * R * (1 - sp.dawsn(x) / x)


def singular_qma_factor(N, b=1.0):
    """``f_a(N) = b^(1-nu) Gamma(1-nu)``, ``nu = 1/(2(N-1))``."""
    _check_b(b)
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2", N=N)
    nu = 1.0 / (2 * (N - 1))
    return b ** (1 - nu) * math.gamma(1 - nu)


def singular_qma_length(G, N, b=1.0):
    """Closed form ``a = (G/(N-1))^nu f_a(N)``."""
    Singular(G, N)
    nu = 1.0 / (2 * (N - 1))
    return (G / (N - 1)) ** nu * singular_qma_factor(N, b)


def qma_sigma_zero(pot, b=1.0):
    return 4 * math.pi * qma_scattering_length(pot, b) ** 2


def qma_forward_length(pot, k_c):
    """``k_c int rho [1 - exp(-mY/k_c)] d rho``: minus the amplitude at ``k = 0``."""
    if not k_c > 0:
        raise DomainError("k_c must be > 0", k_c=k_c)
    return k_c * chord_moment(pot, 1.0 / k_c).real


def qma_amplitude(pot, k, theta, k_c, rel_tol=AMPLITUDE_REL_TOL):
    """Amplitude with the softened straight-line phase ``m/(k_c - i k)``.

    At ``k = 0`` it is real, angle independent and equal to
    ``-qma_forward_length(pot, k_c)``.
    """
    if not (math.isfinite(k) and k >= 0):
        raise DomainError("k must be >= 0", k=k)
    if not k_c > 0:
        raise DomainError("k_c must be > 0", k_c=k_c)
    if not 0.0 <= theta <= math.pi:
        raise DomainError("theta must lie in [0, pi]", theta=theta)
    if pot.G == 0:
        return 0j
    if isinstance(pot, Singular):
        if theta != 0 and k != 0:
            raise UnsupportedPotentialError("off-forward amplitude not available for the singular family")
        w = complex(k_c, -k)
        return complex(-w * chord_moment(pot, 1.0 / w))
    return linear_path_amplitude(pot, k, theta, pot.mass / complex(k_c, -k), rel_tol)


def _solve(g, variant, pick, seed_scan=KC_RANGE, widen_down=True):
    lo, hi = seed_scan
    try:
        brackets, samples = scan_brackets(g, lo, hi)
        # widen geometrically if the default window has no sign change
        for _ in range(8):
            if brackets:
                break
            lo, hi = (lo / 10 if widen_down else lo), hi * 10
            brackets, samples = scan_brackets(g, lo, hi, per_decade=6)
    except QuadratureError as exc:
        raise CalibrationError(f"{variant} calibration scan failed: {exc}") from exc
    if not brackets:
        raise CalibrationError(
            f"no sign change for the {variant} calibration",
            scan=[[x, v] for x, v in samples[:: max(1, len(samples) // 24)]],
        )
    roots = []
    for a, b in brackets:
        try:
            roots.append(find_root_bracketed(g, a, b, tol=RESIDUAL_TOL))
        except BracketError:
            continue
    if not roots:
        raise CalibrationError(f"{variant} calibration: no root met the residual tolerance")
    chosen = pick(roots)
    return Calibration(chosen.root, chosen.residual, variant, [r.root for r in roots])


def calibrate_kc_amplitude(pot, b=1.0):
    """Solve ``k_c int rho [1 - exp(-mY/k_c)] = a(b)`` for ``k_c``.

    The left side rises monotonically from 0 to the Born length, so the root
    is unique whenever ``a(b)`` lies below it.
    """
    if pot.G == 0:
        raise DegenerateCalibrationError("calibration is undefined at G = 0 (both sides vanish)")
    a = qma_scattering_length(pot, b)
    return _solve(lambda kc: qma_forward_length(pot, kc) - a, "amplitude", lambda rs: rs[0])


def qma_sigma(pot, k, k_c):
    """``sigma = 8 pi int rho sin^2(mY / (2 sqrt(k_c^2 + k^2))) d rho``."""
    if not (math.isfinite(k) and k >= 0):
        raise DomainError("k must be >= 0", k=k)
    if not k_c > 0:
        raise DomainError("k_c must be > 0", k_c=k_c)
    return 8 * math.pi * chord_sin2_moment(pot, math.hypot(k_c, k))


def square_qma_sigma_closed(G, R, k, k_c):
    """``(pi R^2/B^2)[1 + 2B^2 - cos 2B - 2B sin 2B]``, ``B = G R/(2 sqrt(k_c^2 + k^2))``."""
    SquareBarrier(G, R)
    if G == 0:
        return 0.0
    B = G * R / (2 * math.hypot(k_c, k))
    if B < 0.5:
        # the bracket cancels to O(B^4) for small B
        return math.pi * R * R * sum(
            (-1) ** n * 4**n * (2 * n - 1) / math.factorial(2 * n) * B ** (2 * n - 2) for n in range(2, 14)
        )
    return math.pi * R * R / B**2 * (1 + 2 * B * B - math.cos(2 * B) - 2 * B * math.sin(2 * B))


def calibrate_kc_sigma(pot, b=1.0, per_decade=8):
    """Solve ``4 pi a(b)^2 = sigma(0, k_c)``; the largest root is returned.

    That root continues to the weak-coupling branch where ``sigma`` falls off
    as ``1/k_c^2``.  The scan runs downwards from the top of the window and
    stops at the first sign change, so the strongly oscillating small-``k_c``
    region is never sampled needlessly.
    """
    if pot.G == 0:
        raise DegenerateCalibrationError("calibration is undefined at G = 0 (both sides vanish)")
    target = qma_sigma_zero(pot, b)
    g = lambda kc: qma_sigma(pot, 0.0, kc) / target - 1.0
    lo, hi = KC_RANGE
    x_prev = hi
    g_prev = g(x_prev)
    for _ in range(4):
        if g_prev < 0:
            break
        x_prev *= 10
        g_prev = g(x_prev)
    step = 10 ** (1.0 / per_decade)
    scan = [[x_prev, g_prev]]
    while x_prev > lo:
        x = x_prev / step
        try:
            gx = g(x)
        except QuadratureError as exc:
            raise CalibrationError(f"cross_section calibration scan failed at k_c={x:.3g}: {exc}", scan=scan) from exc
        scan.append([x, gx])
        if (gx >= 0) != (g_prev >= 0):
            root = find_root_bracketed(g, x, x_prev, tol=RESIDUAL_TOL)
            residual = qma_sigma(pot, 0.0, root.root) - target
            return Calibration(root.root, residual, "cross_section", [root.root])
        x_prev, g_prev = x, gx
    raise CalibrationError(
        "no sign change for the cross_section calibration: 4 pi a^2 exceeds sigma(0, k_c) for every k_c",
        scan=scan[:: max(1, len(scan) // 24)],
    )


def qma_cross_section_from_amplitude(pot, k, k_c, rel_tol=1e-6):
    """``2 pi int_0^pi sin(th) |f(k, th)|^2 d th`` over :func:`qma_amplitude`."""
    if pot.G == 0:
        return 0.0
    if k == 0:
        return 4 * math.pi * abs(qma_amplitude(pot, 0.0, 0.0, k_c)) ** 2
    f = lambda th: math.sin(th) * abs(qma_amplitude(pot, k, th, k_c)) ** 2
    # forward peak width ~ 1/(k R); split so the adaptive rule sees it
    width = min(math.pi / 2, 3.0 / k)
    res = integrate_adaptive(f, 0.0, math.pi, rel_tol, points=[width, 2 * width] if 2 * width < math.pi else None)
    return 2 * math.pi * res.value
