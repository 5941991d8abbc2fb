"""Independent reference computations shared by the tests.

Radial equations are integrated with scipy's DOP853 at tight tolerances
and phases are read off with Wronskians against Riccati-Bessel functions,
a route that shares no code with the library solvers.
"""

import math

import numpy as np
from scipy import special as sp
from scipy.integrate import solve_ivp


def _riccati(ell, k, r):
    x = k * r
    j = sp.spherical_jn(ell, x)
    jp = sp.spherical_jn(ell, x, derivative=True)
    y = sp.spherical_yn(ell, x)
    yp = sp.spherical_yn(ell, x, derivative=True)
    return x * j, k * (j + x * jp), x * y, k * (y + x * yp)


def radial_phase(two_m_v, k, ell, r_end, r0=1e-6, first_coef=0.0, breaks=()):
    """``delta_l mod pi`` for ``u'' = [l(l+1)/r^2 + 2mV - k^2] u``.

    ``first_coef`` is the linear coefficient of the regular series,
    ``u = r^(l+1) (1 + first_coef r)``.
    """

    def rhs(r, s):
        return [s[1], (ell * (ell + 1) / r**2 + two_m_v(r) - k * k) * s[0]]

    u0 = r0 ** (ell + 1) * (1 + first_coef * r0)
    du0 = (ell + 1) * r0**ell + first_coef * (ell + 2) * r0 ** (ell + 1)
    state = [u0, du0]
    edges = [r0, *[b for b in breaks if r0 < b < r_end], r_end]
    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (a, b), state, method="DOP853", rtol=1e-12, atol=1e-300)
        state = sol.y[:, -1]
        # renormalise to keep the growing interior solution in range
        state = state / max(abs(state[0]), abs(state[1]))
    u, du = state
    jh, jhp, yh, yhp = _riccati(ell, k, r_end)
    # u = jh cos d - yh sin d
    w_j = u * jhp - du * jh
    w_y = u * yhp - du * yh
    d = math.atan(w_j / w_y)
    return d


def zero_energy_length(two_m_v, r_end, r0=1e-6, first_coef=0.0, breaks=()):
    """``a`` from ``u = C (r - a)`` beyond the range of the potential."""

    def rhs(r, s):
        return [s[1], two_m_v(r) * s[0]]

    state = [r0 * (1 + first_coef * r0), 1 + 2 * first_coef * r0]
    edges = [r0, *[b for b in breaks if r0 < b < r_end], r_end]
    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (a, b), state, method="DOP853", rtol=1e-13, atol=1e-300)
        state = sol.y[:, -1]
    u, du = state
    return r_end - u / du


def mod_pi_close(a, b, tol):
    d = (a - b) % math.pi
    return min(d, math.pi - d) <= tol
