"""Special functions used by the closed forms.

Thin, domain-checked wrappers over :mod:`scipy.special`.  Spherical Bessel
functions come with their derivatives, and the modified functions have an
exponentially scaled variant for the large arguments met in strong
barriers.
"""

import math

import numpy as np
from scipy import special as sp

from .errors import DomainError

__all__ = [
    "bessel_j0",
    "bessel_k0",
    "erfi",
    "scaled_erfi",
    "gamma",
    "spherical_bessel_pair",
    "modified_spherical_i_pair",
]


def _finite(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite", value=repr(x))
    return arr


def _out(val, like):
    return float(val) if np.ndim(like) == 0 else val


def bessel_j0(x):
    return _out(sp.j0(_finite(x)), x)


def bessel_k0(x):
    arr = _finite(x)
    if np.any(arr <= 0):
        raise DomainError("K0 needs x > 0", value=repr(x))
    return _out(sp.k0(arr), x)


def erfi(x):
    return _out(sp.erfi(_finite(x)), x)


def scaled_erfi(x):
    """``exp(-x**2) * erfi(x)``, finite for any real ``x``."""
    return _out(2.0 / math.sqrt(math.pi) * sp.dawsn(_finite(x)), x)


def gamma(x):
    arr = _finite(x)
    if np.any(arr <= 0):
        raise DomainError("gamma is only provided for x > 0", value=repr(x))
    return _out(sp.gamma(arr), x)


def spherical_bessel_pair(ell, x):
    """Return ``(j_l, j_l', y_l, y_l')`` at ``x > 0``."""
    arr = _finite(x)
    if np.any(arr <= 0):
        raise DomainError("spherical Bessel functions need x > 0", value=repr(x))
    ell = np.asarray(ell)
    if np.any(ell < 0):
        raise DomainError("order must be >= 0")
    return (
        sp.spherical_jn(ell, arr),
        sp.spherical_jn(ell, arr, derivative=True),
        sp.spherical_yn(ell, arr),
        sp.spherical_yn(ell, arr, derivative=True),
    )


def modified_spherical_i_pair(ell, x, scaled=False):
    """Return ``(i_l, i_l')``; with ``scaled`` both are multiplied by ``exp(-x)``.

    ``x = 0`` is accepted and gives the regular limit (``i_0(0) = 1``).
    """
    arr = _finite(x)
    if np.any(arr < 0):
        raise DomainError("modified spherical Bessel functions need x >= 0")
    ell = np.asarray(ell)
    if np.any(ell < 0):
        raise DomainError("order must be >= 0")
    if not scaled:
        return sp.spherical_in(ell, arr), sp.spherical_in(ell, arr, derivative=True)
    # i_l(x) = sqrt(pi/2x) I_{l+1/2}(x); i_l' = i_{l+1} + l/x i_l
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.sqrt(np.pi / (2.0 * arr))
        i_l = pref * sp.ive(ell + 0.5, arr)
        i_next = pref * sp.ive(ell + 1.5, arr)
        deriv = i_next + ell / arr * i_l
    small = arr == 0
    if np.any(small):
        i_l = np.where(small, np.where(ell == 0, 1.0, 0.0), i_l)
        deriv = np.where(small, np.where(ell == 1, 1.0 / 3.0, 0.0), deriv)
    return i_l, deriv
