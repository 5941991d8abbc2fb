"""Repulsive central potentials and their radial moments.

Units follow the dimensionless Hamiltonians used for each family, with
hbar = 1 and the radial equation

    u'' = [l(l+1)/r**2 + 2*m*V(r) - k**2] u .

* ``SquareBarrier``: ``V = G`` inside ``r < R`` with ``2m = 1`` so that the
  interior wave number is ``sqrt(G - k**2)``.
* ``Singular``: ``H = p**2/2 + G/r**(2N)`` (``m = 1``).
* ``Yukawa``: ``H = p**2/2 + G exp(-r)/r`` (``m = 1``).

``value`` returns ``V`` and every moment is a plain integral of ``V``; the
mass enters only through ``2*m*V`` in the schemes, which use
``pot.mass`` explicitly.  ``reduced_chord`` is the combination ``m*Y``
that appears in every straight-line phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DivergenceError, DomainError, UnsupportedPotentialError
from . import specfun

__all__ = [
    "Potential",
    "SquareBarrier",
    "Singular",
    "Yukawa",
    "potential_from_dict",
    "value",
    "tail_moment",
    "chord_integral",
    "interior_moment",
]


def _check_positive(x, what):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{what} must be finite and > 0", value=repr(x))
    return arr


def _scalar_or_array(out, like):
    return float(out) if np.ndim(like) == 0 else out


@dataclass(frozen=True)
class Potential:
    """Base class; concrete families are frozen dataclasses."""

    G: float

    family = "abstract"
    mass = 1.0
    support = math.inf

    def __post_init__(self):
        if not math.isfinite(self.G) or self.G < 0:
            raise DomainError("coupling G must be finite and >= 0 (repulsive only)", G=self.G)

    # concrete subclasses implement the _raw methods on positive arrays
    def value(self, r):
        r_arr = _check_positive(r, "radius")
        return _scalar_or_array(self._value(r_arr), r)

    def tail_moment(self, r):
        """``T(r) = int_r^inf s V(s) ds``."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(~np.isfinite(r_arr) & ~np.isposinf(r_arr)) or np.any(r_arr < 0):
            raise DomainError("radius must be >= 0", value=repr(r))
        return _scalar_or_array(self._tail(r_arr), r)

    def chord_integral(self, rho):
        """``Y(rho) = int_{-inf}^{inf} V(sqrt(s**2 + rho**2)) ds``."""
        rho_arr = _check_positive(rho, "impact parameter")
        return _scalar_or_array(self._chord(rho_arr), rho)

    def interior_moment(self, r):
        """``int_0^r y**2 V(y) dy``."""
        r_arr = _check_positive(r, "radius")
        return _scalar_or_array(self._interior(r_arr), r)

    def reduced_chord(self, rho):
        """``m * Y(rho)``, the straight-line phase at unit velocity."""
        return self.mass * self.chord_integral(rho)

    def with_coupling(self, G):
        return replace(self, G=float(G))

    def to_dict(self):
        return {"family": self.family, "G": self.G}

    def _interior(self, r):
        raise UnsupportedPotentialError(
            f"interior moment diverges for the {self.family} family", family=self.family
        )


@dataclass(frozen=True)
class SquareBarrier(Potential):
    R: float = 1.0

    family = "square"
    mass = 0.5

    def __post_init__(self):
        super().__post_init__()
        if not (math.isfinite(self.R) and self.R > 0):
            raise DomainError("barrier radius R must be > 0", R=self.R)

    @property
    def support(self):
        return self.R

    def _value(self, r):
        return np.where(r < self.R, self.G, 0.0)

    def _tail(self, r):
        return 0.5 * self.G * np.maximum(self.R**2 - r**2, 0.0)

    def _chord(self, rho):
        return 2.0 * self.G * np.sqrt(np.maximum(self.R**2 - rho**2, 0.0))

    def _interior(self, r):
        return self.G * np.minimum(r, self.R) ** 3 / 3.0

    def to_dict(self):
        return {"family": self.family, "G": self.G, "R": self.R}


@dataclass(frozen=True)
class Singular(Potential):
    N: int = 2

    family = "singular"

    def __post_init__(self):
        super().__post_init__()
        if int(self.N) != self.N or self.N < 2:
            raise DomainError("singular exponent N must be an integer >= 2", N=self.N)
        object.__setattr__(self, "N", int(self.N))

    @property
    def chord_coefficient(self):
        """``c`` in ``Y(rho) = G c rho**(1-2N)``."""
        N = self.N
        # log-gammas keep large exponents finite
        return math.sqrt(math.pi) * math.exp(math.lgamma(N - 0.5) - math.lgamma(N))

    def _value(self, r):
        return self.G / r ** (2 * self.N)

    def _tail(self, r):
        if np.any(r == 0):
            raise DivergenceError("tail moment of the singular potential diverges at r = 0")
        with np.errstate(over="ignore"):
            return self.G / ((2 * self.N - 2) * r ** (2 * self.N - 2))

    def _chord(self, rho):
        return self.G * self.chord_coefficient * rho ** (1 - 2 * self.N)

    def to_dict(self):
        return {"family": self.family, "G": self.G, "N": self.N}


@dataclass(frozen=True)
class Yukawa(Potential):
    family = "yukawa"

    def _value(self, r):
        return self.G * np.exp(-r) / r

    def _tail(self, r):
        return self.G * np.exp(-r)

    def _chord(self, rho):
        return 2.0 * self.G * specfun.bessel_k0(rho)

    def _interior(self, r):
        return self.G * (-np.expm1(-r) - r * np.exp(-r))


_FAMILIES = {"square": SquareBarrier, "singular": Singular, "yukawa": Yukawa}


def potential_from_dict(spec):
    """Build a potential from ``{"family": ..., "G": ..., "R": ..., "N": ...}``."""
    try:
        family = spec["family"]
        cls = _FAMILIES[family]
    except KeyError:
        raise ConfigError(f"unknown or missing potential family in {spec!r}") from None
    kwargs = {"G": float(spec["G"])} if "G" in spec else {}
    if "G" not in kwargs:
        raise ConfigError("potential needs a coupling 'G'")
    if cls is SquareBarrier and spec.get("R") is not None:
        kwargs["R"] = float(spec["R"])
    if cls is Singular:
        if spec.get("N") is None:
            raise ConfigError("singular potential needs an exponent 'N'")
        kwargs["N"] = int(spec["N"])
    return cls(**kwargs)


# functional aliases
def value(pot, r):
    return pot.value(r)


def tail_moment(pot, r):
    return pot.tail_moment(r)


def chord_integral(pot, rho):
    return pot.chord_integral(rho)


def interior_moment(pot, r):
    return pot.interior_moment(r)
