"""Scattering lengths, amplitudes and cross sections for repulsive central
potentials, from straight-line, quantum-mean and unitary approximations to
the path-integral amplitude, checked against partial-wave solutions and a
Brownian-path Monte Carlo."""

from .errors import (
    BracketError,
    CalibrationError,
    ConfigError,
    ConvergenceError,
    DegenerateCalibrationError,
    DivergenceError,
    DomainError,
    QuadratureError,
    ScatteringError,
    UnsupportedPotentialError,
)
from .potentials import Singular, SquareBarrier, Yukawa, potential_from_dict

__version__ = "0.1.0"

__all__ = [
    "SquareBarrier",
    "Singular",
    "Yukawa",
    "potential_from_dict",
    "ScatteringError",
    "DomainError",
    "DivergenceError",
    "UnsupportedPotentialError",
    "QuadratureError",
    "BracketError",
    "ConvergenceError",
    "CalibrationError",
    "DegenerateCalibrationError",
    "ConfigError",
]
