"""Monte Carlo over Euclidean Brownian paths.

For a path ``xi`` started at the origin with ``<xi_i(nu)^2> = nu`` the
zero-energy solution normalised to 1 at infinity is

    psi(r) = E[ exp(-m int_0^inf V(|r e_z - xi(nu)|) d nu) ],

and the scattering length is ``a = 2m int r^2 V(r) psi(r) dr``.

The horizon ``nu_max`` is closed exactly by the Markov property: beyond
the range of the potential ``psi(x) = 1 - a/|x|``, so each path
contributes ``W_T (1 - a/|x_T|)``.  ``a`` enters linearly on both sides
and is solved for in closed form.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import special as sp

from .errors import DomainError, UnsupportedPotentialError
from .numerics import path_stream
from .potentials import Singular, SquareBarrier, Yukawa

__all__ = [
    "McConfig",
    "McEstimate",
    "sample_path",
    "path_weights",
    "mc_phi",
    "mc_scattering_length",
    "radial_nodes",
]

log = logging.getLogger(__name__)

_NODE_STREAM_OFFSET = 1000


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 4096
    d_nu: float = 0.01
    nu_max: float = 40.0
    seed: int = 12345
    antithetic: bool = False
    batch: int = 256
    n_nodes: int = 12

    def __post_init__(self):
        if not self.d_nu > 0:
            raise DomainError("d_nu must be > 0", d_nu=self.d_nu)
        steps = self.nu_max / self.d_nu
        if abs(steps - round(steps)) > 1e-9 * steps or steps < 1:
            raise DomainError("nu_max must be an integer multiple of d_nu", nu_max=self.nu_max, d_nu=self.d_nu)
        if self.n_paths < 2:
            raise DomainError("need at least two paths", n_paths=self.n_paths)
        if self.antithetic and self.n_paths % 2:
            raise DomainError("antithetic sampling needs an even path count", n_paths=self.n_paths)
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits", seed=self.seed)

    @property
    def n_steps(self):
        return int(round(self.nu_max / self.d_nu))


@dataclass
class McEstimate:
    mean: float
    stderr: float
    n_paths: int
    d_nu: float
    nu_max: float
    ess: float = float("nan")
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _increments(cfg, stream, index):
    g = path_stream(cfg.seed, stream, index)
    return g.standard_normal((cfg.n_steps, 3)) * math.sqrt(cfg.d_nu)


def sample_path(cfg, stream=0, index=0):
    """Discretised path ``xi_0 = 0, ..., xi_n`` (shape ``(n_steps + 1, 3)``)."""
    steps = _increments(cfg, stream, index)
    return np.vstack([np.zeros((1, 3)), np.cumsum(steps, axis=0)])


def path_weights(pot, r, cfg, stream=0, start=0, count=None):
    """``(W_T, |x_T|)`` for ``count`` paths from index ``start``.

    With antithetic sampling path ``2j+1`` is the mirror image of path ``2j``.
    The potential is sampled at the midpoint of every step.
    """
    count = cfg.n_paths if count is None else count
    x0 = np.array([0.0, 0.0, r])
    W = np.empty(count)
    end = np.empty(count)
    for b0 in range(0, count, cfg.batch):
        idx = range(start + b0, start + min(count, b0 + cfg.batch))
        if cfg.antithetic:
            base = [_increments(cfg, stream, i // 2) for i in idx if i % 2 == 0]
            incs = []
            for inc in base:
                incs.append(inc)
                incs.append(-inc)
            incs = np.stack(incs[: len(idx)])
        else:
            incs = np.stack([_increments(cfg, stream, i) for i in idx])
        xi = np.cumsum(incs, axis=1)
        prev = np.concatenate([np.zeros((len(idx), 1, 3)), xi[:, :-1]], axis=1)
        mid = x0 - 0.5 * (xi + prev)
        dist = np.sqrt(np.einsum("bsk,bsk->bs", mid, mid))
        with np.errstate(over="ignore", divide="ignore"):
            action = pot.mass * cfg.d_nu * np.sum(pot.value(np.maximum(dist, 1e-300)), axis=1)
            w = np.exp(-action)
        if np.any(w > 1.0) or np.any(w < 0.0):
            raise AssertionError("path weight left [0, 1]")
        sl = slice(b0, b0 + len(idx))
        W[sl] = w
        end[sl] = np.linalg.norm(x0 - xi[:, -1], axis=1)
    if np.any(W == 0):
        log.info("%d path weights underflowed to zero", int(np.sum(W == 0)))
    return W, end


def _paired(values, antithetic):
    """Per-sample values to average; antithetic pairs are merged first."""
    return 0.5 * (values[0::2] + values[1::2]) if antithetic else values


def _ess(W):
    s2 = float(np.sum(W * W))
    return float(np.sum(W)) ** 2 / s2 if s2 > 0 else 0.0


def radial_nodes(pot, n):
    """Nodes ``r_i`` and weights ``w_i`` for ``2m int r^2 V(r) psi(r) dr``.

    Also returns the linear tail ``(c0, c1)`` so that the part of the
    integral beyond the nodes equals ``c0 - a c1`` (non-zero only for the
    power law).
    """
    m = pot.mass
    if isinstance(pot, Yukawa):
        # r^2 V = G r exp(-r): generalised Gauss-Laguerre with alpha = 1
        x, w = sp.roots_genlaguerre(n, 1.0)
        return x, 2 * m * pot.G * w, (0.0, 0.0)
    if isinstance(pot, SquareBarrier):
        x, w = sp.roots_legendre(n)
        r = 0.5 * pot.R * (x + 1)
        return r, 2 * m * pot.G * r * r * 0.5 * pot.R * w, (0.0, 0.0)
    if isinstance(pot, Singular):
        N = pot.N
        r_s = (pot.G / (N - 1)) ** (1.0 / (2 * N - 2))
        r_c = 3.0 * r_s
        x, w = sp.roots_legendre(n)
        r = 0.5 * r_c * (x + 1)
        wr = 2 * m * pot.G * r ** (2 - 2 * N) * 0.5 * r_c * w
        c0 = 2 * m * pot.G * r_c ** (3 - 2 * N) / (2 * N - 3)
        c1 = 2 * m * pot.G * r_c ** (2 - 2 * N) / (2 * N - 2)
        return r, wr, (c0, c1)
    raise UnsupportedPotentialError(f"no radial rule for the {pot.family} family", family=pot.family)


def mc_scattering_length(pot, cfg=McConfig()):
    """Scattering length with its delta-method standard error.

    Each radial node has its own path streams; covariance between nodes is
    therefore zero by construction.
    """
    if pot.G == 0:
        return McEstimate(0.0, 0.0, 0, cfg.d_nu, cfg.nu_max, ess=float(cfg.n_paths))
    r, w, (c0, c1) = radial_nodes(pot, cfg.n_nodes)
    A_bar, B_bar, samples, ess = [], [], [], []
    for i, ri in enumerate(r):
        W, end = path_weights(pot, ri, cfg, stream=_NODE_STREAM_OFFSET + i)
        A = _paired(W, cfg.antithetic)
        B = _paired(W / end, cfg.antithetic)
        A_bar.append(A.mean())
        B_bar.append(B.mean())
        samples.append((A, B))
        ess.append(_ess(W))
    A_bar, B_bar = np.array(A_bar), np.array(B_bar)
    num = float(np.sum(w * A_bar)) + c0
    den = 1.0 + float(np.sum(w * B_bar)) + c1
    a = num / den
    var = sum(wi * wi * np.var(A - a * B, ddof=1) / len(A) for wi, (A, B) in zip(w, samples))
    stderr = math.sqrt(var) / den
    return McEstimate(
        a,
        stderr,
        cfg.n_paths * len(r),
        cfg.d_nu,
        cfg.nu_max,
        ess=float(min(ess)),
        details={
            "nodes": r.tolist(),
            "psi": (A_bar - a * B_bar).tolist(),
            "covariance": "neglected (independent streams per node)",
        },
    )


def mc_phi(pot, r, cfg=McConfig(), tail_length=None, stream=0):
    """Estimate ``<exp(Phi(r))> = psi(r)``.

    ``tail_length`` is the scattering length used to close the horizon; by
    default it is estimated first with :func:`mc_scattering_length`.
    """
    if not (math.isfinite(r) and r > 0):
        raise DomainError("r must be > 0", r=r)
    if pot.G == 0:
        return McEstimate(1.0, 0.0, cfg.n_paths, cfg.d_nu, cfg.nu_max, ess=float(cfg.n_paths))
    if tail_length is None:
        tail_length = mc_scattering_length(pot, cfg).mean
    W, end = path_weights(pot, r, cfg, stream=stream)
    vals = _paired(W * (1 - tail_length / end), cfg.antithetic)
    return McEstimate(
        float(vals.mean()),
        float(vals.std(ddof=1) / math.sqrt(len(vals))),
        cfg.n_paths,
        cfg.d_nu,
        cfg.nu_max,
        ess=_ess(W),
        details={"tail_length": tail_length, "horizon_mean": float(W.mean())},
    )
