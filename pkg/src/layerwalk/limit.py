"""Simulation of the scaling-limit objects and distribution comparison.

The limit of the rescaled horizontal position is (a multiple of) the
process Delta_t = integral of Brownian local time L_t(x) against an
independent stable process Z.  Delta is simulated on a spatial grid:
occupation-time binning estimates L, and independent stable increments
over each bin play the role of dZ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import ensembles
from .environment import OrientationScheme, StayProbLaw, theoretical_constants

QUANTILE_LEVELS = (0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99)


@dataclass(frozen=True)
class StableSpec:
    """Symmetric stable noise: E exp(i theta Z_t) = exp(-a1 |t| |theta|^beta).

    beta = 2 is Gaussian with variance 2*a1 per unit length.
    """

    beta: float
    a1: float = 1.0
    skew: str = "symmetric"

    def __post_init__(self):
        if not 1.0 < self.beta <= 2.0:
            raise ValueError(f"stable index must be in (1,2], got {self.beta}")
        if self.a1 <= 0:
            raise ValueError(f"scale a1 must be > 0, got {self.a1}")
        if self.skew not in ("symmetric", "totally_skewed"):
            raise ValueError(f"unknown skew {self.skew!r}")


def sample_stable(spec: StableSpec, length: float, rng: np.random.Generator, size=None):
    """Increment(s) of Z over an interval of the given length.

    Uses the polar (uniform angle + exponential) transformation for
    beta < 2; the scale is (a1 * length)^(1/beta).
    """
    if length <= 0:
        raise ValueError("interval length must be > 0")
    if spec.beta == 2.0:
        return rng.normal(0.0, math.sqrt(2.0 * spec.a1 * length), size)
    if spec.skew != "symmetric":
        raise NotImplementedError("only the symmetric branch is simulated")
    b = spec.beta
    phi = rng.uniform(-math.pi / 2, math.pi / 2, size)
    w = rng.exponential(1.0, size)
    x = (
        np.sin(b * phi)
        / np.cos(phi) ** (1.0 / b)
        * (np.cos((1.0 - b) * phi) / w) ** ((1.0 - b) / b)
    )
    return (spec.a1 * length) ** (1.0 / b) * x


@dataclass
class GridLocalTime:
    """Occupation densities of a path over a centered bin grid."""

    t: float
    bin_width: float
    offset: int  # bins[i] covers [ (i - offset) * h, (i - offset + 1) * h )
    bins: np.ndarray

    def occupation_total(self) -> float:
        return float(self.bin_width * self.bins.sum())

    def level(self, x: float) -> float:
        i = math.floor(x / self.bin_width) + self.offset
        if 0 <= i < len(self.bins):
            return float(self.bins[i])
        return 0.0


def simulate_brownian_local_time(
    t: float, dt: float, h: float, rng: np.random.Generator
) -> tuple[float, GridLocalTime]:
    """Euler Brownian path with occupation-time local time on an h-grid.

    Each step's dt of occupation is attributed to the bin containing the
    current (left) position, so h * sum(bins) = t holds exactly.
    """
    steps = _check_grid(t, dt, h)
    b = np.concatenate(([0.0], np.cumsum(rng.normal(0.0, math.sqrt(dt), steps))))
    idx = np.floor(b[:-1] / h).astype(np.int64)
    lo, hi = int(idx.min()), int(idx.max())
    counts = np.bincount(idx - lo, minlength=hi - lo + 1)
    lt = GridLocalTime(t=t, bin_width=h, offset=-lo, bins=counts * (dt / h))
    return float(b[-1]), lt


def _check_grid(t: float, dt: float, h: float) -> int:
    if dt <= 0 or h <= 0:
        raise ValueError("dt and h must be > 0")
    steps = round(t / dt)
    if abs(steps * dt - t) > 1e-9 * max(t, 1.0):
        raise ValueError("t/dt must be an integer")
    return steps


def integrate_against_noise(lt: GridLocalTime, dz: np.ndarray) -> float:
    """sum_i L(x_i) dZ_i; linear in the noise for a frozen profile."""
    if len(dz) != len(lt.bins):
        raise ValueError("noise increments must match the grid")
    return float(np.dot(lt.bins, dz))


def simulate_delta(
    t: float, spec: StableSpec, dt: float, h: float, rng: np.random.Generator
) -> tuple[float, float]:
    """One draw of (Delta_t, B_t): local time integrated against fresh noise."""
    if t == 0:
        return 0.0, 0.0
    endpoint, lt = simulate_brownian_local_time(t, dt, h, rng)
    dz = sample_stable(spec, h, rng, size=len(lt.bins))
    return integrate_against_noise(lt, dz), endpoint


@dataclass
class LimitSample:
    t: float
    spec: StableSpec
    dt: float
    h: float
    values: np.ndarray
    endpoints: np.ndarray = field(default=None)


def sample_delta_ensemble(
    t: float, spec: StableSpec, dt: float, h: float, draws: int, seed: int
) -> LimitSample:
    """Independent Delta_t draws, vectorized across replicas."""
    steps = _check_grid(t, dt, h)
    values = np.empty(draws)
    endpoints = np.empty(draws)
    pos = 0
    chunk = max(1, min(1024, (1 << 27) // max(steps, 1)))
    for n_rep, rng in ensembles._block_rngs(seed, draws, block=chunk):
        b = np.cumsum(rng.normal(0.0, math.sqrt(dt), (n_rep, steps)), axis=1)
        occupied = np.empty((n_rep, steps))
        occupied[:, 0] = 0.0
        occupied[:, 1:] = b[:, :-1]
        idx = np.floor(occupied / h).astype(np.int64)
        lo, hi = int(idx.min()), int(idx.max())
        width = hi - lo + 1
        flat = (idx - lo) + (np.arange(n_rep, dtype=np.int64) * width)[:, None]
        counts = np.bincount(flat.ravel(), minlength=n_rep * width).reshape(n_rep, width)
        lt = counts * (dt / h)
        dz = sample_stable(spec, h, rng, size=(n_rep, width))
        values[pos : pos + n_rep] = (lt * dz).sum(axis=1)
        endpoints[pos : pos + n_rep] = b[:, -1]
        pos += n_rep
    return LimitSample(t=t, spec=spec, dt=dt, h=h, values=values, endpoints=endpoints)


def compare_distributions(a, b) -> tuple[float, list[tuple[float, float, float]]]:
    """Two-sample KS statistic and matched quantiles."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("samples must be non-empty")
    ks = float(sps.ks_2samp(a, b).statistic)
    table = [
        (q, float(np.quantile(a, q)), float(np.quantile(b, q))) for q in QUANTILE_LEVELS
    ]
    return ks, table


def rescaled_walk_sample(
    law: StayProbLaw,
    scheme: OrientationScheme,
    n: int,
    replicas: int,
    seed: int,
    normalize_sigma: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Rescaled (horizontal, vertical) marginals of M_n at time n.

    The horizontal sample is n^(-delta) M_n^(1) / (gamma^(-delta) sigma)
    and the vertical one is gamma^(1/2) n^(-1/2) M_n^(2), so the limit
    targets are Delta_1 (driven by standard noise) and B_1.  With
    normalize_sigma off, sigma is left in the sample and the target is
    Delta_1 with a1 = sigma^2/2 instead.
    """
    consts = theoretical_constants(law)
    from .environment import Alternating

    sigma = consts.sigma_a if isinstance(scheme, Alternating) else consts.sigma_b
    if normalize_sigma and sigma == 0.0:
        raise ValueError("limit degenerate; horizontal target is 0 (sigma = 0)")
    xs, ys = ensembles.walk_positions(law, scheme, n, replicas, seed)
    scale_x = n ** (-consts.delta) / (consts.gamma ** (-consts.delta))
    if normalize_sigma:
        scale_x /= sigma
    return xs * scale_x, ys * (consts.gamma / n) ** 0.5
