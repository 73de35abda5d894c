"""Estimators turning simulated paths into measurable quantities.

Covers level occupation profiles, the martingale/drift decomposition of
the embedded horizontal position, variance and quantile-spread curves
over a horizon grid, log-log exponent fits, and origin-return counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ensembles
from .environment import Environment, OrientationScheme, StayProbLaw, stability_index
from .walk import EmbeddedPath


@dataclass
class LocalTimeProfile:
    m: int
    counts: dict[int, int]

    def total(self) -> int:
        return sum(self.counts.values())


def local_time_profile(S: np.ndarray, m: int) -> LocalTimeProfile:
    """Occupation counts N_m(y) = #{k < m : S_k = y}."""
    if m < 0 or m > len(S):
        raise IndexError(f"profile horizon {m} outside path of length {len(S)}")
    if m == 0:
        return LocalTimeProfile(m=0, counts={})
    levels, counts = np.unique(np.asarray(S[:m]), return_counts=True)
    return LocalTimeProfile(m=m, counts={int(y): int(c) for y, c in zip(levels, counts)})


@dataclass
class Decomposition:
    """X_m split into environment drift D and centered martingale part S_bar."""

    D: float
    S_bar: float
    X: int


def decompose(path: EmbeddedPath, env: Environment, m: int) -> Decomposition:
    """Split X_m = S_bar + D with D = sum_y eps_y * p_y/(1-p_y) * N_m(y)."""
    if m < 0 or m > path.jumps:
        raise IndexError(f"decomposition horizon {m} outside path with {path.jumps} jumps")
    profile = local_time_profile(path.S, m)
    d = 0.0
    for y, count in profile.counts.items():
        rec = env.level(y)
        d += rec.epsilon * rec.p / (1.0 - rec.p) * count
    s_bar = 0.0
    for k in range(m):
        rec = env.level(int(path.S[k]))
        s_bar += rec.epsilon * (float(path.xi[k]) - rec.p / (1.0 - rec.p))
    return Decomposition(D=d, S_bar=s_bar, X=int(path.X[m]))


@dataclass
class ScalingEstimate:
    points: list[tuple[int, float, float]]
    slope: float
    slope_se: float
    intercept: float


def fit_exponent(points) -> ScalingEstimate:
    """OLS fit of log(statistic) against log(n)."""
    points = [(int(n), float(s), float(se)) for n, s, se in points]
    if len(points) < 3:
        raise ValueError("need at least 3 points to fit an exponent")
    ns = np.array([p[0] for p in points], dtype=float)
    stats = np.array([p[1] for p in points])
    if np.any(stats <= 0):
        raise ValueError("statistics must be positive for a log-log fit")
    lx, ly = np.log(ns), np.log(stats)
    (slope, intercept), cov = np.polyfit(lx, ly, 1, cov=True)
    return ScalingEstimate(
        points=points,
        slope=float(slope),
        slope_se=float(np.sqrt(cov[0, 0])),
        intercept=float(intercept),
    )


class InfiniteVarianceError(ValueError):
    """Raised when a variance estimate is requested in the heavy-tail regime."""


def estimate_variance(
    law: StayProbLaw,
    scheme: OrientationScheme,
    horizons,
    replicas: int,
    seed: int,
    force: bool = False,
    jump_horizons: bool = True,
) -> list[tuple[int, float, float]]:
    """Sample variance of X at each horizon, with jackknife standard errors.

    Horizons are interpreted as the n of X_{2n} when jump_horizons is
    set, matching the paired structure of the variance formula for
    alternating orientations.
    """
    if replicas < 2:
        raise ValueError("need at least 2 replicas")
    if stability_index(law) < 2.0 and not force:
        raise InfiniteVarianceError(
            "infinite variance regime; use quantile_spread (or pass force=True)"
        )
    out = []
    for i, n in enumerate(horizons):
        jumps = 2 * int(n) if jump_horizons else int(n)
        x = ensembles.embedded_endpoints(law, scheme, jumps, replicas, seed + i)
        var = float(np.var(x, ddof=1))
        out.append((int(n), var, _jackknife_var_se(x)))
    return out


def _jackknife_var_se(x: np.ndarray, blocks: int = 100) -> float:
    """Delete-one-block jackknife SE of the sample variance."""
    blocks = min(blocks, len(x))
    parts = np.array_split(x, blocks)
    n = len(x)
    total = x.sum()
    total_sq = (x.astype(float) ** 2).sum()
    estimates = []
    for part in parts:
        m = n - len(part)
        s1 = total - part.sum()
        s2 = total_sq - (part.astype(float) ** 2).sum()
        estimates.append((s2 - s1 * s1 / m) / (m - 1))
    estimates = np.array(estimates)
    return float(np.sqrt((blocks - 1) / blocks * ((estimates - estimates.mean()) ** 2).sum()))


def quantile_spread_of(x: np.ndarray, q: float) -> float:
    return float(np.quantile(x, 1.0 - q) - np.quantile(x, q))


def quantile_spread(
    law: StayProbLaw,
    scheme: OrientationScheme,
    horizons,
    replicas: int,
    seed: int,
    q: float = 0.25,
    bootstrap: int = 1000,
) -> list[tuple[int, float, float]]:
    """Inter-quantile range [q, 1-q] of X_n per horizon, bootstrap SE."""
    if not 0.0 < q < 0.5:
        raise ValueError("q must be in (0, 0.5)")
    if replicas < 100:
        raise ValueError("need at least 100 replicas for a quantile spread")
    out = []
    for i, n in enumerate(horizons):
        x = ensembles.embedded_endpoints(law, scheme, int(n), replicas, seed + i)
        spread = quantile_spread_of(x, q)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0xB00, i)))
        res = np.empty(bootstrap)
        for b in range(bootstrap):
            res[b] = quantile_spread_of(rng.choice(x, size=len(x), replace=True), q)
        out.append((int(n), spread, float(res.std(ddof=1))))
    return out


@dataclass
class ReturnStats:
    horizons: list[int]
    mean_returns: list[float]
    std_error: list[float]


def count_returns(
    law: StayProbLaw,
    scheme: OrientationScheme,
    horizons,
    replicas: int,
    seed: int,
) -> ReturnStats:
    """Mean number of visits of the walk to the origin in (0, horizon]."""
    hs = [int(h) for h in horizons]
    if hs != sorted(hs):
        raise ValueError("horizons must be increasing")
    counts = ensembles.origin_returns(law, scheme, hs, replicas, seed)
    means = counts.mean(axis=1)
    ses = counts.std(axis=1, ddof=1) / np.sqrt(replicas)
    return ReturnStats(
        horizons=hs,
        mean_returns=[float(m) for m in means],
        std_error=[float(s) for s in ses],
    )
