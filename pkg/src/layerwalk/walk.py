"""Two equivalent simulators for the layered walk, plus an exact oracle.

The direct simulator runs the Markov chain step by step: from line y the
walk moves horizontally by (epsilon_y, 0) with probability p_y, else up
or down with probability (1-p_y)/2 each.

The embedded simulator tracks the walk at line-change times only: the
line sequence S is a simple symmetric random walk, the sojourn on line
S_k is geometric on {0,1,...} with mean p/(1-p), and the horizontal
position at the k-th change is X_k = sum_{j<k} epsilon_{S_j} xi_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .environment import Environment


@dataclass(frozen=True)
class WalkerState:
    x: int
    y: int
    t: int


@dataclass
class EmbeddedPath:
    """Arrays indexed by jump count k: line S_k, sojourn xi_k, position X_k, time T_k."""

    S: np.ndarray
    xi: np.ndarray
    X: np.ndarray
    T: np.ndarray

    @property
    def jumps(self) -> int:
        return len(self.S) - 1


def sample_sojourn(p: float, rng: np.random.Generator) -> int:
    """Geometric-on-{0,1,...} sojourn length with P(xi = m) = (1-p) p^m."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"sojourn parameter p must be in (0,1), got {p}")
    if p > 0.1:
        # inverse CDF; exact in distribution
        return int(math.log(rng.random()) / math.log(p))
    # direct Bernoulli trials; avoids log precision issues at tiny p
    m = 0
    while rng.random() < p:
        m += 1
    return m


def step_direct(state: WalkerState, env: Environment, rng: np.random.Generator) -> WalkerState:
    rec = env.level(state.y)
    u = rng.random()
    if u < rec.p:
        return WalkerState(state.x + rec.epsilon, state.y, state.t + 1)
    if u < rec.p + (1.0 - rec.p) / 2.0:
        return WalkerState(state.x, state.y + 1, state.t + 1)
    return WalkerState(state.x, state.y - 1, state.t + 1)


def simulate_direct(env: Environment, n: int, rng: np.random.Generator) -> list[WalkerState]:
    """Path (M_0, ..., M_n) of the direct chain started at the origin."""
    if n < 0:
        raise ValueError("n must be >= 0")
    path = [WalkerState(0, 0, 0)]
    for _ in range(n):
        path.append(step_direct(path[-1], env, rng))
    return path


def simulate_embedded(env: Environment, jumps: int, rng: np.random.Generator) -> EmbeddedPath:
    """One realization of (S, xi, X, T) with the given number of line changes."""
    if jumps < 0:
        raise ValueError("jumps must be >= 0")
    steps = rng.integers(0, 2, size=jumps) * 2 - 1
    S = np.concatenate(([0], np.cumsum(steps))).astype(np.int64)
    xi = np.empty(jumps, dtype=np.int64)
    eps = np.empty(jumps, dtype=np.int64)
    for k in range(jumps):
        rec = env.level(int(S[k]))
        xi[k] = sample_sojourn(rec.p, rng)
        eps[k] = rec.epsilon
    X = np.concatenate(([0], np.cumsum(eps * xi)))
    T = np.concatenate(([0], np.cumsum(xi + 1)))
    return EmbeddedPath(S=S, xi=xi, X=X, T=T)


def position_at_time(path: EmbeddedPath, env: Environment, n: int) -> tuple[int, int]:
    """(M_n^(1), M_n^(2)) reconstructed from the embedded representation.

    With k the last jump time T_k <= n, the walk sits on line S_k and has
    advanced min(n - T_k, xi_k) horizontal steps into the current sojourn.
    """
    if n < 0 or n > path.T[-1]:
        raise IndexError(f"time {n} outside simulated horizon {path.T[-1]}")
    k = int(np.searchsorted(path.T, n, side="right")) - 1
    level = int(path.S[k])
    progress = n - int(path.T[k])
    if k < len(path.xi):
        progress = min(progress, int(path.xi[k]))
    x = int(path.X[k]) + env.level(level).epsilon * progress
    return x, level


@dataclass
class ExactDistribution:
    horizon: int
    mass: dict[tuple[int, int], float]

    def total_variation(self, other: dict[tuple[int, int], float]) -> float:
        keys = set(self.mass) | set(other)
        return 0.5 * sum(abs(self.mass.get(k, 0.0) - other.get(k, 0.0)) for k in keys)


MAX_EXACT_HORIZON = 20


def exact_distribution(env: Environment, n: int) -> ExactDistribution:
    """Exact law of M_n by forward dynamic programming over the kernel."""
    if n > MAX_EXACT_HORIZON:
        raise ValueError(f"exact distribution limited to n <= {MAX_EXACT_HORIZON}")
    if n < 0:
        raise ValueError("n must be >= 0")
    size = 2 * n + 1
    prob = np.zeros((size, size))
    prob[n, n] = 1.0  # index offset n: state (x, y) at [x+n, y+n]
    eps = np.array([env.level(y).epsilon for y in range(-n, n + 1)])
    p = np.array([env.level(y).p for y in range(-n, n + 1)])
    for _ in range(n):
        nxt = np.zeros_like(prob)
        for yi in range(size):
            row = prob[:, yi]
            if not row.any():
                continue
            stay = row * p[yi]
            if eps[yi] > 0:
                nxt[1:, yi] += stay[:-1]
            else:
                nxt[:-1, yi] += stay[1:]
            vert = row * (1.0 - p[yi]) / 2.0
            if yi + 1 < size:
                nxt[:, yi + 1] += vert
            if yi - 1 >= 0:
                nxt[:, yi - 1] += vert
        prob = nxt
    total = prob.sum()
    if abs(total - 1.0) > 1e-12:
        raise AssertionError(f"probability mass leaked: sum = {total}")
    mass = {
        (xi - n, yi - n): float(prob[xi, yi])
        for xi in range(size)
        for yi in range(size)
        if prob[xi, yi] > 0.0
    }
    return ExactDistribution(horizon=n, mass=mass)
