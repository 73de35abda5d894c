"""Random environments for the layered walk.

An environment assigns to every horizontal line y an orientation
epsilon_y in {-1, +1} and a stay probability p_y in (0, 1).  Lines are
materialized lazily: each level is generated from a keyed stream derived
from (master_seed, stream tag, level), so level queries are pure
functions and do not depend on query order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

# p is kept this far away from {0, 1}; p/(1-p) stays finite.
P_CLAMP = 1e-12

# stream tags keying the per-level generators
_TAG_P = 0x5150
_TAG_EPS = 0xE125


class ConfigurationError(ValueError):
    """Invalid law or scheme parameters."""


# ---------------------------------------------------------------------------
# orientation schemes


@dataclass(frozen=True)
class Alternating:
    """epsilon_y = (-1)^y; even lines point right, odd lines left."""

    def sign(self, y: int) -> int:
        return 1 if y % 2 == 0 else -1


@dataclass(frozen=True)
class IidRademacher:
    """Independent fair signs per line, independent of the p's."""


@dataclass(frozen=True)
class Fixed:
    """Explicit signs for a finite set of lines; anything else is an error."""

    signs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple((int(y), int(s)) for y, s in self.signs))
        for y, s in self.signs:
            if s not in (-1, 1):
                raise ConfigurationError(f"sign for level {y} must be +-1, got {s}")

    def sign(self, y: int) -> int:
        for level, s in self.signs:
            if level == y:
                return s
        raise KeyError(f"level {y} not in fixed scheme")


OrientationScheme = Alternating | IidRademacher | Fixed


# ---------------------------------------------------------------------------
# stay-probability laws


@dataclass(frozen=True)
class Constant:
    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError(f"Constant law needs p in (0,1), got p={self.p}")

    def sample(self, rng: np.random.Generator, size=None) -> np.ndarray:
        return np.full(size if size is not None else (), self.p)


@dataclass(frozen=True)
class TwoPoint:
    """p = p_hi with probability w, else p_lo."""

    p_lo: float
    p_hi: float
    w: float

    def __post_init__(self):
        if not 0.0 < self.p_lo < self.p_hi < 1.0:
            raise ConfigurationError(
                f"TwoPoint law needs 0 < p_lo < p_hi < 1, got ({self.p_lo}, {self.p_hi})"
            )
        if not 0.0 < self.w < 1.0:
            raise ConfigurationError(f"TwoPoint law needs w in (0,1), got w={self.w}")

    def sample(self, rng, size=None):
        hi = rng.random(size) < self.w
        return np.where(hi, self.p_hi, self.p_lo)


@dataclass(frozen=True)
class BetaLaw:
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ConfigurationError(f"Beta law needs a, b > 0, got ({self.a}, {self.b})")

    def sample(self, rng, size=None):
        return _clamp(rng.beta(self.a, self.b, size))


@dataclass(frozen=True)
class StableTail:
    """Pareto-type tail for V = p/(1-p): P(V > x) ~ c x^(-beta).

    V = scale * (U^(-1/beta) - 1) + loc with U uniform(0,1), then
    p = V/(1+V).  This puts V minus its mean in the normal domain of
    attraction of a beta-stable law.
    """

    beta: float
    scale: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if not 1.0 < self.beta < 2.0:
            raise ConfigurationError(
                f"StableTail needs beta in (1,2), got beta={self.beta}"
            )
        if self.scale <= 0 or self.loc < 0:
            raise ConfigurationError(
                f"StableTail needs scale > 0 and loc >= 0, got ({self.scale}, {self.loc})"
            )

    def sample(self, rng, size=None):
        u = rng.random(size)
        v = self.scale * (u ** (-1.0 / self.beta) - 1.0) + self.loc
        return _clamp(v / (1.0 + v))


StayProbLaw = Constant | TwoPoint | BetaLaw | StableTail


def _clamp(p):
    return np.clip(p, P_CLAMP, 1.0 - P_CLAMP)


# ---------------------------------------------------------------------------
# environment


@dataclass(frozen=True)
class LevelRecord:
    y: int
    epsilon: int
    p: float


def _zigzag(y: int) -> int:
    """Map Z -> N so levels can key SeedSequence spawn keys."""
    return 2 * y if y >= 0 else -2 * y - 1


def _level_rng(master_seed: int, tag: int, y: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(tag, _zigzag(y)))
    return np.random.default_rng(ss)


@dataclass
class Environment:
    """Lazily materialized environment with deterministic keyed generation."""

    scheme: OrientationScheme
    law: StayProbLaw
    master_seed: int
    cache_cap: int | None = None
    _cache: dict[int, LevelRecord] = field(default_factory=dict, repr=False)

    def level(self, y: int) -> LevelRecord:
        rec = self._cache.get(y)
        if rec is not None:
            return rec
        rec = self._generate(y)
        if self.cache_cap is None or len(self._cache) < self.cache_cap:
            self._cache[y] = rec
        return rec

    def _generate(self, y: int) -> LevelRecord:
        if isinstance(self.scheme, (Alternating, Fixed)):
            eps = self.scheme.sign(y)
        else:
            rng = _level_rng(self.master_seed, _TAG_EPS, y)
            eps = 1 if rng.random() < 0.5 else -1
        p = float(self.law.sample(_level_rng(self.master_seed, _TAG_P, y)))
        return LevelRecord(y=y, epsilon=eps, p=p)

    def epsilon(self, y: int) -> int:
        return self.level(y).epsilon

    def p(self, y: int) -> float:
        return self.level(y).p


def make_environment(
    scheme: OrientationScheme,
    law: StayProbLaw,
    master_seed: int,
    cache_cap: int | None = None,
) -> Environment:
    """Build an environment; law/scheme invariants were checked at construction."""
    return Environment(scheme=scheme, law=law, master_seed=master_seed, cache_cap=cache_cap)


# ---------------------------------------------------------------------------
# theoretical constants


@dataclass(frozen=True)
class TheoreticalConstants:
    """Constants appearing in the scaling limit of the walk.

    delta = 1/2 + 1/(2 beta) is the superdiffusive exponent, gamma the
    mean time spent per line change (1 + E[p/(1-p)]), sigma_a / sigma_b
    the scale factors for alternating / iid orientations.
    """

    beta: float
    delta: float
    gamma: float
    sigma_a: float
    sigma_b: float
    mean_v: float


def _v_moments(law: StayProbLaw) -> tuple[float, float]:
    """(E[V], E[V^2]) for V = p/(1-p); inf for divergent moments."""
    if isinstance(law, Constant):
        v = law.p / (1.0 - law.p)
        return v, v * v
    if isinstance(law, TwoPoint):
        v_lo = law.p_lo / (1.0 - law.p_lo)
        v_hi = law.p_hi / (1.0 - law.p_hi)
        m1 = (1.0 - law.w) * v_lo + law.w * v_hi
        m2 = (1.0 - law.w) * v_lo**2 + law.w * v_hi**2
        return m1, m2
    if isinstance(law, BetaLaw):
        if law.b <= 1.0:
            return math.inf, math.inf

        def density(p):
            return p ** (law.a - 1.0) * (1.0 - p) ** (law.b - 1.0) / _beta_fn(law.a, law.b)

        m1, _ = integrate.quad(lambda p: (p / (1 - p)) * density(p), 0.0, 1.0)
        if law.b <= 2.0:
            return m1, math.inf
        m2, _ = integrate.quad(lambda p: (p / (1 - p)) ** 2 * density(p), 0.0, 1.0)
        return m1, m2
    if isinstance(law, StableTail):
        # E[U^(-1/beta)] = beta/(beta-1); second moment diverges for beta < 2
        m1 = law.scale / (law.beta - 1.0) + law.loc
        return m1, math.inf
    raise TypeError(f"unknown law {law!r}")


def _beta_fn(a, b):
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def stability_index(law: StayProbLaw) -> float:
    """Index beta of the stable law attracting centered sums of p/(1-p)."""
    if isinstance(law, StableTail):
        return law.beta
    if isinstance(law, BetaLaw):
        # tail P(V > x) ~ c x^(-b); finite variance iff b > 2
        return min(law.b, 2.0)
    return 2.0


def theoretical_constants(law: StayProbLaw) -> TheoreticalConstants:
    """Scaling constants of the limit theorem for a given stay-probability law."""
    m1, m2 = _v_moments(law)
    if not math.isfinite(m1):
        raise ConfigurationError("gamma undefined for this law (E[p/(1-p)] = inf)")
    beta = stability_index(law)
    delta = 0.5 + 0.5 / beta
    gamma = 1.0 + m1
    if beta < 2.0:
        sigma_a = sigma_b = 1.0
    else:
        sigma_a = math.sqrt(m2 - m1 * m1)
        sigma_b = math.sqrt(m2)
    return TheoreticalConstants(
        beta=beta, delta=delta, gamma=gamma, sigma_a=sigma_a, sigma_b=sigma_b, mean_v=m1
    )
