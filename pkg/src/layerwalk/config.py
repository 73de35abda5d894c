"""Line-oriented experiment configs: flat `key = value` pairs.

Law literals use a small `name(arg, ...)` grammar, e.g. `constant(0.5)`
or `twopoint(0.333, 0.667, 0.5)`.  Unknown keys are rejected.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .environment import (
    Alternating,
    BetaLaw,
    ConfigurationError,
    Constant,
    IidRademacher,
    OrientationScheme,
    StableTail,
    StayProbLaw,
    TwoPoint,
)

EXPERIMENTS = ("simulate", "variance", "exponent", "returns", "limit", "validate")

_KNOWN_KEYS = {
    "experiment",
    "scheme",
    "law",
    "horizons",
    "replicas",
    "seed",
    "threads",
    "output_dir",
    "dt",
    "h",
    "q",
    "delta_draws",
}


class ConfigError(ValueError):
    """Malformed experiment config."""


@dataclass
class ExperimentConfig:
    experiment: str
    scheme: OrientationScheme
    law: StayProbLaw
    horizons: list[int]
    replicas: int = 10_000
    seed: int = 0
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    output_dir: str = "."
    dt: float | None = None
    h: float | None = None
    q: float = 0.25
    delta_draws: int = 5000

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if not self.horizons:
            raise ConfigError("horizons must be non-empty")
        if any(b <= a for a, b in zip(self.horizons, self.horizons[1:])):
            raise ConfigError("horizons must be increasing")


_LITERAL = re.compile(r"^\s*([a-z_]+)\s*\(\s*([^)]*)\)\s*$")


def parse_law(text: str) -> StayProbLaw:
    m = _LITERAL.match(text.strip().lower())
    if not m:
        raise ConfigError(f"cannot parse law literal {text!r}; expected name(args)")
    name, argtext = m.group(1), m.group(2)
    try:
        args = [float(a) for a in argtext.split(",")] if argtext.strip() else []
    except ValueError as exc:
        raise ConfigError(f"bad law arguments in {text!r}: {exc}") from None
    families = {
        "constant": (Constant, 1),
        "twopoint": (TwoPoint, 3),
        "beta": (BetaLaw, 2),
        "stabletail": (StableTail, (1, 2, 3)),
    }
    if name not in families:
        raise ConfigError(f"unknown law family {name!r}")
    cls, arity = families[name]
    arities = arity if isinstance(arity, tuple) else (arity,)
    if len(args) not in arities:
        raise ConfigError(f"law {name} takes {arities} arguments, got {len(args)}")
    try:
        return cls(*args)
    except ConfigurationError as exc:
        raise ConfigError(str(exc)) from None


def parse_scheme(text: str) -> OrientationScheme:
    name = text.strip().lower()
    if name == "alternating":
        return Alternating()
    if name in ("iid", "iid_rademacher"):
        return IidRademacher()
    raise ConfigError(f"unknown scheme {text!r}")


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value.strip()

    for required in ("experiment", "scheme", "law"):
        if required not in raw:
            raise ConfigError(f"missing required key {required!r}")

    kwargs: dict = {
        "experiment": raw["experiment"].lower(),
        "scheme": parse_scheme(raw["scheme"]),
        "law": parse_law(raw["law"]),
        "horizons": _parse_horizons(raw.get("horizons", "1024")),
    }
    for key, cast in (
        ("replicas", int),
        ("seed", int),
        ("threads", int),
        ("delta_draws", int),
        ("dt", float),
        ("h", float),
        ("q", float),
    ):
        if key in raw:
            try:
                kwargs[key] = cast(raw[key])
            except ValueError:
                raise ConfigError(f"key {key!r}: cannot parse {raw[key]!r}") from None
    if "output_dir" in raw:
        kwargs["output_dir"] = raw["output_dir"]
    if "THREADS" in os.environ:
        kwargs["threads"] = int(os.environ["THREADS"])
    return ExperimentConfig(**kwargs)


def _parse_horizons(text: str) -> list[int]:
    try:
        return [int(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"key 'horizons': cannot parse {text!r}") from None


def describe_law(law: StayProbLaw) -> str:
    if isinstance(law, Constant):
        return f"constant({law.p})"
    if isinstance(law, TwoPoint):
        return f"twopoint({law.p_lo},{law.p_hi},{law.w})"
    if isinstance(law, BetaLaw):
        return f"beta({law.a},{law.b})"
    if isinstance(law, StableTail):
        return f"stabletail({law.beta},{law.scale},{law.loc})"
    raise TypeError(f"unknown law {law!r}")


def describe_scheme(scheme: OrientationScheme) -> str:
    return "alternating" if isinstance(scheme, Alternating) else "iid_rademacher"
