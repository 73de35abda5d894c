"""Monte Carlo toolkit for random walks on Z^2 with oriented layers.

The walk lives on Z^2 where each horizontal line y carries a fixed
orientation epsilon_y and a random stay probability p_y.  The package
simulates the walk (directly and through its embedded line-change
chain), estimates variance/spread scaling exponents, contrasts the
transient and recurrent regimes, and compares the rescaled walk against
a direct simulation of its self-similar scaling limit.
"""

__version__ = "0.1.0"

from .environment import (
    Alternating,
    BetaLaw,
    ConfigurationError,
    Constant,
    Environment,
    Fixed,
    IidRademacher,
    LevelRecord,
    StableTail,
    TheoreticalConstants,
    TwoPoint,
    make_environment,
    stability_index,
    theoretical_constants,
)
from .walk import (
    EmbeddedPath,
    ExactDistribution,
    WalkerState,
    exact_distribution,
    position_at_time,
    sample_sojourn,
    simulate_direct,
    simulate_embedded,
    step_direct,
)
from .stats import (
    Decomposition,
    InfiniteVarianceError,
    LocalTimeProfile,
    ReturnStats,
    ScalingEstimate,
    count_returns,
    decompose,
    estimate_variance,
    fit_exponent,
    local_time_profile,
    quantile_spread,
)
from .limit import (
    GridLocalTime,
    LimitSample,
    StableSpec,
    compare_distributions,
    integrate_against_noise,
    rescaled_walk_sample,
    sample_delta_ensemble,
    sample_stable,
    simulate_brownian_local_time,
    simulate_delta,
)
from .config import ExperimentConfig, parse_config
from .runner import RunReport, run_experiment, validate_suite
