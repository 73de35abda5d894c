"""Compare the rescaled walk against its simulated scaling limit.

The horizontal coordinate, rescaled by n^{-delta}, converges to a
self-similar process: Brownian local time integrated against an
independent noise (Gaussian here, since the two-point law has beta = 2).
Both sides are simulated and compared by a two-sample KS statistic.
"""

import numpy as np

import layerwalk as lw

law = lw.TwoPoint(1 / 3, 2 / 3, 0.5)
consts = lw.theoretical_constants(law)
print("constants:", consts)

n, replicas, draws = 2**12, 4000, 4000
xs, ys = lw.rescaled_walk_sample(law, lw.IidRademacher(), n, replicas, seed=1,
                                 normalize_sigma=False)

print(f"\nvertical marginal: Var * gamma = {ys.var():.3f} (limit: 1)")

# the driving noise absorbs sigma: a1 = sigma_b^2 / 2
spec = lw.StableSpec(beta=2.0, a1=consts.sigma_b**2 / 2)
sample = lw.sample_delta_ensemble(t=1.0, spec=spec, dt=1e-4, h=0.02, draws=draws, seed=2)

ks, table = lw.compare_distributions(xs, sample.values)
print(f"\ntwo-sample KS (walk at n = {n} vs limit draws): {ks:.4f}")
print("quantile      walk     limit")
for q, a, b in table:
    print(f"  {q:5.2f}   {a:8.3f}  {b:8.3f}")

# self-similarity of the limit: Delta_2 has the law of 2^delta Delta_1
s2 = lw.sample_delta_ensemble(2.0, spec, 2e-4, 0.02 * np.sqrt(2), draws, seed=3)
from scipy import stats as sps

ks_ss = sps.ks_2samp(s2.values, 2.0**consts.delta * sample.values).statistic
print(f"\nself-similarity KS (Delta_2 vs 2^delta Delta_1): {ks_ss:.4f}")
