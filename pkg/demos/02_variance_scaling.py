"""Variance scaling: linear for constant p, ~ n^{3/2} for random p.

With alternating orientations, Var(X_{2n}) grows linearly in n when all
lines share one stay probability, but like n^{3/2} as soon as the p's
are random: the environment drift dominates.  This demo reproduces both
regimes at a reduced replica count (a few minutes of runtime).
"""

import layerwalk as lw

HORIZONS = [2**k for k in range(8, 13)]
REPLICAS = 5000

print("constant p = 0.5 (expected slope 1.0, expected Var/n = 4):")
pts = lw.estimate_variance(lw.Constant(0.5), lw.Alternating(), HORIZONS, REPLICAS, seed=1)
for n, var, se in pts:
    print(f"  n = {n:6d}   Var = {var:12.1f}   Var/n = {var / n:6.3f}   se = {se:.1f}")
fit = lw.fit_exponent(pts)
print(f"  log-log slope: {fit.slope:.3f} +- {fit.slope_se:.3f}")

print("\ntwo-point random p (expected slope 1.5):")
pts = lw.estimate_variance(
    lw.TwoPoint(1 / 3, 2 / 3, 0.5), lw.Alternating(), HORIZONS, REPLICAS, seed=2
)
for n, var, se in pts:
    print(f"  n = {n:6d}   Var = {var:12.1f}   se = {se:.1f}")
fit = lw.fit_exponent(pts)
print(f"  log-log slope: {fit.slope:.3f} +- {fit.slope_se:.3f}")

print("\nheavy-tailed p (beta = 1.5): variance is infinite, use quantile spread")
print("(expected spread slope delta = 1/2 + 1/(2 beta) = 5/6 = 0.833):")
pts = lw.quantile_spread(
    lw.StableTail(1.5, 1.0), lw.IidRademacher(), HORIZONS, max(REPLICAS, 2000), seed=3
)
for n, spread, se in pts:
    print(f"  n = {n:6d}   spread = {spread:10.1f}   se = {se:.1f}")
fit = lw.fit_exponent(pts)
print(f"  log-log slope: {fit.slope:.3f} +- {fit.slope_se:.3f}")
