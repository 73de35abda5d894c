"""Tour of the model: environments, the two simulators, and the exact oracle.

The walk lives on Z^2.  Each horizontal line y carries a fixed direction
epsilon_y and a stay probability p_y: from line y the walk moves one step
in direction epsilon_y with probability p_y, otherwise it changes line
(up or down with equal probability).
"""

import numpy as np

import layerwalk as lw

# An environment is lazy and reproducible: querying a line twice (or from
# a rebuilt environment with the same seed) gives the same record.
env = lw.make_environment(lw.Alternating(), lw.TwoPoint(1 / 3, 2 / 3, 0.5), master_seed=7)
for y in range(-3, 4):
    rec = env.level(y)
    print(f"line {y:+d}: direction {rec.epsilon:+d}, stay probability {rec.p:.3f}")

# Direct simulation of the Markov chain.
rng = np.random.default_rng(0)
path = lw.simulate_direct(env, 20, rng)
print("\ndirect path:", [(s.x, s.y) for s in path])

# The embedded chain observes the walk at line changes only: the line
# sequence S is a simple random walk and sojourn lengths are geometric.
epath = lw.simulate_embedded(env, 10, rng)
print("\nembedded chain:")
print("  lines   S =", epath.S)
print("  sojourn xi =", epath.xi)
print("  horiz.  X =", epath.X)
print("  times   T =", epath.T)

# The embedded representation reconstructs the walk at any time.
for n in (0, 5, int(epath.T[-1])):
    print(f"  position at time {n}: {lw.position_at_time(epath, env, n)}")

# For small horizons the law of M_n is computed exactly by dynamic
# programming; at n = 2 the return probability is 1/8 for p = 1/2.
half = lw.make_environment(lw.Alternating(), lw.Constant(0.5), 0)
dist = lw.exact_distribution(half, 2)
print("\nexact two-step masses: P(0,0) =", dist.mass[(0, 0)], " P(2,0) =", dist.mass[(2, 0)])

# Scaling constants attached to a stay-probability law.
print("\nconstants:", lw.theoretical_constants(lw.TwoPoint(1 / 3, 2 / 3, 0.5)))
