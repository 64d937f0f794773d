"""
Chaotic maps as a branch selector
=================================

Each whale draws the value ``p`` that decides between the spiral move and the
encircling moves from a chaotic map instead of a uniform generator. This script
prints the first few values of every map from the default start of 0.3 and
how often each one lands in the spiral half of [0, 1].
"""

# %%
import numpy as np

from ecwsa.chaos import VARIANT_MAPS, ChaosState, orbit

steps = 200
rng = np.random.default_rng(0)

# %%
# The first values of each orbit. The logistic map is fully chaotic at a=4,
# the tent map is piecewise linear and never settles on the starting value.
for name in VARIANT_MAPS + ("uniform-random",):
    values = orbit(ChaosState(name, 0.3), steps, rng)
    head = "  ".join(f"{v:.4f}" for v in values[:6])
    spiral = np.mean(np.asarray(values) >= 0.5)
    print(f"{name:<15} {head}  ... spiral share {spiral:.2f}")

# %%
# A histogram makes the difference between maps visible: the logistic map
# piles up near 0 and 1, the circular map has no preferred region.
for name in VARIANT_MAPS:
    counts, _ = np.histogram(orbit(ChaosState(name), 2000), bins=10, range=(0, 1))
    print(f"{name:<10}", " ".join(f"{c:4d}" for c in counts))
