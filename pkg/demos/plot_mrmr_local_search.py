"""
mRMR local search
=================

The filter score rewards features that share information with the label and
penalises features that share it with each other. This script builds a toy
dataset with one informative feature, a near copy of it and some noise, then
scores a few subsets and runs one local-search pass.
"""

# %%
import numpy as np

from ecwsa.data import Dataset, min_max_normalize
from ecwsa.model import whale_from_features
from ecwsa.mrmr import DiscretizedDataset, local_search, mrmr_fitness

rng = np.random.default_rng(1)
y = rng.integers(0, 3, 150)
signal = y + 0.3 * rng.random(150)
X = np.column_stack([signal, signal + 0.05 * rng.random(150), rng.random((150, 4))])
ds = min_max_normalize(
    Dataset("toy", X, y, ("a", "b", "c"), tuple(f"f{i}" for i in range(6)), X.min(0), X.max(0))
)
data = DiscretizedDataset.from_dataset(ds, mi_bins=10)

# %%
# Relevance of each feature to the label, in nats.
for i in range(6):
    print(f"f{i}: relevance {data.relevance(i):.3f}")

# %%
# The redundancy average includes every feature paired with itself, so a lone
# feature pays its own entropy. Adding features that are nearly independent of
# it dilutes that term, which is why larger subsets can score higher here.
for subset in ({0}, {0, 1}, {0, 2}, {0, 1, 2, 3}):
    print(sorted(subset), f"{mrmr_fitness(subset, data):+.4f}")

# %%
# One local-search pass: each whale tries two neighbours built from the
# difference of two random peers and keeps the better one if it scores higher.
population = [whale_from_features(s, 6) for s in ({0, 1, 2, 3}, {1, 2}, {2, 3, 4}, {3})]
stats = {}
after = local_search(population, data, rng, stats)
for before, now in zip(population, after):
    print(sorted(before.feature_set()), "->", sorted(now.feature_set()))
print(stats)
