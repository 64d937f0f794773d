"""Mutual-information filter: discretization, mRMR score and the local search."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable

import numpy as np

from .data import Dataset
from .model import Whale, whale_from_features

log = logging.getLogger(__name__)

WORST_SCORE = -math.inf


def discretize(column, bins: int) -> np.ndarray:
    """Equal-width binning of ``column`` into ``bins`` bins over its own range."""
    x = np.asarray(column, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("cannot discretize an empty column")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros(x.size, dtype=np.int64)
    idx = np.floor((x - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def entropy(u) -> float:
    """Empirical (plug-in) entropy in nats."""
    _, counts = np.unique(np.asarray(u), return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log(p)).sum())


def mutual_information(u, v) -> float:
    """Plug-in mutual information of two discrete vectors, in nats."""
    u = np.asarray(u).reshape(-1)
    v = np.asarray(v).reshape(-1)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.size} vs {v.size}")
    if u.size == 0:
        raise ValueError("empty vectors")
    _, ui = np.unique(u, return_inverse=True)
    _, vi = np.unique(v, return_inverse=True)
    nu, nv = ui.max() + 1, vi.max() + 1
    joint = np.bincount(ui * nv + vi, minlength=nu * nv).reshape(nu, nv) / u.size
    pu = joint.sum(axis=1, keepdims=True)
    pv = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    mi = float((joint[nz] * np.log(joint[nz] / (pu @ pv)[nz])).sum())
    return max(mi, 0.0)


class DiscretizedDataset:
    """Binned view of a dataset with a lazily filled MI cache.

    Cache writes are last-writer-wins; concurrent writers compute identical
    values so races are harmless.
    """

    def __init__(self, bins: np.ndarray, labels: np.ndarray, mi_bins: int):
        self.bins = np.asarray(bins, dtype=np.int64)
        self.labels = np.asarray(labels)
        self.mi_bins = mi_bins
        self._relevance: dict[int, float] = {}
        self._pair: dict[tuple[int, int], float] = {}

    @classmethod
    def from_dataset(cls, dataset: Dataset, mi_bins: int = 10) -> "DiscretizedDataset":
        cols = [discretize(dataset.X[:, j], mi_bins) for j in range(dataset.n_features)]
        return cls(np.column_stack(cols), dataset.y, mi_bins)

    @property
    def n_features(self) -> int:
        return self.bins.shape[1]

    def relevance(self, i: int) -> float:
        val = self._relevance.get(i)
        if val is None:
            val = mutual_information(self.bins[:, i], self.labels)
            self._relevance[i] = val
        return val

    def redundancy(self, i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        val = self._pair.get(key)
        if val is None:
            val = mutual_information(self.bins[:, key[0]], self.bins[:, key[1]])
            self._pair[key] = val
        return val


def mrmr_fitness(features: Iterable[int], data: DiscretizedDataset) -> float:
    """Mean relevance to the class minus mean pairwise redundancy.

    The redundancy average runs over all ordered pairs, self-pairs included.
    An empty set scores ``-inf``.
    """
    s = sorted(set(int(f) for f in features))
    if not s:
        return WORST_SCORE
    k = len(s)
    relevance = sum(data.relevance(i) for i in s) / k
    redundancy = 0.0
    for a, i in enumerate(s):
        redundancy += data.redundancy(i, i)
        for j in s[a + 1 :]:
            redundancy += 2.0 * data.redundancy(i, j)
    return relevance - redundancy / (k * k)


def make_neighbors(x_i, x_j, x_k) -> tuple[frozenset, frozenset]:
    """The union and difference neighbors of ``x_i`` built from ``x_j \\ x_k``."""
    dif = frozenset(x_j) - frozenset(x_k)
    base = frozenset(x_i)
    return base | dif, base - dif


def local_search(
    population: list[Whale],
    data: DiscretizedDataset,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> list[Whale]:
    """One mRMR-guided pass over the population.

    For every whale two other distinct whales are drawn; the better of the
    two neighbors replaces the whale when its mRMR score is strictly higher.
    Neighbors are built from the population as it was at the start of the pass.
    """
    m = len(population)
    if m < 3:
        log.info("local search skipped: population of %d < 3", m)
        return list(population)
    snapshot = [w.feature_set() for w in population]
    out = list(population)
    replaced = 0
    for i in range(m):
        others = [j for j in range(m) if j != i]
        r1, r2 = rng.choice(others, size=2, replace=False)
        n1, n2 = make_neighbors(snapshot[i], snapshot[r1], snapshot[r2])
        current = mrmr_fitness(snapshot[i], data)
        f1, f2 = mrmr_fitness(n1, data), mrmr_fitness(n2, data)
        best, score = (n1, f1) if f1 >= f2 else (n2, f2)
        if best and score > current:
            out[i] = whale_from_features(best, population[i].n_features)
            replaced += 1
    if stats is not None:
        stats["replacements"] = stats.get("replacements", 0) + replaced
    return out
