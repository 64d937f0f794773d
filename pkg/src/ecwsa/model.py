"""Shared domain types: whales, fitness records, run configuration and reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

POSITION_BOUND = 4.0

CHAOS_MAPS = ("circular", "logistic", "piecewise", "tent", "uniform-random")


def binarize(position: np.ndarray) -> np.ndarray:
    """Select feature j iff sigmoid(position[j]) >= 0.5, i.e. position[j] >= 0."""
    return np.asarray(position) >= 0.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FitnessRecord:
    fitness: float
    accuracy: float
    selected_count: int
    n_features: int

    def recompute(self, alpha: float, beta: float) -> float:
        return alpha * self.accuracy + beta * (self.n_features - self.selected_count) / self.n_features


@dataclass(frozen=True, eq=False)
class Whale:
    """One candidate subset: a continuous position and the bitmask derived from it."""

    position: np.ndarray
    bitmask: np.ndarray
    fitness: FitnessRecord | None = None

    @property
    def n_features(self) -> int:
        return self.position.shape[0]

    @property
    def selected(self) -> np.ndarray:
        return np.flatnonzero(self.bitmask)

    def feature_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in self.selected)

    def with_fitness(self, record: FitnessRecord) -> "Whale":
        return Whale(self.position, self.bitmask, record)


def new_whale(position, rng: np.random.Generator | None = None) -> Whale:
    """Build a whale from a position vector.

    An all-false bitmask is repaired by forcing one uniformly chosen feature on
    (its position entry becomes +1), so every whale is a legal subset.
    """
    pos = np.array(position, dtype=float).reshape(-1)
    if pos.size == 0:
        raise ValueError("whale position must be non-empty")
    mask = binarize(pos)
    if not mask.any():
        rng = rng if rng is not None else np.random.default_rng()
        j = int(rng.integers(pos.size))
        pos[j] = 1.0
        mask = binarize(pos)
    return Whale(_frozen(pos), _frozen(mask))


def whale_from_features(features, n_features: int) -> Whale:
    """Whale whose position is +1 on the given features and -1 elsewhere."""
    pos = -np.ones(n_features)
    pos[sorted(features)] = 1.0
    return new_whale(pos)


@dataclass(frozen=True)
class RunConfig:
    population: int = 80
    max_iterations: int = 25
    death: float = 0.1
    base: int = 15
    alpha: float = 0.99
    beta: float = 0.01
    spiral_b: float = 1.0
    chaos_map: str = "logistic"
    chaos_initial_p: float = 0.3
    knn_k: int = 5
    cv_folds: int = 5
    seed: int = 0
    local_search_enabled: bool = True
    mi_bins: int = 10

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def validate_config(cfg: RunConfig) -> list[str]:
    """Return every violated constraint of ``cfg`` (empty list means valid)."""
    errors = []
    if cfg.population < 3:
        errors.append("population must allow local search (>=3)")
    if cfg.max_iterations < 1:
        errors.append("max_iterations must be >= 1")
    if not 0.0 <= cfg.death < 1.0:
        errors.append("death must be in [0, 1)")
    if cfg.base < 3:
        errors.append("base must be >= 3")
    if cfg.base > cfg.population:
        errors.append("base must not exceed population")
    if not 0.0 <= cfg.alpha <= 1.0:
        errors.append("alpha must be in [0, 1]")
    if not 0.0 <= cfg.beta <= 1.0:
        errors.append("beta must be in [0, 1]")
    if not math.isclose(cfg.alpha + cfg.beta, 1.0, rel_tol=0.0, abs_tol=1e-12):
        errors.append("alpha+beta must equal 1")
    if not cfg.spiral_b > 0:
        errors.append("spiral_b must be > 0")
    if cfg.chaos_map not in CHAOS_MAPS:
        errors.append(f"chaos_map must be one of {', '.join(CHAOS_MAPS)}")
    if not 0.0 <= cfg.chaos_initial_p <= 1.0:
        errors.append("chaos_initial_p must be in [0, 1]")
    if cfg.knn_k < 1:
        errors.append("knn_k must be >= 1")
    if cfg.cv_folds < 2:
        errors.append("cv_folds must be >= 2")
    if not -(2**63) <= cfg.seed < 2**64:
        errors.append("seed must fit in 64 bits")
    if cfg.mi_bins < 2:
        errors.append("mi_bins must be >= 2")
    return errors


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    population_size: int
    best_fitness: float
    best_accuracy: float
    best_selected_count: int
    mean_fitness: float


@dataclass
class RunReport:
    config: RunConfig
    records: list[IterationRecord]
    best: Whale
    evaluations: int
    wall_time: float = 0.0
    local_search_replacements: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def best_accuracy(self) -> float:
        return self.best.fitness.accuracy

    @property
    def best_fitness(self) -> float:
        return self.best.fitness.fitness

    @property
    def selected_fraction(self) -> float:
        return self.best.fitness.selected_count / self.best.n_features

    def population_trace(self) -> list[int]:
        return [r.population_size for r in self.records]

    def fitness_trace(self) -> list[float]:
        return [r.best_fitness for r in self.records]
