"""The ECWSA search loop, repeated runs and their aggregate statistics."""

from __future__ import annotations

import logging
import os
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .chaos import ChaosState, next_p
from .data import Dataset
from .dynamics import decay_a, dispatch_move, draw_params, initial_positions
from .model import IterationRecord, RunConfig, RunReport, Whale, new_whale, validate_config
from .mrmr import DiscretizedDataset, local_search
from .wrapper import EvalContext, wrapper_fitness

log = logging.getLogger(__name__)

# Substream purpose tags.
_INIT, _CHAOS, _MOVE, _LOCAL = 1, 2, 3, 4

ProgressFn = Callable[[IterationRecord], None]


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys); the same inputs always give the same stream."""
    return np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64, spawn_key=tuple(keys)))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ECWSA_THREADS", "1")))
    except ValueError:
        return 1


def shrink_population(current_size: int, death: float, base: int) -> int:
    """Population size for the next iteration: ``max(base, floor(size * (1 - death)))``."""
    # Products such as 10 * (1 - 0.3) can land a few ulps below an integer.
    return max(base, int(np.floor(current_size * (1.0 - death) + 1e-9)))


def population_schedule(m: int, max_iter: int, death: float, base: int) -> list[int]:
    sizes = [m]
    while len(sizes) < max_iter:
        sizes.append(shrink_population(sizes[-1], death, base))
    return sizes


def apply_death(population: list[Whale], new_size: int) -> list[Whale]:
    """Keep the ``new_size`` leading (fittest) whales of an already sorted population."""
    if new_size > len(population):
        raise ValueError(f"new_size {new_size} exceeds population {len(population)}")
    if new_size < 0:
        raise ValueError("new_size must be non-negative")
    return population[:new_size]


def sort_by_fitness(population: list[Whale]) -> list[Whale]:
    # sorted() is stable: equal fitness keeps the earlier whale first.
    return sorted(population, key=lambda w: -w.fitness.fitness)


def _evaluate(population, accuracy_fn, cfg, n, pool):
    def score(w: Whale) -> Whale:
        acc = accuracy_fn(w.bitmask)
        return w.with_fitness(wrapper_fitness(acc, int(w.bitmask.sum()), n, cfg.alpha, cfg.beta))

    todo = [w for w in population if w.fitness is None]
    if pool is not None and len(todo) > 1:
        done = iter(pool.map(score, todo))
    else:
        done = iter(map(score, todo))
    return [next(done) if w.fitness is None else w for w in population]


def check_dataset(cfg: RunConfig, dataset: Dataset):
    if dataset.n_classes < 2:
        raise ValueError("dataset needs at least 2 classes")
    if dataset.n_instances < 2 * cfg.cv_folds:
        raise ValueError(f"dataset has {dataset.n_instances} instances; need >= {2 * cfg.cv_folds}")


def run(
    cfg: RunConfig,
    dataset: Dataset,
    accuracy_fn: Callable[[np.ndarray], float] | None = None,
    workers: int | None = None,
    progress: ProgressFn | None = None,
) -> RunReport:
    """Run ECWSA once on ``dataset`` (normalized features expected).

    ``accuracy_fn`` maps a bitmask to an accuracy in [0, 1]; the default is a
    KNN cross-validation evaluator whose folds derive from ``cfg.seed``.
    Results do not depend on ``workers``.
    """
    errors = validate_config(cfg)
    if errors:
        raise ValueError("invalid config: " + "; ".join(errors))
    check_dataset(cfg, dataset)
    started = time.perf_counter()
    n = dataset.n_features

    if accuracy_fn is None:
        accuracy_fn = EvalContext(dataset, cfg.knn_k, cfg.cv_folds, cfg.seed)
    evaluations = 0

    discrete = DiscretizedDataset.from_dataset(dataset, cfg.mi_bins) if cfg.local_search_enabled else None

    init_rng = substream(cfg.seed, _INIT)
    population = [new_whale(pos, init_rng) for pos in initial_positions(cfg.population, n, init_rng)]
    chaos = ChaosState(cfg.chaos_map, cfg.chaos_initial_p)
    chaos_rng = substream(cfg.seed, _CHAOS)

    prey: Whale | None = None
    records: list[IterationRecord] = []
    ls_stats: dict = {}
    workers = workers or worker_count()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for t in range(cfg.max_iterations):
            population = _evaluate(population, accuracy_fn, cfg, n, pool)
            evaluations += len(population)
            population = sort_by_fitness(population)
            if prey is None or population[0].fitness.fitness > prey.fitness.fitness:
                prey = population[0]
            rec = IterationRecord(
                iteration=t,
                population_size=len(population),
                best_fitness=prey.fitness.fitness,
                best_accuracy=prey.fitness.accuracy,
                best_selected_count=prey.fitness.selected_count,
                mean_fitness=float(np.mean([w.fitness.fitness for w in population])),
            )
            records.append(rec)
            if progress is not None:
                progress(rec)
            if t == cfg.max_iterations - 1:
                break

            # p advances once per whale, sequentially, before any move.
            ps = []
            for _ in population:
                chaos, p = next_p(chaos, chaos_rng)
                ps.append(p)
            a = decay_a(t, cfg.max_iterations)
            snapshot = population

            def move(i: int) -> Whale:
                rng = substream(cfg.seed, _MOVE, t, i)
                params = draw_params(a, n, cfg.spiral_b, ps[i], rng)
                return dispatch_move(snapshot[i], prey, snapshot, params, rng)

            idx = range(len(snapshot))
            population = list(pool.map(move, idx)) if pool is not None else [move(i) for i in idx]

            if discrete is not None:
                population = local_search(population, discrete, substream(cfg.seed, _LOCAL, t), ls_stats)
            population = apply_death(population, shrink_population(len(population), cfg.death, cfg.base))
    finally:
        if pool is not None:
            pool.shutdown()

    return RunReport(
        config=cfg,
        records=records,
        best=prey,
        evaluations=evaluations,
        wall_time=time.perf_counter() - started,
        local_search_replacements=ls_stats.get("replacements", 0),
    )


def run_seed(seed: int, run_index: int) -> int:
    """Seed of the ``run_index``-th replicate of an experiment seeded with ``seed``."""
    return int(np.random.SeedSequence(int(seed) % 2**64, spawn_key=(run_index,)).generate_state(1, np.uint64)[0] >> 1)


@dataclass(frozen=True)
class AggregateStats:
    runs: int
    min_accuracy: float
    avg_accuracy: float
    std_accuracy: float
    max_accuracy: float
    avg_selected_pct: float
    avg_best_fitness: float

    def as_row(self) -> dict:
        return {
            "runs": self.runs,
            "min_acc_pct": 100 * self.min_accuracy,
            "avg_acc_pct": 100 * self.avg_accuracy,
            "std_acc_pct": 100 * self.std_accuracy,
            "max_acc_pct": 100 * self.max_accuracy,
            "avg_selected_pct": self.avg_selected_pct,
            "avg_best_fitness": self.avg_best_fitness,
        }


def aggregate(accuracies, selected_counts, n_features: int, best_fitness) -> AggregateStats:
    """Table-style statistics; the standard deviation divides by the number of runs."""
    acc = np.asarray(accuracies, dtype=float)
    sel = np.asarray(selected_counts, dtype=float)
    return AggregateStats(
        runs=int(acc.size),
        min_accuracy=float(acc.min()),
        avg_accuracy=float(acc.mean()),
        std_accuracy=float(acc.std(ddof=0)),
        max_accuracy=float(acc.max()),
        avg_selected_pct=float(np.mean(100.0 * sel / n_features)),
        avg_best_fitness=float(np.mean(best_fitness)),
    )


def repeat_runs(
    cfg: RunConfig,
    dataset: Dataset,
    runs: int,
    workers: int | None = None,
) -> tuple[AggregateStats, list[RunReport]]:
    if runs < 1:
        raise ValueError("runs must be >= 1")
    reports = [run(replace(cfg, seed=run_seed(cfg.seed, r)), dataset, workers=workers) for r in range(runs)]
    stats = aggregate(
        [r.best_accuracy for r in reports],
        [r.best.fitness.selected_count for r in reports],
        dataset.n_features,
        [r.best_fitness for r in reports],
    )
    return stats, reports
