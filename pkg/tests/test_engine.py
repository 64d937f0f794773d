from dataclasses import replace

import numpy as np
import pytest
from conftest import make_dataset

from ecwsa.engine import (
    aggregate,
    apply_death,
    population_schedule,
    repeat_runs,
    run,
    shrink_population,
    sort_by_fitness,
)
from ecwsa.model import RunConfig, new_whale
from ecwsa.wrapper import wrapper_fitness

DEFAULT_SCHEDULE = [80, 72, 64, 57, 51, 45, 40, 36, 32, 28, 25, 22, 19, 17] + [15] * 11

SMALL = RunConfig(population=12, max_iterations=6, base=4, seed=5)


def test_shrink_examples():
    assert shrink_population(80, 0.1, 15) == 72
    assert shrink_population(16, 0.1, 15) == 15
    for death in (0.0, 0.3, 0.9):
        assert shrink_population(15, death, 15) == 15


def test_schedule():
    assert population_schedule(80, 25, 0.1, 15) == DEFAULT_SCHEDULE


def _whales(fits):
    out = []
    for i, f in enumerate(fits):
        w = new_whale([1.0, float(i)])
        out.append(w.with_fitness(wrapper_fitness(f, 1, 2, 1.0, 0.0)))
    return out


def test_apply_death_top_k():
    pop = _whales([0.9, 0.8, 0.7])
    assert [w.fitness.accuracy for w in apply_death(pop, 2)] == [0.9, 0.8]
    assert apply_death(pop, 3) == pop


def test_apply_death_too_large():
    with pytest.raises(ValueError):
        apply_death(_whales([0.5]), 2)


def test_stable_sort_tie_at_cut():
    pop = _whales([0.7, 0.8, 0.8])
    survivors = apply_death(sort_by_fitness(pop), 2)
    assert survivors[0] is pop[1]
    assert survivors[1] is pop[2]


def test_run_trace(synthetic):
    report = run(SMALL, synthetic)
    fits = report.fitness_trace()
    assert all(b >= a for a, b in zip(fits, fits[1:]))
    assert report.population_trace() == population_schedule(12, 6, 0.1, 4)
    assert report.evaluations == sum(report.population_trace())
    assert report.best.fitness.fitness == fits[-1]
    # feature 0 alone separates the classes
    assert report.best_accuracy == 1.0


def test_default_schedule_in_run(synthetic):
    cfg = RunConfig(max_iterations=25, seed=1)
    report = run(cfg, synthetic, accuracy_fn=lambda mask: float(mask[0]) * 0.5 + 0.5)
    assert report.population_trace() == DEFAULT_SCHEDULE
    assert report.evaluations == sum(DEFAULT_SCHEDULE) <= 80 * 25


def test_no_death_hits_bound(synthetic):
    cfg = replace(SMALL, death=0.0)
    report = run(cfg, synthetic, accuracy_fn=lambda mask: 0.5)
    assert report.evaluations == cfg.population * cfg.max_iterations


def test_ablations_run(synthetic):
    for cfg in (
        replace(SMALL, chaos_map="uniform-random", death=0.0, local_search_enabled=False),
        replace(SMALL, chaos_map="circular"),
        replace(SMALL, chaos_map="piecewise", local_search_enabled=False),
    ):
        report = run(cfg, synthetic)
        assert len(report.records) == cfg.max_iterations


def test_determinism_across_workers(synthetic):
    a = run(SMALL, synthetic, workers=1)
    b = run(SMALL, synthetic, workers=6)
    assert a.records == b.records
    assert np.array_equal(a.best.position, b.best.position)


def test_different_seeds_differ(synthetic):
    a = run(SMALL, synthetic)
    b = run(replace(SMALL, seed=6), synthetic)
    assert a.records != b.records


def test_invalid_config(synthetic):
    with pytest.raises(ValueError, match="alpha"):
        run(replace(SMALL, alpha=0.5), synthetic)


def test_too_few_instances():
    y = np.array([0, 1] * 4)
    ds = make_dataset(np.arange(8.0)[:, None], y)
    with pytest.raises(ValueError, match="instances"):
        run(SMALL, ds)


def test_progress_events(synthetic):
    seen = []
    run(SMALL, synthetic, progress=seen.append)
    assert [r.iteration for r in seen] == list(range(SMALL.max_iterations))


def test_repeat_single_run(synthetic):
    stats, reports = repeat_runs(SMALL, synthetic, 1)
    assert stats.min_accuracy == stats.avg_accuracy == stats.max_accuracy
    assert stats.std_accuracy == 0.0


def test_repeat_deterministic(synthetic):
    a, _ = repeat_runs(SMALL, synthetic, 3)
    b, _ = repeat_runs(SMALL, synthetic, 3)
    assert a == b


def test_aggregate_population_std():
    stats = aggregate([0.9, 1.0], [2, 4], 8, [0.5, 0.6])
    assert stats.std_accuracy == pytest.approx(0.05)
    assert stats.avg_selected_pct == pytest.approx(37.5)
    with pytest.raises(ValueError):
        repeat_runs(SMALL, None, 0)
