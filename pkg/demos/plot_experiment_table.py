"""
Comparing the four chaotic variants
===================================

Repeats the optimizer with each chaotic map and with the plain baseline
(uniform draws, no population death, no local search) on the Zoo data and
prints a min/avg/std/max accuracy table. Set ``RUNS = 20`` for the full
protocol; the default keeps the script under a minute.
"""

# %%
from ecwsa import RunConfig, load_bundled, repeat_runs
from ecwsa.cli import apply_variant

RUNS = 5
zoo = load_bundled("zoo")

# %%
rows = []
for variant in ("ecwsa-1", "ecwsa-2", "ecwsa-3", "ecwsa-4", "woa-baseline"):
    cfg = apply_variant(RunConfig(), variant, None, False)
    stats, reports = repeat_runs(cfg, zoo, RUNS)
    evals = sum(r.evaluations for r in reports) / RUNS
    rows.append((variant, stats.as_row(), evals))

# %%
print(f"{'variant':<13} {'min':>6} {'avg':>6} {'std':>5} {'max':>6} {'feat%':>6} {'evals':>6}")
for variant, row, evals in rows:
    print(
        f"{variant:<13} {row['min_acc_pct']:6.2f} {row['avg_acc_pct']:6.2f} {row['std_acc_pct']:5.2f} "
        f"{row['max_acc_pct']:6.2f} {row['avg_selected_pct']:6.2f} {evals:6.0f}"
    )
