"""
A single feature-selection run
==============================

Runs the optimizer once on the bundled Wine data with the standard settings
(80 whales, 25 iterations, 5-nearest-neighbour wrapper) and prints the
convergence trace along with the shrinking population.
"""

# %%
from ecwsa import RunConfig, load_bundled, run

wine = load_bundled("wine")
print(wine.summary())

# %%
cfg = RunConfig(chaos_map="tent", seed=3)
report = run(cfg, wine)

# %%
# The best fitness never drops, because the best whale so far is always kept
# as the prey. The population shrinks until it reaches the base size of 15.
for rec in report.records:
    print(
        f"iter {rec.iteration:2d}  pop {rec.population_size:2d}  "
        f"fitness {rec.best_fitness:.5f}  accuracy {rec.best_accuracy:.4f}  "
        f"features {rec.best_selected_count}"
    )

# %%
best = report.best
print("selected:", [wine.feature_names[i] for i in best.selected])
print(f"accuracy {best.fitness.accuracy:.4f} with {best.fitness.selected_count}/{wine.n_features} features")
print(f"{report.evaluations} wrapper evaluations, {report.local_search_replacements} local-search replacements")
