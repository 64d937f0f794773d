"""Embedded chaotic whale survival algorithm (ECWSA) for filter-wrapper feature selection."""

__version__ = "0.1.0"

from .chaos import ChaosState, next_p, orbit
from .data import Dataset, bundled_path, load_bundled, load_csv, min_max_normalize, stratified_folds
from .engine import AggregateStats, apply_death, population_schedule, repeat_runs, run, shrink_population
from .model import FitnessRecord, RunConfig, RunReport, Whale, new_whale, validate_config
from .mrmr import DiscretizedDataset, local_search, mrmr_fitness, mutual_information
from .wrapper import EvalContext, cv_accuracy, knn_predict, wrapper_fitness

__all__ = [
    "AggregateStats",
    "ChaosState",
    "Dataset",
    "DiscretizedDataset",
    "EvalContext",
    "FitnessRecord",
    "RunConfig",
    "RunReport",
    "Whale",
    "apply_death",
    "bundled_path",
    "cv_accuracy",
    "knn_predict",
    "load_bundled",
    "load_csv",
    "local_search",
    "min_max_normalize",
    "mrmr_fitness",
    "mutual_information",
    "new_whale",
    "next_p",
    "orbit",
    "population_schedule",
    "repeat_runs",
    "run",
    "shrink_population",
    "stratified_folds",
    "validate_config",
    "wrapper_fitness",
]
