"""Command-line front end: ``ecwsa run | experiment | chaos-orbit``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .chaos import VARIANT_MAPS, ChaosState, orbit
from .data import Dataset, bundled_path, load_csv, min_max_normalize
from .engine import aggregate, repeat_runs, run, run_seed
from .model import CHAOS_MAPS, RunConfig, RunReport, validate_config

log = logging.getLogger("ecwsa")

VARIANTS = tuple(f"ecwsa-{i}" for i in range(1, 5)) + ("woa-baseline", "custom")

STD_CONVENTION = "population (divide by runs)"

AGGREGATE_COLUMNS = (
    "dataset",
    "variant",
    "runs",
    "min_acc_pct",
    "avg_acc_pct",
    "std_acc_pct",
    "max_acc_pct",
    "avg_selected_pct",
    "avg_best_fitness",
)


class UsageError(Exception):
    pass


def apply_variant(cfg: RunConfig, variant: str, chaos: str | None, no_local_search: bool) -> RunConfig:
    """Fix the ablation switches implied by ``variant``."""
    if variant != "custom" and (chaos is not None or no_local_search):
        raise UsageError("--chaos and --no-local-search are only valid with --variant custom")
    if variant.startswith("ecwsa-"):
        return replace(cfg, chaos_map=VARIANT_MAPS[int(variant[-1]) - 1], local_search_enabled=True)
    if variant == "woa-baseline":
        return replace(cfg, chaos_map="uniform-random", death=0.0, local_search_enabled=False)
    if variant == "custom":
        return replace(
            cfg,
            chaos_map=chaos if chaos is not None else cfg.chaos_map,
            local_search_enabled=not no_local_search,
        )
    raise UsageError(f"unknown variant {variant!r}")


def config_from_args(args, variant: str) -> RunConfig:
    cfg = RunConfig(
        population=args.pop,
        max_iterations=args.iters,
        death=args.death,
        base=args.base,
        alpha=args.alpha,
        beta=args.beta,
        chaos_initial_p=args.chaos_init,
        knn_k=args.knn_k,
        cv_folds=args.folds,
        seed=args.seed,
        mi_bins=args.mi_bins,
    )
    cfg = apply_variant(cfg, variant, args.chaos, args.no_local_search)
    errors = validate_config(cfg)
    if errors:
        raise UsageError("invalid configuration: " + "; ".join(errors))
    return cfg


def resolve_dataset(spec: str, label_col, header: bool) -> Dataset:
    """Load ``spec``: a CSV path, or ``bundled:NAME`` for a shipped dataset."""
    if spec.startswith("bundled:"):
        name = spec.split(":", 1)[1]
        try:
            path = bundled_path(name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        return min_max_normalize(load_csv(path, name=name.lower()))
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"dataset file not found: {path}")
    return min_max_normalize(load_csv(path, header=header, label_col=label_col))


def report_dict(report: RunReport, dataset: Dataset, variant: str) -> dict:
    best = report.best
    return {
        "version": __version__,
        "variant": variant,
        "config": report.config.to_dict(),
        "dataset": dataset.summary(),
        "trace": [
            {
                "iteration": r.iteration,
                "population_size": r.population_size,
                "best_fitness": r.best_fitness,
                "best_accuracy": r.best_accuracy,
                "best_selected_count": r.best_selected_count,
                "mean_fitness": r.mean_fitness,
            }
            for r in report.records
        ],
        "best": {
            "features": [int(i) for i in best.selected],
            "feature_names": [dataset.feature_names[i] for i in best.selected],
            "fitness": best.fitness.fitness,
            "accuracy": best.fitness.accuracy,
            "selected_count": best.fitness.selected_count,
            "selected_pct": 100.0 * best.fitness.selected_count / dataset.n_features,
        },
        "evaluations": report.evaluations,
        "local_search_replacements": report.local_search_replacements,
        "timing": {
            "finished_utc": datetime.now(timezone.utc).isoformat(),
            "wall_time_s": report.wall_time,
        },
    }


def write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_convergence(path: Path, report: RunReport):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "best_accuracy", "best_fitness", "population_size"])
        for r in report.records:
            w.writerow([r.iteration, repr(r.best_accuracy), repr(r.best_fitness), r.population_size])


def aggregate_rows_from_runs(payload: dict) -> list[dict]:
    """Recompute the aggregate rows of an ``aggregate.json`` from its per-run entries."""
    rows = []
    for block in payload["results"]:
        runs = block["runs"]
        stats = aggregate(
            [r["accuracy"] for r in runs],
            [r["selected_count"] for r in runs],
            block["dataset"]["features"],
            [r["fitness"] for r in runs],
        )
        rows.append({"dataset": block["dataset"]["name"], "variant": block["variant"], **stats.as_row()})
    return rows


def write_aggregate_csv(path: Path, rows: list[dict]):
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"# accuracies in percent; std convention: {STD_CONVENTION}\n")
        w = csv.DictWriter(fh, fieldnames=AGGREGATE_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def _progress(rec):
    log.info(
        "iter %d  pop %d  best fitness %.6f  accuracy %.4f  selected %d",
        rec.iteration,
        rec.population_size,
        rec.best_fitness,
        rec.best_accuracy,
        rec.best_selected_count,
    )


def cmd_run(args) -> int:
    cfg = config_from_args(args, args.variant)
    dataset = resolve_dataset(args.dataset, args.label_col, args.header)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = run(cfg, dataset, progress=_progress)
    write_json(out / "report.json", report_dict(report, dataset, args.variant))
    write_convergence(out / "convergence.csv", report)
    print(
        f"{dataset.name}: accuracy {100 * report.best_accuracy:.2f}%  "
        f"features {report.best.fitness.selected_count}/{dataset.n_features}  -> {out}"
    )
    return 0


def cmd_experiment(args) -> int:
    variants = args.variant
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    results = []
    for spec in args.dataset:
        dataset = resolve_dataset(spec, args.label_col, args.header)
        for variant in variants:
            cfg = config_from_args(args, variant)
            stats, reports = repeat_runs(cfg, dataset, args.runs)
            log.info("%s %s: avg accuracy %.2f%%", dataset.name, variant, 100 * stats.avg_accuracy)
            results.append(
                {
                    "dataset": dataset.summary(),
                    "variant": variant,
                    "config": cfg.to_dict(),
                    "runs": [
                        {
                            "run": i,
                            "seed": run_seed(cfg.seed, i),
                            "accuracy": r.best_accuracy,
                            "fitness": r.best_fitness,
                            "selected_count": r.best.fitness.selected_count,
                            "features": [int(j) for j in r.best.selected],
                            "evaluations": r.evaluations,
                            "fitness_trace": r.fitness_trace(),
                            "accuracy_trace": [rec.best_accuracy for rec in r.records],
                        }
                        for i, r in enumerate(reports)
                    ],
                }
            )
    payload = {"version": __version__, "std_convention": STD_CONVENTION, "results": results}
    rows = aggregate_rows_from_runs(payload)
    payload["aggregate"] = rows
    payload["timing"] = {
        "finished_utc": datetime.now(timezone.utc).isoformat(),
        "wall_time_s": time.perf_counter() - started,
    }
    write_json(out / "aggregate.json", payload)
    write_aggregate_csv(out / "aggregate.csv", rows)
    for row in rows:
        sys.stdout.write(
            f"{row['dataset']:<14} {row['variant']:<13} "
            f"min {row['min_acc_pct']:6.2f}  avg {row['avg_acc_pct']:6.2f}  "
            f"std {row['std_acc_pct']:5.2f}  max {row['max_acc_pct']:6.2f}  "
            f"features {row['avg_selected_pct']:6.2f}%\n"
        )
    return 0


def cmd_chaos_orbit(args) -> int:
    if args.map not in CHAOS_MAPS:
        raise UsageError(f"unknown chaos map {args.map!r}; expected one of {', '.join(CHAOS_MAPS)}")
    if not 0.0 <= args.initial_p <= 1.0:
        raise UsageError("--initial-p must be in [0, 1]")
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    rng = np.random.default_rng(args.seed)
    values = orbit(ChaosState(args.map, args.initial_p), args.steps, rng)
    out = sys.stdout
    out.write("step,p\n")
    for i, p in enumerate(values, start=1):
        out.write(f"{i},{p!r}\n")
    return 0


def _label_col(value: str):
    return int(value) if value.lstrip("-").isdigit() else value


def _add_run_options(p: argparse.ArgumentParser, many: bool = False):
    d = RunConfig()
    nargs = "+" if many else None
    p.add_argument(
        "--dataset", required=True, nargs=nargs, help="CSV path, or bundled:NAME (breastcancer, zoo, wine, ...)"
    )
    p.add_argument("--label-col", type=_label_col, default=-1, help="label column name or index (default: last)")
    p.add_argument("--header", action="store_true", help="first CSV row is a header")
    p.add_argument("--variant", choices=VARIANTS, nargs=nargs, default=["ecwsa-2"] if many else "ecwsa-2")
    p.add_argument("--pop", type=int, default=d.population)
    p.add_argument("--iters", type=int, default=d.max_iterations)
    p.add_argument("--death", type=float, default=d.death)
    p.add_argument("--base", type=int, default=d.base)
    p.add_argument("--alpha", type=float, default=d.alpha)
    p.add_argument("--beta", type=float, default=d.beta)
    p.add_argument("--knn-k", type=int, default=d.knn_k)
    p.add_argument("--folds", type=int, default=d.cv_folds)
    p.add_argument("--mi-bins", type=int, default=d.mi_bins)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--out", default="ecwsa-out")
    p.add_argument("--no-local-search", action="store_true")
    p.add_argument("--chaos", choices=CHAOS_MAPS, default=None)
    p.add_argument("--chaos-init", type=float, default=d.chaos_initial_p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecwsa", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single run; writes report.json and convergence.csv")
    _add_run_options(p_run)
    p_run.set_defaults(func=cmd_run)

    p_exp = sub.add_parser("experiment", help="repeated runs; writes aggregate.csv and aggregate.json")
    _add_run_options(p_exp, many=True)
    p_exp.add_argument("--runs", type=int, default=20)
    p_exp.set_defaults(func=cmd_experiment)

    p_orb = sub.add_parser("chaos-orbit", help="print step,p rows of a chaotic map orbit")
    p_orb.add_argument("--map", default="tent")
    p_orb.add_argument("--initial-p", type=float, default=0.3)
    p_orb.add_argument("--steps", type=int, default=100)
    p_orb.add_argument("--seed", type=int, default=0, help="seed for the uniform-random source")
    p_orb.set_defaults(func=cmd_chaos_orbit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if getattr(args, "runs", 1) < 1:
            raise UsageError("--runs must be >= 1")
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"ecwsa: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
