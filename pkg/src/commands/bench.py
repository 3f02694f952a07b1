"""bench: timing experiments written as long-format CSV plus a JSON summary."""

import logging
import os
from typing import Optional

import config
from src.bench import (
    bench_fit,
    delta_experiment,
    delta_fit_experiment,
    summarize_records,
    sweep_individual,
    sweep_vectorized,
)
from src.commands import EXIT_OK, CliConfig, eval_options, method_spec, resolve_grid
from src.data_manager import DataManager
from src.fitting import simulate_suite
from src.models import ALL_METHODS, FitConfig

logger = logging.getLogger(__name__)

EXPERIMENTS = ("vectorized", "individual", "delta", "fit", "delta-fit")


def _summary_path(cfg: CliConfig) -> Optional[str]:
    if cfg.summary:
        return cfg.summary
    if cfg.output and cfg.output != "-":
        root, _ = os.path.splitext(cfg.output)
        return f"{root}_summary.json"
    return None


def _fit_datasets(cfg: CliConfig, data_manager: DataManager):
    if cfg.input:
        data = data_manager.load_dataset(cfg.input)
        return [data.for_participant(p) for p in data.participants()]
    return simulate_suite(
        config.FIT_BENCH_TRUE_PARAMS,
        cfg.participants or config.FIT_BENCH_DATASETS,
        cfg.n_per_class or config.SIM_N_PER_CLASS,
        cfg.seed or 0,
    )


def run_bench_command(cfg: CliConfig) -> int:
    """Run the experiment chosen by --experiment over every method, or only --method."""
    data_manager = DataManager()
    experiment = cfg.experiment or "vectorized"
    methods = [method_spec(cfg)] if cfg.method else list(ALL_METHODS)
    opts = eval_options(cfg)
    seed = cfg.seed or 0
    summary = {"experiment": experiment}

    if experiment in ("fit", "delta-fit"):
        fit_config = FitConfig(opts=opts, max_starts=cfg.starts)
        datasets = _fit_datasets(cfg, data_manager)
        reps = cfg.reps or config.BENCH_REPS_FIT
        if experiment == "fit":
            records, fit_summaries = bench_fit(datasets, methods, fit_config, reps)
        else:
            records, fit_summaries = delta_fit_experiment(datasets, fitcfg=fit_config, reps=reps)
        summary["fits"] = [item.to_dict() for item in fit_summaries]
    else:
        grid = resolve_grid(cfg, data_manager)
        if experiment == "vectorized":
            records = sweep_vectorized(grid, methods, opts, cfg.reps or config.BENCH_REPS_VECTOR, seed=seed)
        elif experiment == "individual":
            records = sweep_individual(grid, methods, opts, cfg.reps or config.BENCH_REPS_INDIVIDUAL, seed=seed)
        else:
            records = delta_experiment(grid, opts=opts, reps=cfg.reps or config.BENCH_REPS_DELTA, seed=seed)

    summary["methods"] = summarize_records(records)
    data_manager.save_bench_records(records, cfg.output)
    summary_path = _summary_path(cfg)
    if summary_path:
        data_manager.save_summary(summary, summary_path)
    logger.info(f"Benchmark {experiment} produced {len(records)} records")
    return EXIT_OK
