"""simulate: synthetic two-class datasets."""

import logging

import config
from src.commands import EXIT_OK, CliConfig, relative_start
from src.data_manager import DataManager
from src.errors import DomainError
from src.fitting import simulate_suite
from src.models import Dataset

logger = logging.getLogger(__name__)


def _true_params(cfg: CliConfig) -> dict:
    v_c1 = cfg.v_c1 if cfg.v_c1 is not None else cfg.v
    v_c2 = cfg.v_c2 if cfg.v_c2 is not None else cfg.v
    if v_c1 is None or v_c2 is None:
        raise DomainError("v_c1", "is required (give --v-c1 and --v-c2, or --v)")
    if cfg.a is None:
        raise DomainError("a", "is required (give --a)")
    return {
        "a": cfg.a,
        "v_c1": v_c1,
        "v_c2": v_c2,
        "w": relative_start(cfg),
        "t0": cfg.t0 or 0.0,
        "eta": cfg.eta or 0.0,
    }


def run_simulate_command(cfg: CliConfig) -> int:
    """Write participant,stimulus_class,choice,rt rows for every simulated participant."""
    n_datasets = cfg.participants or 1
    if n_datasets < 1:
        raise DomainError("participants", f"must be at least 1, got {n_datasets}")
    datasets = simulate_suite(
        _true_params(cfg),
        n_datasets,
        cfg.n_per_class or config.SIM_N_PER_CLASS,
        cfg.seed or 0,
        cfg.dt or config.SIM_DT,
    )
    combined = Dataset([row for data in datasets for row in data.rows])
    DataManager().save_dataset(combined, cfg.output)
    logger.info(f"Simulated {len(combined)} trials for {n_datasets} participant(s)")
    return EXIT_OK
