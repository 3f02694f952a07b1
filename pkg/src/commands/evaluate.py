"""eval: density of each observation in a file or of one inline observation."""

import logging
import math

from src.commands import EXIT_OK, CliConfig, eval_options, method_spec, model_params
from src.data_manager import DataManager
from src.density import density_batch
from src.errors import InputError
from src.models import Choice, Observation, Scale, method_name

logger = logging.getLogger(__name__)


def _observations(cfg: CliConfig, data_manager: DataManager):
    if cfg.input:
        return data_manager.load_observations(cfg.input)
    if cfg.rt is None:
        raise InputError("eval needs --input or --rt", field="rt")
    try:
        choice = Choice((cfg.choice or Choice.LOWER.value).lower())
    except ValueError:
        raise InputError(f"--choice must be lower or upper, got {cfg.choice!r}", field="choice") from None
    return [Observation(choice, cfg.rt)]


def _linear(log_value: float) -> float:
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


def run_eval_command(cfg: CliConfig) -> int:
    """Write choice,rt,density,log_density,terms_used,timescale_used,converged rows.

    With --log the density column is left empty, for data whose densities
    underflow on the linear scale.
    """
    data_manager = DataManager()
    method = method_spec(cfg)
    params = model_params(cfg)
    observations = _observations(cfg, data_manager)

    logs = density_batch(method, params, observations, eval_options(cfg, Scale.LOG))
    rows = []
    for obs, log in zip(observations, logs):
        rows.append({
            "choice": obs.choice.value,
            "rt": obs.rt,
            "density": None if cfg.log else _linear(log.value),
            "log_density": log.value,
            "terms_used": log.terms_used,
            "timescale_used": log.timescale_used.value if log.timescale_used else "",
            "converged": log.converged,
        })
    data_manager.save_evaluations(rows, cfg.output)
    logger.info(f"Evaluated {len(rows)} observations with {method_name(method)}")
    return EXIT_OK
