"""fit: multi-start maximum likelihood for every participant in a dataset."""

import logging

from src.commands import EXIT_OK, CliConfig, eval_options, method_spec
from src.data_manager import DataManager
from src.errors import InputError
from src.fitting import best_result, fit_participants
from src.models import FitConfig

logger = logging.getLogger(__name__)


def run_fit_command(cfg: CliConfig) -> int:
    """Fit the --input dataset and write one JSON record per participant and start."""
    if not cfg.input:
        raise InputError("fit needs --input", field="input")
    data_manager = DataManager()
    data = data_manager.load_dataset(cfg.input)
    if cfg.starts is not None and cfg.starts < 1:
        raise InputError(f"--starts must be at least 1, got {cfg.starts}", field="starts")
    fit_config = FitConfig(method=method_spec(cfg), opts=eval_options(cfg), max_starts=cfg.starts)

    results = fit_participants(data, fit_config)
    for participant in data.participants():
        best = best_result([r for r in results if r.participant == participant])
        if best is None:
            logger.warning(f"No start converged for {participant}")
        else:
            logger.info(f"{participant}: best nll {best.objective:.6f} from start {best.start_index}")
    data_manager.save_fit_results(results, cfg.output)
    return EXIT_OK
