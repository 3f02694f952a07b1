"""validate: oracle self-consistency, method accuracy and normalization over a grid."""

import logging
from typing import List

import config
from src.commands import EXIT_OK, EXIT_VALIDATION, CliConfig, eval_options, method_spec, resolve_grid
from src.data_manager import DataManager
from src.density import density
from src.models import Choice, DdmParams, Observation, OracleConfig, ParamGrid, Timescale, method_name
from src.oracle import agreement_tolerance, check_normalization, method_tolerance, reference_evaluation

logger = logging.getLogger(__name__)

MAX_NORMALIZATION_SETS = 12
MAX_NORMALIZATION_A = 2.5


def normalization_sets(grid: ParamGrid, limit: int = MAX_NORMALIZATION_SETS) -> List[DdmParams]:
    """Up to limit grid parameter sets with a <= 2.5, spread evenly over the grid order."""
    candidates = [p for p in grid.points() if p.a <= MAX_NORMALIZATION_A]
    if len(candidates) <= limit:
        return candidates
    step = (len(candidates) - 1) / (limit - 1)
    return [candidates[round(i * step)] for i in range(limit)]


def run_validate_command(cfg: CliConfig) -> int:
    """Check every grid point on the lower boundary and report misses; exit 3 on any miss."""
    data_manager = DataManager()
    grid = resolve_grid(cfg, data_manager)
    method = method_spec(cfg)
    opts = eval_options(cfg)
    oracle_config = OracleConfig()

    checked = 0
    disagreements = 0
    inaccurate = 0
    worst_error = 0.0
    for params in grid.points():
        for t in grid.t:
            if t <= params.t0:
                continue
            obs = Observation(Choice.LOWER, t)
            evaluation = reference_evaluation(params, obs, oracle_config)
            checked += 1
            if not abs(evaluation.large_value - evaluation.small_value) <= agreement_tolerance(evaluation, oracle_config):
                disagreements += 1
                logger.debug(f"Oracle disagreement at {params} t={t}")
                continue
            result = density(method, params, obs, opts)
            error = abs(result.value - evaluation.value)
            worst_error = max(worst_error, error)
            if not error <= method_tolerance(opts.eps, evaluation, result.timescale_used is Timescale.LARGE):
                inaccurate += 1
                logger.debug(f"{method_name(method)} off by {error:.3g} at {params} t={t}")
    logger.info(f"Checked {checked} points: {disagreements} oracle disagreements, {inaccurate} inaccurate")

    normalization = []
    for params in normalization_sets(grid):
        mass = check_normalization(params, density_fn=lambda obs, p=params: density(method, p, obs, opts).value)
        ok = abs(mass - 1.0) <= config.NORMALIZATION_TOL
        normalization.append({"params": params.to_dict(), "mass": mass, "ok": ok})
        if not ok:
            logger.warning(f"Mass {mass:.8f} for {params}")
    misses = sum(1 for item in normalization if not item["ok"])
    logger.info(f"Normalization: {len(normalization) - misses} of {len(normalization)} sets within tolerance")

    report = {
        "method": method_name(method),
        "eps": opts.eps,
        "points": checked,
        "oracle_disagreements": disagreements,
        "inaccurate": inaccurate,
        "max_abs_error": worst_error,
        "normalization": normalization,
    }
    data_manager.save_summary(report, cfg.output)
    if disagreements or inaccurate or misses:
        logger.error("Validation failed")
        return EXIT_VALIDATION
    return EXIT_OK
