"""Maximum-likelihood fitting of the two-class diffusion decision model."""

import logging
import math
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

import config
from src.density import density
from src.errors import DomainError
from src.models import (
    THETA_NAMES,
    Convergence,
    Dataset,
    DdmParams,
    EvalOptions,
    FitConfig,
    FitResult,
    MethodSpec,
    Observation,
    Scale,
    StimulusClass,
)
from src.simulation import simulate, simulate_suite  # noqa: F401  (re-exported)

logger = logging.getLogger(__name__)

Bounds = List[Tuple[float, float]]
_Rows = List[Tuple[bool, Observation]]


def theta_to_params(theta: Sequence[float], stimulus_class: StimulusClass) -> DdmParams:
    """Build the model parameters of one stimulus class from a parameter vector."""
    a, v_c1, v_c2, w, t0, eta = theta
    v = v_c1 if stimulus_class is StimulusClass.C1 else v_c2
    return DdmParams(v=float(v), a=float(a), w=float(w), t0=float(t0), eta=float(eta))


def default_bounds(data: Dataset) -> Bounds:
    """Bounds in THETA_NAMES order; t0 stays below the fastest response."""
    upper_t0 = data.min_rt() - config.FIT_T0_MARGIN
    if upper_t0 <= 0:
        raise DomainError("rt", f"fastest response {data.min_rt()!r} leaves no room for t0")
    bounds = dict(config.FIT_BOUNDS)
    bounds["t0"] = (0.0, upper_t0)
    return [bounds[name] for name in THETA_NAMES]


def default_starts(data: Dataset, bounds: Optional[Bounds] = None) -> List[Tuple[float, ...]]:
    """The fixed start lattice with t0 scaled to the data and clipped into bounds."""
    bounds = bounds or default_bounds(data)
    min_rt = data.min_rt()
    starts = []
    for a, v_c1, v_c2, w, t0_fraction, eta in config.DEFAULT_STARTS:
        vector = (a, v_c1, v_c2, w, t0_fraction * min_rt, eta)
        starts.append(tuple(min(max(x, lo), hi) for x, (lo, hi) in zip(vector, bounds)))
    return starts


def _observation_rows(data: Dataset) -> _Rows:
    return [(row.stimulus_class is StimulusClass.C1, Observation(row.choice, row.rt)) for row in data.rows]


def _nll_rows(theta: Sequence[float], rows: _Rows, method: MethodSpec, log_opts: EvalOptions) -> float:
    a, v_c1, v_c2, w, t0, eta = (float(x) for x in theta)
    params_c1 = DdmParams(v=v_c1, a=a, w=w, t0=t0, eta=eta)
    params_c2 = DdmParams(v=v_c2, a=a, w=w, t0=t0, eta=eta)
    log_densities = []
    for is_c1, obs in rows:
        value = density(method, params_c1 if is_c1 else params_c2, obs, log_opts).value
        if value == -math.inf:
            return math.inf
        log_densities.append(value)
    return -math.fsum(log_densities)


def _check_theta(theta: Sequence[float]) -> None:
    if len(theta) != len(THETA_NAMES):
        raise DomainError("theta", f"needs {len(THETA_NAMES)} values {THETA_NAMES}, got {len(theta)}")
    for name, value in zip(THETA_NAMES, theta):
        if not math.isfinite(value):
            raise DomainError(name, f"must be finite, got {value!r}")


def nll(theta: Sequence[float], data: Dataset, method: MethodSpec, opts: Optional[EvalOptions] = None) -> float:
    """Negative log-likelihood of the data; +inf if any row has zero density.

    Args:
        theta: Values in THETA_NAMES order
        data: Non-empty dataset
        method: Approximation method
        opts: Evaluation options; the scale is forced to log

    Raises:
        DomainError: If theta is malformed or its parameters are invalid
    """
    _check_theta(theta)
    if not data.rows:
        raise DomainError("data", "is empty")
    log_opts = replace(opts or EvalOptions(), scale=Scale.LOG)
    return _nll_rows(theta, _observation_rows(data), method, log_opts)


def _run_start(
    index: int,
    start: Sequence[float],
    rows: _Rows,
    cfg: FitConfig,
    bounds: Bounds,
    log_opts: EvalOptions,
    participant: str,
) -> FitResult:
    """Run one bounded L-BFGS-B minimization from a start vector."""
    n_evals = 0

    def objective(x: np.ndarray) -> float:
        nonlocal n_evals
        n_evals += 1
        try:
            value = _nll_rows(x, rows, cfg.method, log_opts)
        except DomainError:
            return config.FIT_PENALTY
        return value if value < config.FIT_PENALTY else config.FIT_PENALTY

    lower = np.array([lo for lo, _ in bounds])
    upper = np.array([hi for _, hi in bounds])
    x0 = np.clip(np.asarray(start, dtype=float), lower, upper)
    outcome = optimize.minimize(
        objective,
        x0,
        method="L-BFGS-B",
        bounds=bounds,
        options={"maxiter": cfg.max_iter, "maxfun": cfg.max_obj_evals},
    )
    estimate = np.clip(outcome.x, lower, upper)
    objective_value = float(outcome.fun)
    success = bool(outcome.success) and objective_value < config.FIT_PENALTY
    if not success:
        logger.warning(f"Start {index} for {participant or 'dataset'} failed: {outcome.message}")
    return FitResult(
        estimates=dict(zip(THETA_NAMES, estimate.tolist())),
        objective=objective_value,
        convergence=Convergence.SUCCESS if success else Convergence.FAILURE,
        n_obj_evals=n_evals,
        start_index=index,
        participant=participant,
        message=str(outcome.message),
    )


def fit(data: Dataset, cfg: Optional[FitConfig] = None) -> List[FitResult]:
    """Minimize the negative log-likelihood from every start.

    Args:
        data: Rows to fit, treated as one participant
        cfg: Method, options, starts, bounds and optimizer caps

    Returns:
        One FitResult per start, in start order
    """
    cfg = cfg or FitConfig()
    if not data.rows:
        raise DomainError("data", "is empty")
    classes = {row.stimulus_class for row in data.rows}
    if len(classes) < 2:
        logger.warning("Only one stimulus class present; the other drift rate is unidentified")

    bounds = cfg.bounds or default_bounds(data)
    starts = cfg.starts or default_starts(data, bounds)
    if cfg.max_starts is not None:
        starts = starts[:cfg.max_starts]
    rows = _observation_rows(data)
    log_opts = replace(cfg.opts, scale=Scale.LOG)
    participant = data.rows[0].participant if len(data.participants()) == 1 else ""

    logger.info(f"Fitting {len(rows)} rows with {cfg.method.name} from {len(starts)} starts")
    results = [
        _run_start(index, start, rows, cfg, bounds, log_opts, participant)
        for index, start in enumerate(starts)
    ]
    failures = sum(1 for result in results if result.convergence is Convergence.FAILURE)
    logger.info(f"Fit finished: {len(results) - failures} successes, {failures} failures")
    return results


def best_result(results: Sequence[FitResult]) -> Optional[FitResult]:
    """Successful run with the smallest objective, or None if every run failed."""
    successes = [result for result in results if result.convergence is Convergence.SUCCESS]
    if not successes:
        return None
    return min(successes, key=lambda result: result.objective)


def fit_participants(data: Dataset, cfg: Optional[FitConfig] = None) -> List[FitResult]:
    """Fit each participant separately and concatenate the results."""
    results: List[FitResult] = []
    for participant in data.participants():
        subset = data.for_participant(participant)
        results.extend(replace(result, participant=participant) for result in fit(subset, cfg))
    return results
