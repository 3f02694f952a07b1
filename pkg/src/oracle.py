"""Slow reference density used by the test suite and the validate command.

Both series are summed to a fixed, very large number of terms with exact
(fsum) accumulation; the small-time value is returned and the large-time value
must agree with it.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

import config
from src.core import prepare
from src.density import log_prefactor
from src.errors import OracleDisagreement
from src.models import (
    Choice,
    DdmParams,
    Drift,
    Observation,
    OracleConfig,
    OracleEvaluation,
    Timescale,
)

logger = logging.getLogger(__name__)

UNIT_ROUNDOFF = 2.0 ** -53
ROUNDING_SAFETY = 8.0

DensityFn = Callable[[Observation], float]


def _scaled(log_factor: float, total: float) -> float:
    """Return exp(log_factor) * total without intermediate overflow."""
    if total == 0 or not math.isfinite(log_factor):
        return 0.0
    magnitude = log_factor + math.log(abs(total))
    if magnitude > 709.0:
        return math.copysign(math.inf, total)
    return math.copysign(math.exp(magnitude), total)


def reference_evaluation(params: DdmParams, obs: Observation, cfg: Optional[OracleConfig] = None) -> OracleEvaluation:
    """Evaluate both series with cfg.n_terms terms and estimate their rounding error."""
    cfg = cfg or OracleConfig()
    prepared = prepare(params, obs)
    if prepared.degenerate:
        return OracleEvaluation(0.0, 0.0, 0.0, 0.0, 0.0)

    p = prepared.params
    t = prepared.t_shifted
    t_hat = prepared.t_hat
    drift = Drift.VAR if p.eta > 0 else Drift.CONST
    lp_large = log_prefactor(Timescale.LARGE, drift, p.v, p.eta, p.a, p.w, t)
    lp_small = log_prefactor(Timescale.SMALL, drift, p.v, p.eta, p.a, p.w, t)

    j = np.arange(1, cfg.n_terms + 1, dtype=np.float64)
    angle = j * p.w * np.pi
    decay = j * j * (np.pi * np.pi * t_hat / 2)
    envelope = j * np.exp(-decay)
    large_sum = math.fsum(envelope * np.sin(angle))
    large_condition = math.fsum(envelope * (angle + decay + 4.0)) * UNIT_ROUNDOFF

    half = cfg.n_terms // 2
    r = p.w + 2.0 * np.arange(-half, half + 1, dtype=np.float64)
    small_terms = r * np.exp(-r * r / (2 * t_hat))
    small_sum = math.fsum(small_terms)
    small_condition = math.fsum(np.abs(small_terms) * (r * r / (2 * t_hat) + 4.0)) * UNIT_ROUNDOFF

    small_value = _scaled(lp_small, small_sum)
    return OracleEvaluation(
        value=max(small_value, 0.0),
        large_value=_scaled(lp_large, large_sum),
        small_value=small_value,
        rounding_bound_large=_scaled(lp_large, large_condition),
        rounding_bound_small=_scaled(lp_small, small_condition),
    )


def agreement_tolerance(evaluation: OracleEvaluation, cfg: Optional[OracleConfig] = None) -> float:
    """Tolerance within which the two reference series must agree."""
    cfg = cfg or OracleConfig()
    return cfg.agreement_tol * max(1.0, abs(evaluation.value)) + ROUNDING_SAFETY * (
        evaluation.rounding_bound_large + evaluation.rounding_bound_small
    )


def reference_density(params: DdmParams, obs: Observation, cfg: Optional[OracleConfig] = None) -> float:
    """Return the reference density, checking the two series against each other.

    Raises:
        OracleDisagreement: If the large-time and small-time values differ beyond tolerance
    """
    cfg = cfg or OracleConfig()
    evaluation = reference_evaluation(params, obs, cfg)
    tolerance = agreement_tolerance(evaluation, cfg)
    if not abs(evaluation.large_value - evaluation.small_value) <= tolerance:
        logger.error(f"Oracle disagreement for {params} at {obs}")
        raise OracleDisagreement(evaluation.large_value, evaluation.small_value, tolerance)
    return evaluation.value


def _breakpoints(params: DdmParams, horizon: float) -> list:
    """Interior points that put the quadrature near the density's mode."""
    a = params.a / math.sqrt(params.sigma2)
    scale = a * a
    return [params.t0 + scale * f for f in (0.02, 0.1, 0.5, 2.0, 8.0) if scale * f < horizon]


def boundary_masses(
    params: DdmParams,
    cfg: Optional[OracleConfig] = None,
    density_fn: Optional[DensityFn] = None,
    horizon: float = config.NORMALIZATION_HORIZON,
) -> Tuple[float, float]:
    """Integrate the lower and upper densities over (t0, t0 + horizon].

    Args:
        params: Model parameters
        cfg: Oracle settings, used when density_fn is not given
        density_fn: Density of an observation; defaults to reference_density
        horizon: Seconds integrated after t0

    Returns:
        Tuple of (lower mass, upper mass)
    """
    if density_fn is None:
        def density_fn(obs: Observation) -> float:
            return reference_density(params, obs, cfg)

    points = _breakpoints(params, horizon)
    masses = []
    for choice in (Choice.LOWER, Choice.UPPER):
        mass, error = integrate.quad(
            lambda t: density_fn(Observation(choice, t)),
            params.t0,
            params.t0 + horizon,
            points=points,
            limit=500,
            epsabs=1e-10,
            epsrel=1e-9,
        )
        logger.debug(f"{choice.value} mass {mass:.12g} (quadrature error {error:.2g})")
        masses.append(mass)
    return masses[0], masses[1]


def check_normalization(
    params: DdmParams,
    cfg: Optional[OracleConfig] = None,
    density_fn: Optional[DensityFn] = None,
) -> float:
    """Return the total probability mass of both boundaries."""
    lower, upper = boundary_masses(params, cfg, density_fn)
    return lower + upper


def method_tolerance(eps: float, evaluation: OracleEvaluation, large_time_used: bool) -> float:
    """Allowed gap between a truncated density and the reference value.

    eps covers truncation; the rounding bounds cover cancellation inside the
    series the method actually summed.
    """
    rounding = evaluation.rounding_bound_small
    if large_time_used:
        rounding += evaluation.rounding_bound_large
    return eps + ROUNDING_SAFETY * rounding
