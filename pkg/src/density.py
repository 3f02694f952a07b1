"""Wiener first-passage-time density for the thirteen approximation methods.

Densities are evaluated on the lower boundary after sigma normalization and
the upper-to-lower flip. The prefactor outside each series is handled in log
space; eps bounds the absolute error of the final (defective) density.
"""

import logging
import math
import sys
from typing import List, Optional, Sequence, Tuple

from src.core import prepare
from src.models import (
    ChoiceKind,
    DdmParams,
    DensityResult,
    Drift,
    EvalOptions,
    MethodKind,
    MethodSpec,
    Observation,
    Scale,
    SumStyle,
    Timescale,
    TimescaleChoice,
    Tolerance,
)
from src.sumkernels import sum_large, sum_small_s14, sum_small_s17, sum_swse
from src.truncation import (
    choose_combined_gon,
    choose_combined_nav,
    choose_swse_combined,
    k_large_nav,
    k_small_gon,
    k_small_nav,
)

logger = logging.getLogger(__name__)

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2 * math.pi)
_MAX_LOG = math.log(sys.float_info.max)
_DEFAULT_OPTIONS = EvalOptions()
_LOG_OPTIONS = EvalOptions(scale=Scale.LOG)


def _exp(x: float) -> float:
    """exp() that saturates to inf instead of raising and never returns a tolerance of 0."""
    if x > _MAX_LOG:
        return math.inf
    return max(math.exp(x), sys.float_info.min)


def log_prefactor(
    timescale: Timescale, drift: Drift, v: float, eta: float, a: float, w: float, t_shifted: float
) -> float:
    """Natural log of the multiplicative term outside the series.

    With eta == 0 the variable-drift branch returns exactly the constant-drift value.
    """
    x = v * a * w
    y = v * v * t_shifted
    if drift is Drift.CONST:
        exponent = -x - y / 2
        spread = 0.0
    else:
        eta2 = eta * eta
        exponent = (eta2 * a * a * w * w - 2 * x - y) / (2 * (1 + eta2 * t_shifted))
        spread = math.log1p(eta2 * t_shifted)
    if timescale is Timescale.SMALL:
        return math.log(a) - 0.5 * (LOG_2PI + 3 * math.log(t_shifted) + spread) + exponent
    return LOG_PI - 2 * math.log(a) - 0.5 * spread + exponent


def log_m_conversion(v: float, eta: float, a: float, w: float, t_shifted: float) -> float:
    """Log of the factor turning a constant-drift density into its variable-drift value."""
    return (
        log_prefactor(Timescale.SMALL, Drift.VAR, v, eta, a, w, t_shifted)
        - log_prefactor(Timescale.SMALL, Drift.CONST, v, eta, a, w, t_shifted)
    )


def m_conversion(v: float, eta: float, a: float, w: float, t_shifted: float) -> float:
    """Multiplier M with M * f(t | v, a, w) = f(t | v, eta, a, w).

    Not used by density(); converting through M loses accuracy when the
    constant-drift value underflows.
    """
    log_m = log_m_conversion(v, eta, a, w, t_shifted)
    return math.inf if log_m > _MAX_LOG else math.exp(log_m)


def rescale_tolerance(eps: float, lp_large: float, lp_small: float, t_hat: float) -> Tolerance:
    """Translate a density-level tolerance into the sum-level tolerances."""
    log_eps = math.log(eps)
    return Tolerance(
        eps=eps,
        eps_prime_large=_exp(log_eps - lp_large),
        eps_prime_small=_exp(log_eps - lp_small),
        eps_standardized=_exp(log_eps - lp_small - 0.5 * (LOG_2PI + 3 * math.log(t_hat))),
    )


def _small_fixed(style: SumStyle, t_hat: float, w: float, k: int, max_terms: int) -> Tuple[float, int, bool]:
    if style is SumStyle.S14:
        terms = 2 * (k // 2) + 1
        if terms > max_terms:
            k = max(1, max_terms - 1)
            return sum_small_s14(t_hat, w, k), 2 * (k // 2) + 1, False
        return sum_small_s14(t_hat, w, k), terms, True
    if k > max_terms:
        return sum_small_s17(t_hat, w, max_terms), max_terms, False
    return sum_small_s17(t_hat, w, k), k, True


def _large_fixed(t_hat: float, w: float, k: int, max_terms: int) -> Tuple[float, int, bool]:
    if k > max_terms:
        return sum_large(t_hat, w, max_terms), max_terms, False
    return sum_large(t_hat, w, k), k, True


def _evaluate_series(
    method: MethodSpec, t_hat: float, w: float, tol: Tolerance, opts: EvalOptions
) -> Tuple[Timescale, float, int, bool]:
    """Run the method's truncation rule and return (timescale, sum, terms, converged)."""
    kind = method.kind
    if kind is MethodKind.LARGE:
        choice = TimescaleChoice.large(k_large_nav(t_hat, tol.eps_prime_large))
    elif kind is MethodKind.SMALL_NAV:
        choice = TimescaleChoice.small_fixed(k_small_nav(t_hat, tol.eps_standardized))
    elif kind is MethodKind.SMALL_GON:
        choice = TimescaleChoice.small_fixed(k_small_gon(t_hat, w, tol.eps_standardized))
    elif kind is MethodKind.SMALL_SWSE:
        choice = TimescaleChoice.small_adaptive()
    elif kind is MethodKind.COMBINED_NAV:
        choice = choose_combined_nav(t_hat, tol.eps_prime_large, tol.eps_standardized)
    elif kind is MethodKind.COMBINED_GON:
        choice = choose_combined_gon(t_hat, w, tol.eps_prime_large, tol.eps_standardized)
    else:
        choice = choose_swse_combined(t_hat, tol.eps_prime_large, opts.delta)

    if choice.kind is ChoiceKind.LARGE_TIME:
        total, terms, converged = _large_fixed(t_hat, w, choice.k, opts.max_terms)
        return Timescale.LARGE, total, terms, converged
    if choice.kind is ChoiceKind.SMALL_TIME_FIXED:
        total, terms, converged = _small_fixed(method.style, t_hat, w, choice.k, opts.max_terms)
        return Timescale.SMALL, total, terms, converged
    result = sum_swse(method.style, t_hat, w, tol.eps_prime_small, opts.max_terms)
    return Timescale.SMALL, result.sum, result.terms_used, result.converged


def density(
    method: MethodSpec, params: DdmParams, obs: Observation, opts: Optional[EvalOptions] = None
) -> DensityResult:
    """Evaluate the first-passage-time density of one observation.

    Args:
        method: Approximation method
        params: Model parameters (any sigma2)
        obs: Boundary and response time
        opts: Tolerance, delta, term cap and output scale

    Returns:
        DensityResult on the scale requested by opts

    Raises:
        DomainError: If params are invalid
    """
    opts = opts or _DEFAULT_OPTIONS
    prepared = prepare(params, obs)
    log_scale = opts.scale is Scale.LOG
    if prepared.degenerate:
        return DensityResult(-math.inf if log_scale else 0.0, 0, None, True)

    p = prepared.params
    t = prepared.t_shifted
    t_hat = prepared.t_hat
    drift = Drift.VAR if p.eta > 0 else Drift.CONST
    lp_large = log_prefactor(Timescale.LARGE, drift, p.v, p.eta, p.a, p.w, t)
    lp_small = log_prefactor(Timescale.SMALL, drift, p.v, p.eta, p.a, p.w, t)
    tol = rescale_tolerance(opts.eps, lp_large, lp_small, t_hat)

    timescale, total, terms, converged = _evaluate_series(method, t_hat, p.w, tol, opts)
    if total > 0:
        lp = lp_large if timescale is Timescale.LARGE else lp_small
        log_value = lp + math.log(total)
    else:
        log_value = -math.inf
    if log_scale:
        value = log_value
    else:
        value = math.inf if log_value > _MAX_LOG else math.exp(log_value)
    return DensityResult(value, terms, timescale, converged)


def density_batch(
    method: MethodSpec,
    params: DdmParams,
    observations: Sequence[Observation],
    opts: Optional[EvalOptions] = None,
) -> List[DensityResult]:
    """Evaluate each observation with its own term count."""
    results = [density(method, params, obs, opts) for obs in observations]
    missed = sum(1 for result in results if not result.converged)
    if missed:
        logger.warning(f"{missed} of {len(results)} evaluations hit the term cap with {method.name}")
    return results


def log_density(
    method: MethodSpec, params: DdmParams, obs: Observation, opts: Optional[EvalOptions] = None
) -> float:
    """Return the natural log of the density; -inf where the density is 0."""
    if opts is None:
        opts = _LOG_OPTIONS
    elif opts.scale is not Scale.LOG:
        opts = EvalOptions(eps=opts.eps, delta=opts.delta, max_terms=opts.max_terms, scale=Scale.LOG)
    return density(method, params, obs, opts).value


def log_likelihood(
    method: MethodSpec,
    params: DdmParams,
    observations: Sequence[Observation],
    opts: Optional[EvalOptions] = None,
) -> float:
    """Sum of log densities over a set of observations."""
    return sum(log_density(method, params, obs, opts) for obs in observations)
