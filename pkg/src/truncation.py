"""Term counts that bound truncation error, and the timescale choosers."""

import math
from typing import Optional

from src.models import TimescaleChoice


def k_large_nav(t_hat: float, eps_prime: float) -> int:
    """Large-time term count bounding the standardized error by eps_prime."""
    floor_candidate = 1 / (math.pi * math.sqrt(t_hat))
    log_arg = math.log(math.pi) + math.log(t_hat) + math.log(eps_prime)
    if log_arg < 0:
        candidate = math.sqrt(-2 * log_arg / (math.pi * math.pi * t_hat))
        k = math.ceil(max(candidate, floor_candidate))
    else:
        k = math.ceil(floor_candidate)
    return max(1, k)


def k_small_nav(t_hat: float, eps_prime: float) -> int:
    """Small-time term count from the Navarro-Fuss bound."""
    fallback = 1 + math.sqrt(t_hat)
    log_arg = math.log(2 * eps_prime) + 0.5 * math.log(2 * math.pi * t_hat)
    if log_arg < 0:
        candidate = 2 + math.sqrt(-2 * t_hat * log_arg)
        k = math.ceil(max(candidate, fallback))
    else:
        k = math.ceil(fallback)
    return max(1, k)


def k_small_gon(t_hat: float, w: float, eps_prime: float) -> int:
    """Small-time term count from the Gondan bound; always odd."""
    u_eps = min(-1.0, math.log(2 * math.pi) + 2 * math.log(t_hat) + 2 * math.log(eps_prime))
    arg = -t_hat * (u_eps - math.sqrt(-2 * u_eps - 2))
    first = 0.5 * (math.sqrt(2 * t_hat) - w)
    second = 0.5 * (math.sqrt(arg) - w) if arg > 0 else first
    pairs = max(0, math.ceil(max(first, second)))
    return 1 + 2 * pairs


def choose_combined_nav(t_hat: float, eps_prime: float, eps_small: Optional[float] = None) -> TimescaleChoice:
    """Pick the timescale with fewer Navarro-Fuss terms; ties go to small time."""
    k_large = k_large_nav(t_hat, eps_prime)
    k_small = k_small_nav(t_hat, eps_prime if eps_small is None else eps_small)
    if k_large < k_small:
        return TimescaleChoice.large(k_large)
    return TimescaleChoice.small_fixed(k_small)


def choose_combined_gon(
    t_hat: float, w: float, eps_prime: float, eps_small: Optional[float] = None
) -> TimescaleChoice:
    """Pick large-time Navarro-Fuss or small-time Gondan, whichever is shorter."""
    k_large = k_large_nav(t_hat, eps_prime)
    k_small = k_small_gon(t_hat, w, eps_prime if eps_small is None else eps_small)
    if k_large < k_small:
        return TimescaleChoice.large(k_large)
    return TimescaleChoice.small_fixed(k_small)


def choose_swse_combined(t_hat: float, eps_prime: float, delta: int) -> TimescaleChoice:
    """Use the large-time series only when it needs at most delta terms."""
    k_large = k_large_nav(t_hat, eps_prime)
    if k_large <= delta:
        return TimescaleChoice.large(k_large)
    return TimescaleChoice.small_adaptive()
