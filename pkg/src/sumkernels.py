"""Truncated large-time and small-time series and adaptive small-time summation.

All functions work in effective time t_hat = (t - t0) / a^2 with sigma^2 = 1 and
a lower-boundary start point w. The small-time terms share one ordering for
both summation styles: position 0 is the j = 0 term, then the terms alternate
below and above it (S14 indices 0, -1, 1, -2, 2, ...). In that ordering the
S17 form is the natural index, so partial sums of the two styles over
matching windows are accumulated identically.
"""

import math
from typing import Iterator

from src.models import SumStyle, SwseResult


def sum_large(t_hat: float, w: float, k: int) -> float:
    """Return sum_{j=1..k} j sin(j w pi) exp(-j^2 pi^2 t_hat / 2)."""
    half_pi2_t = math.pi * math.pi * t_hat / 2
    total = 0.0
    for j in range(1, k + 1):
        total += j * math.sin(j * w * math.pi) * math.exp(-j * j * half_pi2_t)
    return total


def sum_small_s14(t_hat: float, w: float, k: int) -> float:
    """Return the two-sided small-time sum over j in [-floor(k/2), floor(k/2)]."""
    two_t = 2 * t_hat
    total = w * math.exp(-w * w / two_t)
    for j in range(1, k // 2 + 1):
        r = w - 2 * j
        total += r * math.exp(-r * r / two_t)
        r = w + 2 * j
        total += r * math.exp(-r * r / two_t)
    return total


def sum_small_s17(t_hat: float, w: float, k: int) -> float:
    """Return the one-sided alternating small-time sum over its first k terms."""
    two_t = 2 * t_hat
    total = 0.0
    for j in range(k):
        if j % 2 == 0:
            r = j + w
            total += r * math.exp(-r * r / two_t)
        else:
            r = (j + 1) - w
            total -= r * math.exp(-r * r / two_t)
    return total


def swse_terms(style: SumStyle, t_hat: float, w: float) -> Iterator[float]:
    """Yield small-time terms in the shared alternating ordering, indefinitely."""
    two_t = 2 * t_hat
    if style is SumStyle.S14:
        yield w * math.exp(-w * w / two_t)
        j = 1
        while True:
            r = w - 2 * j
            yield r * math.exp(-r * r / two_t)
            r = w + 2 * j
            yield r * math.exp(-r * r / two_t)
            j += 1
    else:
        j = 0
        while True:
            if j % 2 == 0:
                r = j + w
                yield r * math.exp(-r * r / two_t)
            else:
                r = (j + 1) - w
                yield -(r * math.exp(-r * r / two_t))
            j += 1


def j_threshold(style: SumStyle, t_hat: float, w: float) -> int:
    """Closed-form index after which the term magnitudes start to shrink.

    For S14 the index counts symmetric pairs around j = 0, for S17 it counts
    single terms.
    """
    root = math.sqrt(t_hat)
    if style is SumStyle.S14:
        return max(0, math.floor(root / 2 - w / 2))
    return max(0, math.floor(root - w))


def monotone_start(style: SumStyle, t_hat: float, w: float) -> int:
    """First position in the shared ordering from which |terms| strictly decrease.

    The position lies after the closed-form threshold and at or beyond the
    peak of r exp(-r^2 / (2 t_hat)), which sits at r = sqrt(t_hat).
    """
    threshold = j_threshold(style, t_hat, w)
    first = 2 * threshold + 1 if style is SumStyle.S14 else threshold + 1
    peak = math.sqrt(t_hat)
    even_position = 2 * max(0, math.ceil((peak - w) / 2))
    odd_position = 2 * max(0, math.ceil((peak - 2 + w) / 2)) + 1
    return max(first, min(even_position, odd_position))


def sum_swse(style: SumStyle, t_hat: float, w: float, eps_prime: float, max_terms: int) -> SwseResult:
    """Add small-time terms until one past the monotone start falls below eps_prime.

    Args:
        style: Storage style of the terms
        t_hat: Effective response time
        w: Relative start point
        eps_prime: Sum-level tolerance
        max_terms: Cap on the number of terms added

    Returns:
        SwseResult whose converged flag is False when the cap ran out first
    """
    start = monotone_start(style, t_hat, w)
    total = 0.0
    n = 0
    for term in swse_terms(style, t_hat, w):
        magnitude = abs(term)
        if n >= start and magnitude < eps_prime:
            return SwseResult(sum=total, terms_used=n, last_omitted_abs=magnitude, converged=True)
        if n >= max_terms:
            return SwseResult(sum=total, terms_used=n, last_omitted_abs=magnitude, converged=False)
        total += term
        n += 1
    raise AssertionError("unreachable")  # swse_terms never ends
