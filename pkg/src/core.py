"""Parameter validation, sigma scaling, boundary flip and time shift."""

import math
from dataclasses import replace

from src.errors import DomainError
from src.models import Choice, DdmParams, NormalizedInput, Observation


def validate(params: DdmParams) -> None:
    """Raise DomainError naming the first parameter outside its domain.

    Args:
        params: Parameters to check

    Raises:
        DomainError: If any field is non-finite or out of range
    """
    for name in ("v", "eta", "a", "w", "t0", "sigma2"):
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise DomainError(name, f"must be a finite number, got {value!r}")
    if params.a <= 0:
        raise DomainError("a", f"must be positive, got {params.a!r}")
    if not 0 < params.w < 1:
        raise DomainError("w", f"must lie strictly inside (0, 1), got {params.w!r}")
    if params.eta < 0:
        raise DomainError("eta", f"must be non-negative, got {params.eta!r}")
    if params.t0 < 0:
        raise DomainError("t0", f"must be non-negative, got {params.t0!r}")
    if params.sigma2 <= 0:
        raise DomainError("sigma2", f"must be positive, got {params.sigma2!r}")


def normalize(params: DdmParams) -> DdmParams:
    """Rescale v, eta and a by sigma so that sigma2 becomes 1."""
    validate(params)
    if params.sigma2 == 1:
        return params
    sigma = math.sqrt(params.sigma2)
    return replace(
        params,
        v=params.v / sigma,
        eta=params.eta / sigma,
        a=params.a / sigma,
        sigma2=1.0,
    )


def flip_for_boundary(params: DdmParams, choice: Choice) -> DdmParams:
    """Map an upper-boundary evaluation onto the lower boundary."""
    if choice is Choice.LOWER:
        return params
    return replace(params, v=-params.v, w=1 - params.w)


def prepare(params: DdmParams, obs: Observation) -> NormalizedInput:
    """Normalize, flip and shift an observation into effective time."""
    normalized = flip_for_boundary(normalize(params), obs.choice)
    t_shifted = obs.rt - normalized.t0
    t_hat = t_shifted / (normalized.a * normalized.a)
    return NormalizedInput(
        t_shifted=t_shifted,
        t_hat=t_hat,
        params=normalized,
        degenerate=t_shifted <= 0,
    )


def start_point_to_w(z: float, a: float) -> float:
    """Convert an absolute start point z into the relative start point w."""
    if not math.isfinite(z) or not math.isfinite(a) or a <= 0:
        raise DomainError("z", f"needs a finite z and positive a, got z={z!r}, a={a!r}")
    if not 0 < z < a:
        raise DomainError("z", f"must lie strictly between 0 and a={a!r}, got {z!r}")
    return z / a
