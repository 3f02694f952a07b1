"""Euler-Maruyama simulation of two-class diffusion decision data."""

import logging
import math
from typing import Dict, List, Tuple

import numpy as np

import config
from src.core import validate
from src.errors import DomainError, TrialTimeout
from src.models import THETA_NAMES, Choice, Dataset, DdmParams, StimulusClass, Trial

logger = logging.getLogger(__name__)


def _run_trials(
    drifts: np.ndarray, a: float, w: float, dt: float, max_steps: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Step every trial until it leaves (0, a) or max_steps runs out.

    Returns:
        Tuple of (upper-boundary flags, crossing step counts, finished flags)
    """
    n = drifts.size
    upper = np.zeros(n, dtype=bool)
    steps = np.zeros(n, dtype=np.int64)
    finished = np.zeros(n, dtype=bool)

    active = np.arange(n)
    position = np.full(n, w * a)
    drift_step = drifts * dt
    noise_scale = math.sqrt(dt)
    step = 0
    while active.size and step < max_steps:
        step += 1
        position += drift_step + noise_scale * rng.standard_normal(active.size)
        hit_upper = position >= a
        crossed = hit_upper | (position <= 0)
        if crossed.any():
            done = active[crossed]
            upper[done] = hit_upper[crossed]
            steps[done] = step
            finished[done] = True
            keep = ~crossed
            active = active[keep]
            position = position[keep]
            drift_step = drift_step[keep]
    return upper, steps, finished


def _draw_drifts(rng: np.random.Generator, v: float, eta: float, n: int) -> np.ndarray:
    if eta > 0:
        return rng.normal(v, eta, size=n)
    return np.full(n, float(v))


def simulate(
    true_params: Dict[str, float],
    n_per_class: int,
    seed: int,
    dt: float = config.SIM_DT,
    participant: str = "p01",
    max_time: float = config.SIM_MAX_TIME,
) -> Dataset:
    """Simulate n_per_class trials for each stimulus class.

    Trials that do not cross within max_time simulated seconds are redrawn,
    fresh drift included, up to config.SIM_MAX_RESAMPLE_ROUNDS times.

    Args:
        true_params: Mapping with keys a, v_c1, v_c2, w, t0, eta
        n_per_class: Trials per stimulus class
        seed: Seed of the numpy generator; equal seeds give equal datasets
        dt: Euler step in seconds
        participant: Participant id written on every row
        max_time: Simulated seconds before a trial counts as timed out

    Returns:
        Dataset with class c1 rows followed by class c2 rows

    Raises:
        DomainError: If parameters, dt or n_per_class are invalid
        TrialTimeout: If trials still fail to cross after every resampling round
    """
    missing = [name for name in THETA_NAMES if name not in true_params]
    if missing:
        raise DomainError(missing[0], "is required to simulate")
    if not 0 < dt <= 1e-3:
        raise DomainError("dt", f"must lie in (0, 1e-3], got {dt!r}")
    if n_per_class < 1:
        raise DomainError("n_per_class", f"must be at least 1, got {n_per_class!r}")

    a = true_params["a"]
    w = true_params["w"]
    t0 = true_params["t0"]
    eta = true_params["eta"]
    rng = np.random.default_rng(seed)
    max_steps = int(math.ceil(max_time / dt))
    rows: List[Trial] = []

    for stimulus_class, v in ((StimulusClass.C1, true_params["v_c1"]), (StimulusClass.C2, true_params["v_c2"])):
        validate(DdmParams(v=v, a=a, w=w, t0=t0, eta=eta))
        upper, steps, finished = _run_trials(_draw_drifts(rng, v, eta, n_per_class), a, w, dt, max_steps, rng)
        rounds = 0
        while not finished.all():
            redo = np.flatnonzero(~finished)
            rounds += 1
            if rounds > config.SIM_MAX_RESAMPLE_ROUNDS:
                logger.error(f"{redo.size} {stimulus_class.value} trials never crossed a boundary")
                raise TrialTimeout(int(redo.size), max_time)
            logger.warning(f"Resampling {redo.size} {stimulus_class.value} trial(s) that exceeded {max_time} s")
            again_upper, again_steps, again_finished = _run_trials(
                _draw_drifts(rng, v, eta, redo.size), a, w, dt, max_steps, rng
            )
            upper[redo] = again_upper
            steps[redo] = again_steps
            finished[redo] = again_finished

        rts = steps * dt + t0
        for is_upper, rt in zip(upper.tolist(), rts.tolist()):
            rows.append(Trial(participant, stimulus_class, Choice.UPPER if is_upper else Choice.LOWER, rt))

    logger.info(f"Simulated {len(rows)} trials for {participant} (seed {seed})")
    return Dataset(rows)


def simulate_suite(
    true_params: Dict[str, float],
    n_datasets: int,
    n_per_class: int,
    seed: int,
    dt: float = config.SIM_DT,
) -> List[Dataset]:
    """Simulate a family of datasets with consecutive seeds and ids p01, p02, ..."""
    width = max(2, len(str(n_datasets)))
    return [
        simulate(true_params, n_per_class, seed + i, dt, participant=f"p{i + 1:0{width}d}")
        for i in range(n_datasets)
    ]
