"""Benchmark harness: grid sweeps, the delta experiment and fitting benchmarks."""

import logging
import math
import time
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

import config
from src.density import density, density_batch
from src.fitting import fit
from src.models import (
    BenchCandidate,
    BenchRecord,
    Choice,
    Convergence,
    Dataset,
    DdmParams,
    EvalOptions,
    FitConfig,
    FitResult,
    FitSummary,
    MethodKind,
    MethodSpec,
    Observation,
    ParamGrid,
    SumStyle,
)

logger = logging.getLogger(__name__)

Candidates = Sequence[Union[MethodSpec, BenchCandidate]]


def table1_grid() -> ParamGrid:
    """Wide grid with response times from 0.001 to 30 seconds."""
    return ParamGrid.from_dict(config.TABLE_1)


def table2_grid() -> ParamGrid:
    """Grid of typical response-time data."""
    return ParamGrid.from_dict(config.TABLE_2)


def _as_candidates(methods: Candidates) -> List[BenchCandidate]:
    return [m if isinstance(m, BenchCandidate) else BenchCandidate.of(m) for m in methods]


def _options_for(candidate: BenchCandidate, opts: EvalOptions) -> EvalOptions:
    if candidate.delta is None:
        return opts
    return replace(opts, delta=candidate.delta)


def _delta_column(candidate: BenchCandidate, opts: EvalOptions) -> Optional[int]:
    if candidate.method.kind is not MethodKind.COMBINED_SWSE:
        return None
    return candidate.delta if candidate.delta is not None else opts.delta


def time_call(fn: Callable[[], object], reps: int, warmup: int = config.BENCH_WARMUP) -> List[int]:
    """Run fn warmup times untimed, then return reps wall-clock samples in nanoseconds."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    return samples


def _interleaved_samples(
    fns: Sequence[Callable[[], object]], reps: int, warmup: int, rng: np.random.Generator
) -> List[List[int]]:
    """Time every callable reps times, shuffling their order within each repetition."""
    for fn in fns:
        for _ in range(warmup):
            fn()
    samples: List[List[int]] = [[] for _ in fns]
    for _ in range(reps):
        for index in rng.permutation(len(fns)):
            fn = fns[index]
            start = time.perf_counter_ns()
            fn()
            samples[index].append(time.perf_counter_ns() - start)
    return samples


def order_statistics(samples: Sequence[int]) -> Dict[str, int]:
    """Median, p10, p90, min and max as exact order statistics.

    Quantiles use the nearest-rank rule; for an even count the median is the
    lower of the two middle samples.
    """
    ordered = np.sort(np.asarray(samples, dtype=np.int64))
    n = ordered.size
    if n == 0:
        raise ValueError("order statistics need at least one sample")

    def rank(q: float) -> int:
        return int(ordered[min(n - 1, max(0, math.ceil(q * n) - 1))])

    return {
        "median_ns": int(ordered[(n - 1) // 2]),
        "p10_ns": rank(0.1),
        "p90_ns": rank(0.9),
        "min_ns": int(ordered[0]),
        "max_ns": int(ordered[-1]),
    }


def _record(
    candidate: BenchCandidate,
    opts: EvalOptions,
    params: Optional[DdmParams],
    samples: Sequence[int],
    terms_used: int,
    converged: bool,
    t: Optional[float] = None,
    t_hat: Optional[float] = None,
    dataset: Optional[str] = None,
) -> BenchRecord:
    style = candidate.method.style
    return BenchRecord(
        method=candidate.label,
        style=style.value if style is not None else "",
        delta=_delta_column(candidate, opts),
        t=t,
        a=params.a if params else None,
        v=params.v if params else None,
        w=params.w if params else None,
        eta=params.eta if params else None,
        t_hat=t_hat,
        reps=len(samples),
        terms_used=terms_used,
        converged=converged,
        dataset=dataset,
        **order_statistics(samples),
    )


def sweep_vectorized(
    grid: ParamGrid,
    methods: Candidates,
    opts: Optional[EvalOptions] = None,
    reps: int = config.BENCH_REPS_VECTOR,
    warmup: int = config.BENCH_WARMUP,
    seed: int = 0,
) -> List[BenchRecord]:
    """Time each method on the full response-time vector of every grid point."""
    opts = opts or EvalOptions()
    candidates = _as_candidates(methods)
    rng = np.random.default_rng(seed)
    observations = [Observation(Choice.LOWER, t) for t in grid.t]
    records = []
    logger.info(f"Vectorized sweep: {len(candidates)} methods, {reps} reps per grid point")
    for params in grid.points():
        option_sets = [_options_for(c, opts) for c in candidates]
        fns = [
            (lambda c=c, o=o: density_batch(c.method, params, observations, o))
            for c, o in zip(candidates, option_sets)
        ]
        samples = _interleaved_samples(fns, reps, warmup, rng)
        for candidate, option_set, fn, timing in zip(candidates, option_sets, fns, samples):
            results = fn()
            records.append(_record(
                candidate, option_set, params, timing,
                terms_used=sum(result.terms_used for result in results),
                converged=all(result.converged for result in results),
            ))
        logger.debug(f"Timed grid point a={params.a}, v={params.v}, w={params.w}, eta={params.eta}")
    return records


def sweep_individual(
    grid: ParamGrid,
    methods: Candidates,
    opts: Optional[EvalOptions] = None,
    reps: int = config.BENCH_REPS_INDIVIDUAL,
    warmup: int = config.BENCH_WARMUP,
    seed: int = 0,
) -> List[BenchRecord]:
    """Time each method on one response time at a time; records carry t_hat."""
    opts = opts or EvalOptions()
    candidates = _as_candidates(methods)
    rng = np.random.default_rng(seed)
    records = []
    logger.info(f"Individual sweep: {len(candidates)} methods, {reps} reps per grid point")
    for params in grid.points():
        option_sets = [_options_for(c, opts) for c in candidates]
        for t in grid.t:
            obs = Observation(Choice.LOWER, t)
            t_hat = (t - params.t0) / (params.a * params.a)
            fns = [
                (lambda c=c, o=o: density(c.method, params, obs, o))
                for c, o in zip(candidates, option_sets)
            ]
            samples = _interleaved_samples(fns, reps, warmup, rng)
            for candidate, option_set, fn, timing in zip(candidates, option_sets, fns, samples):
                result = fn()
                records.append(_record(
                    candidate, option_set, params, timing,
                    terms_used=result.terms_used,
                    converged=result.converged,
                    t=t,
                    t_hat=t_hat,
                ))
    return records


def delta_candidates(
    deltas: Sequence[int] = tuple(config.BENCH_DELTAS),
    styles: Sequence[SumStyle] = (SumStyle.S14, SumStyle.S17),
) -> List[BenchCandidate]:
    """Combined SWSE at every (delta, style) pair, styles outermost."""
    if any(delta < 0 for delta in deltas):
        raise ValueError(f"deltas must be non-negative, got {list(deltas)}")
    return [
        BenchCandidate(MethodKind.COMBINED_SWSE.value, MethodSpec(MethodKind.COMBINED_SWSE, style), delta)
        for style in styles
        for delta in deltas
    ]


def delta_experiment(
    grid: ParamGrid,
    deltas: Sequence[int] = tuple(config.BENCH_DELTAS),
    styles: Sequence[SumStyle] = (SumStyle.S14, SumStyle.S17),
    opts: Optional[EvalOptions] = None,
    reps: int = config.BENCH_REPS_DELTA,
    warmup: int = config.BENCH_WARMUP,
    seed: int = 0,
) -> List[BenchRecord]:
    """Sweep combined SWSE over every (delta, style) pair."""
    candidates = delta_candidates(deltas, styles)
    logger.info(f"Delta experiment over {len(candidates)} candidates")
    return sweep_vectorized(grid, candidates, opts, reps, warmup, seed)


def candidate_name(candidate: BenchCandidate) -> str:
    """Candidate label with its summation style, e.g. 'combined-swse-17'."""
    style = candidate.method.style
    return f"{candidate.label}-{style.value}" if style is not None else candidate.label


def _dataset_id(data: Dataset, index: int) -> str:
    participants = data.participants()
    return participants[0] if len(participants) == 1 else f"d{index + 1:02d}"


def bench_fit(
    datasets: Sequence[Dataset],
    methods: Candidates,
    fitcfg: Optional[FitConfig] = None,
    reps: int = config.BENCH_REPS_FIT,
) -> Tuple[List[BenchRecord], List[FitSummary]]:
    """Time full multi-start fits and flag failed or sub-optimal runs.

    A run is gap-flagged when its objective exceeds the best objective seen
    on the same dataset, across all methods and starts, by more than
    config.FIT_GAP_TOL. Records report the total objective evaluations of the
    fit in terms_used.
    """
    fitcfg = fitcfg or FitConfig()
    candidates = _as_candidates(methods)
    records: List[BenchRecord] = []
    summaries: List[FitSummary] = []
    for index, data in enumerate(datasets):
        dataset_id = _dataset_id(data, index)
        runs: List[Tuple[BenchCandidate, List[FitResult]]] = []
        for candidate in candidates:
            cfg = replace(fitcfg, method=candidate.method, opts=_options_for(candidate, fitcfg.opts))
            outcome: List[List[FitResult]] = []
            samples = time_call(lambda: outcome.append(fit(data, cfg)), reps, warmup=0)
            results = outcome[0]
            runs.append((candidate, results))
            records.append(_record(
                candidate, cfg.opts, None, samples,
                terms_used=sum(result.n_obj_evals for result in results),
                converged=all(result.convergence is Convergence.SUCCESS for result in results),
                dataset=dataset_id,
            ))
        finite = [r.objective for _, results in runs for r in results if math.isfinite(r.objective)]
        best = min(finite) if finite else math.inf
        for candidate, results in runs:
            for result in results:
                summaries.append(FitSummary(
                    dataset=dataset_id,
                    method=candidate_name(candidate),
                    delta=_delta_column(candidate, fitcfg.opts),
                    start_index=result.start_index,
                    objective=result.objective,
                    convergence=result.convergence,
                    n_obj_evals=result.n_obj_evals,
                    gap_flag=result.objective - best > config.FIT_GAP_TOL,
                ))
        logger.info(f"Benchmarked fits on {dataset_id}")
    return records, summaries


def delta_fit_experiment(
    datasets: Sequence[Dataset],
    deltas: Sequence[int] = tuple(config.BENCH_DELTAS),
    styles: Sequence[SumStyle] = (SumStyle.S14, SumStyle.S17),
    fitcfg: Optional[FitConfig] = None,
    reps: int = config.BENCH_REPS_FIT,
) -> Tuple[List[BenchRecord], List[FitSummary]]:
    """Time full fits with combined SWSE at every (delta, style) pair."""
    candidates = delta_candidates(deltas, styles)
    logger.info(f"Delta fitting experiment over {len(candidates)} candidates and {len(datasets)} datasets")
    return bench_fit(datasets, candidates, fitcfg, reps)


def record_key(record: BenchRecord) -> str:
    """Label identifying a method, style and delta in summaries."""
    key = record.method
    if record.style:
        key += f"-{record.style}"
    if record.delta is not None:
        key += f"/delta={record.delta}"
    return key


def summarize_records(records: Sequence[BenchRecord]) -> Dict[str, Dict[str, float]]:
    """Per-method aggregates for the JSON summary."""
    groups: Dict[str, List[BenchRecord]] = {}
    for record in records:
        groups.setdefault(record_key(record), []).append(record)
    summary = {}
    for key, group in groups.items():
        medians = np.array([r.median_ns for r in group], dtype=np.float64)
        tails = np.array([r.p90_ns / r.median_ns if r.median_ns else math.inf for r in group])
        summary[key] = {
            "records": len(group),
            "median_of_medians_ns": float(np.median(medians)),
            "mean_of_medians_ns": float(medians.mean()),
            "max_p90_ns": int(max(r.p90_ns for r in group)),
            "max_tail_ratio": float(tails.max()),
            "non_converged": sum(1 for r in group if not r.converged),
        }
    return summary


def binned_medians(
    records: Sequence[BenchRecord], edges: Sequence[float]
) -> List[Tuple[float, float, float]]:
    """Median of record medians inside each [edges[i], edges[i+1]) bin of t_hat; empty bins are skipped."""
    bins = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        inside = [r.median_ns for r in records if r.t_hat is not None and lo <= r.t_hat < hi]
        if inside:
            bins.append((lo, hi, float(np.median(inside))))
    return bins
