"""Data models for the application."""

import math
from dataclasses import dataclass, field, asdict, fields
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import config
from src.errors import DomainError, InputError


class Choice(str, Enum):
    """Boundary reached by a trial."""
    LOWER = "lower"
    UPPER = "upper"


class StimulusClass(str, Enum):
    """Stimulus class selecting the drift rate of a trial."""
    C1 = "c1"
    C2 = "c2"


class SumStyle(str, Enum):
    """Ordering of the small-time series."""
    S14 = "14"
    S17 = "17"


class Timescale(str, Enum):
    """Series form used to evaluate a density."""
    LARGE = "large"
    SMALL = "small"


class Drift(str, Enum):
    """Constant or normally distributed drift across trials."""
    CONST = "const"
    VAR = "var"


class Scale(str, Enum):
    """Output scale of a density."""
    LINEAR = "linear"
    LOG = "log"


class MethodKind(str, Enum):
    """Timescale and truncation rule of an approximation method."""
    LARGE = "large-nav"
    SMALL_NAV = "small-nav"
    SMALL_GON = "small-gon"
    SMALL_SWSE = "small-swse"
    COMBINED_NAV = "combined-nav"
    COMBINED_GON = "combined-gon"
    COMBINED_SWSE = "combined-swse"


class ChoiceKind(str, Enum):
    """Outcome of a timescale chooser."""
    LARGE_TIME = "large"
    SMALL_TIME_FIXED = "small-fixed"
    SMALL_TIME_ADAPTIVE = "small-adaptive"


class Convergence(str, Enum):
    """Optimizer outcome of one fit run."""
    SUCCESS = "success"
    FAILURE = "failure"


def _plain(value):
    """Convert enums inside nested containers to their values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


@dataclass(frozen=True)
class DdmParams:
    """Diffusion decision model parameters."""
    v: float
    a: float
    w: float
    t0: float = 0.0
    eta: float = 0.0
    sigma2: float = 1.0

    def to_dict(self):
        """Convert to dictionary."""
        return asdict(self)


@dataclass(frozen=True)
class Observation:
    """A single (choice, response time) observation."""
    choice: Choice
    rt: float

    def __post_init__(self):
        if not isinstance(self.choice, Choice):
            object.__setattr__(self, "choice", Choice(self.choice))
        if not math.isfinite(self.rt) or self.rt <= 0:
            raise DomainError("rt", f"must be finite and positive, got {self.rt!r}")

    def to_dict(self):
        """Convert to dictionary."""
        return _plain(asdict(self))


@dataclass(frozen=True)
class NormalizedInput:
    """Observation and parameters after sigma scaling, boundary flip and t0 shift."""
    t_shifted: float
    t_hat: float
    params: DdmParams
    degenerate: bool


@dataclass(frozen=True)
class MethodSpec:
    """One of the thirteen approximation methods."""
    kind: MethodKind
    style: Optional[SumStyle] = None

    def __post_init__(self):
        if self.kind is MethodKind.LARGE:
            if self.style is not None:
                raise InputError("The large-time method has no summation style", field="method")
        elif self.style is None:
            raise InputError(f"Method {self.kind.value} needs a summation style", field="method")

    @property
    def name(self) -> str:
        """CLI name of the method, e.g. 'combined-swse-17'."""
        if self.style is None:
            return self.kind.value
        return f"{self.kind.value}-{self.style.value}"

    @classmethod
    def parse(cls, name: str) -> "MethodSpec":
        """Parse a CLI method name."""
        if name == MethodKind.LARGE.value:
            return cls(MethodKind.LARGE)
        head, _, tail = name.rpartition("-")
        try:
            kind = MethodKind(head)
            style = SumStyle(tail)
        except ValueError:
            raise InputError(
                f"Unknown method {name!r}; valid methods: {', '.join(METHOD_NAMES)}",
                field="method",
            ) from None
        if kind is MethodKind.LARGE:
            raise InputError(
                f"Unknown method {name!r}; valid methods: {', '.join(METHOD_NAMES)}",
                field="method",
            )
        return cls(kind, style)

    def to_dict(self):
        """Convert to dictionary."""
        return {"method": self.name}


ALL_METHODS: Tuple[MethodSpec, ...] = (MethodSpec(MethodKind.LARGE),) + tuple(
    MethodSpec(kind, style)
    for kind in MethodKind
    if kind is not MethodKind.LARGE
    for style in SumStyle
)
METHOD_NAMES: Tuple[str, ...] = tuple(spec.name for spec in ALL_METHODS)

# Free parameters of a two-class fit, in optimizer order
THETA_NAMES: Tuple[str, ...] = ("a", "v_c1", "v_c2", "w", "t0", "eta")


@dataclass(frozen=True)
class EvalOptions:
    """Options for a density evaluation."""
    eps: float = config.DEFAULT_EPS
    delta: int = config.DEFAULT_DELTA
    max_terms: int = config.DEFAULT_MAX_TERMS
    scale: Scale = Scale.LINEAR

    def __post_init__(self):
        if not math.isfinite(self.eps) or self.eps <= 0:
            raise DomainError("eps", f"must be finite and positive, got {self.eps!r}")
        if self.delta < 0:
            raise DomainError("delta", f"must be non-negative, got {self.delta!r}")
        if self.max_terms < 1:
            raise DomainError("max_terms", f"must be at least 1, got {self.max_terms!r}")


@dataclass(frozen=True)
class Tolerance:
    """User tolerance and its sum-level rescalings.

    eps_prime_large and eps_prime_small divide eps by the full large-time and
    small-time prefactors. eps_standardized further multiplies the small-time
    value by (2 pi t_hat^3)^(-1/2), the scale the fixed small-time bounds use.
    """
    eps: float
    eps_prime_large: float
    eps_prime_small: float
    eps_standardized: float


@dataclass(frozen=True)
class SwseResult:
    """Outcome of an adaptive small-time summation."""
    sum: float
    terms_used: int
    last_omitted_abs: float
    converged: bool


@dataclass(frozen=True)
class TimescaleChoice:
    """Which series to evaluate and, for fixed rules, how many terms."""
    kind: ChoiceKind
    k: Optional[int] = None

    @classmethod
    def large(cls, k: int) -> "TimescaleChoice":
        return cls(ChoiceKind.LARGE_TIME, k)

    @classmethod
    def small_fixed(cls, k: int) -> "TimescaleChoice":
        return cls(ChoiceKind.SMALL_TIME_FIXED, k)

    @classmethod
    def small_adaptive(cls) -> "TimescaleChoice":
        return cls(ChoiceKind.SMALL_TIME_ADAPTIVE)


@dataclass(frozen=True)
class DensityResult:
    """Density value with evaluation diagnostics."""
    value: float
    terms_used: int
    timescale_used: Optional[Timescale]
    converged: bool

    def to_dict(self):
        """Convert to dictionary."""
        return _plain(asdict(self))


@dataclass(frozen=True)
class OracleConfig:
    """Settings for the reference density."""
    n_terms: int = config.ORACLE_N_TERMS
    agreement_tol: float = config.ORACLE_AGREEMENT_TOL

    def __post_init__(self):
        if self.n_terms < 100:
            raise DomainError("n_terms", f"must be at least 100, got {self.n_terms!r}")


@dataclass(frozen=True)
class OracleEvaluation:
    """Both reference sums and their rounding bounds."""
    value: float
    large_value: float
    small_value: float
    rounding_bound_large: float
    rounding_bound_small: float


@dataclass(frozen=True)
class Trial:
    """One row of a response-time dataset."""
    participant: str
    stimulus_class: StimulusClass
    choice: Choice
    rt: float

    def to_dict(self):
        """Convert to dictionary."""
        return _plain(asdict(self))


@dataclass
class Dataset:
    """Response-time data for one or more participants."""
    rows: List[Trial] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def min_rt(self) -> float:
        """Return the smallest response time."""
        return min(row.rt for row in self.rows)

    def participants(self) -> List[str]:
        """Return participant ids in order of first appearance."""
        return list(dict.fromkeys(row.participant for row in self.rows))

    def for_participant(self, participant: str) -> "Dataset":
        """Return the rows belonging to one participant."""
        return Dataset([row for row in self.rows if row.participant == participant])

    def to_dict(self):
        """Convert to dictionary."""
        return {"rows": [row.to_dict() for row in self.rows]}


@dataclass
class FitConfig:
    """Settings for multi-start maximum-likelihood fitting."""
    method: MethodSpec = field(default_factory=lambda: MethodSpec.parse(config.DEFAULT_METHOD))
    opts: EvalOptions = field(default_factory=EvalOptions)
    starts: Optional[List[Tuple[float, ...]]] = None  # Absolute vectors; None means config.DEFAULT_STARTS
    bounds: Optional[List[Tuple[float, float]]] = None  # None means derived from config and the data
    max_iter: int = config.FIT_MAX_ITER
    max_obj_evals: int = config.FIT_MAX_EVALS
    max_starts: Optional[int] = None  # Use only the first max_starts starts


@dataclass
class FitResult:
    """Outcome of one optimization run."""
    estimates: Dict[str, float]
    objective: float
    convergence: Convergence
    n_obj_evals: int
    start_index: int
    participant: str = ""
    message: str = ""

    def to_dict(self):
        """Convert to dictionary."""
        return _plain(asdict(self))


@dataclass(frozen=True)
class ParamGrid:
    """Cartesian benchmark grid with a fixed t0."""
    t: Tuple[float, ...]
    a: Tuple[float, ...]
    v: Tuple[float, ...]
    w: Tuple[float, ...]
    eta: Tuple[float, ...]
    t0: float

    @classmethod
    def from_dict(cls, data: Dict) -> "ParamGrid":
        """Build a grid from a dict of value lists."""
        try:
            grid = cls(
                t=tuple(float(x) for x in data["t"]),
                a=tuple(float(x) for x in data["a"]),
                v=tuple(float(x) for x in data["v"]),
                w=tuple(float(x) for x in data["w"]),
                eta=tuple(float(x) for x in data["eta"]),
                t0=float(data["t0"]),
            )
        except KeyError as e:
            raise InputError(f"Grid is missing key {e.args[0]!r}", field=e.args[0]) from None
        return grid

    def points(self) -> Iterator[DdmParams]:
        """Yield one parameter set per non-t grid point."""
        for a in self.a:
            for v in self.v:
                for w in self.w:
                    for eta in self.eta:
                        yield DdmParams(v=v, a=a, w=w, t0=self.t0, eta=eta)

    def to_dict(self):
        """Convert to dictionary."""
        return {f.name: (list(getattr(self, f.name)) if f.name != "t0" else self.t0) for f in fields(self)}


@dataclass(frozen=True)
class BenchCandidate:
    """A labelled method entered into a benchmark."""
    label: str
    method: MethodSpec
    delta: Optional[int] = None

    @classmethod
    def of(cls, method: MethodSpec, delta: Optional[int] = None) -> "BenchCandidate":
        return cls(method.kind.value, method, delta)


BENCH_COLUMNS = [
    "method", "style", "delta", "t", "a", "v", "w", "eta", "t_hat",
    "median_ns", "p10_ns", "p90_ns", "min_ns", "max_ns", "reps", "terms_used", "converged",
]


@dataclass
class BenchRecord:
    """Timing summary for one method at one grid point or dataset."""
    method: str
    style: str
    delta: Optional[int]
    t: Optional[float]
    a: Optional[float]
    v: Optional[float]
    w: Optional[float]
    eta: Optional[float]
    t_hat: Optional[float]
    median_ns: int
    p10_ns: int
    p90_ns: int
    min_ns: int
    max_ns: int
    reps: int
    terms_used: int
    converged: bool
    dataset: Optional[str] = None

    def to_dict(self):
        """Convert to dictionary."""
        return asdict(self)


@dataclass
class FitSummary:
    """Convergence bookkeeping for one fit run inside a benchmark."""
    dataset: str
    method: str
    delta: Optional[int]
    start_index: int
    objective: float
    convergence: Convergence
    n_obj_evals: int
    gap_flag: bool

    def to_dict(self):
        """Convert to dictionary."""
        return _plain(asdict(self))


def parse_method(name: str) -> MethodSpec:
    """Parse one of the METHOD_NAMES into a MethodSpec."""
    return MethodSpec.parse(name)


def method_name(spec: MethodSpec) -> str:
    """CLI name of a MethodSpec."""
    return spec.name
