"""Command handlers for the fpt command-line interface.

Each module exposes one run_<name>_command(cfg) returning a process exit code.
"""

import argparse
from dataclasses import dataclass, fields
from typing import Optional

import config
from src.bench import table1_grid, table2_grid
from src.core import start_point_to_w
from src.data_manager import DataManager
from src.errors import DomainError, InputError
from src.models import DdmParams, EvalOptions, MethodSpec, ParamGrid, Scale, parse_method

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3


@dataclass
class CliConfig:
    """Parsed command line of one subcommand."""
    subcommand: str
    method: Optional[str] = None
    eps: Optional[float] = None
    delta: Optional[int] = None
    max_terms: Optional[int] = None
    log: bool = False
    v: Optional[float] = None
    eta: Optional[float] = None
    a: Optional[float] = None
    w: Optional[float] = None
    t0: Optional[float] = None
    sigma2: Optional[float] = None
    z: Optional[float] = None
    input: Optional[str] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    reps: Optional[int] = None
    grid: Optional[str] = None
    grid_file: Optional[str] = None
    # eval
    rt: Optional[float] = None
    choice: Optional[str] = None
    # simulate
    v_c1: Optional[float] = None
    v_c2: Optional[float] = None
    n_per_class: Optional[int] = None
    participants: Optional[int] = None
    dt: Optional[float] = None
    # bench
    experiment: Optional[str] = None
    summary: Optional[str] = None
    # fit
    starts: Optional[int] = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "CliConfig":
        """Build a CliConfig from argparse output, ignoring flags a subcommand lacks."""
        return cls(**{f.name: getattr(args, f.name) for f in fields(cls) if hasattr(args, f.name)})


def method_spec(cfg: CliConfig) -> MethodSpec:
    """The selected method, config.DEFAULT_METHOD when --method is absent."""
    return parse_method(cfg.method or config.DEFAULT_METHOD)


def eval_options(cfg: CliConfig, scale: Scale = Scale.LINEAR) -> EvalOptions:
    """EvalOptions from --eps, --delta and --max-terms."""
    return EvalOptions(
        eps=config.DEFAULT_EPS if cfg.eps is None else cfg.eps,
        delta=config.DEFAULT_DELTA if cfg.delta is None else cfg.delta,
        max_terms=config.DEFAULT_MAX_TERMS if cfg.max_terms is None else cfg.max_terms,
        scale=scale,
    )


def relative_start(cfg: CliConfig) -> float:
    """w from --w, or from --z and --a."""
    if cfg.w is not None and cfg.z is not None:
        raise InputError("Give either --w or --z, not both", field="w")
    if cfg.w is not None:
        return cfg.w
    if cfg.z is not None:
        if cfg.a is None:
            raise DomainError("a", "is required to convert --z")
        return start_point_to_w(cfg.z, cfg.a)
    raise DomainError("w", "is required (give --w or --z)")


def model_params(cfg: CliConfig) -> DdmParams:
    """DdmParams from --v, --a, --w/--z, --t0, --eta and --sigma2."""
    for name in ("v", "a"):
        if getattr(cfg, name) is None:
            raise DomainError(name, f"is required (give --{name})")
    return DdmParams(
        v=cfg.v,
        a=cfg.a,
        w=relative_start(cfg),
        t0=cfg.t0 or 0.0,
        eta=cfg.eta or 0.0,
        sigma2=1.0 if cfg.sigma2 is None else cfg.sigma2,
    )


def resolve_grid(cfg: CliConfig, data_manager: DataManager, default: str = "table2") -> ParamGrid:
    """Grid named by --grid, reading --grid-file for 'file'."""
    name = cfg.grid or default
    if name == "table1":
        return table1_grid()
    if name == "table2":
        return table2_grid()
    if not cfg.grid_file:
        raise InputError("--grid file needs --grid-file", field="grid_file")
    return data_manager.load_grid(cfg.grid_file)
