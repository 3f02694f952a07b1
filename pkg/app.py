"""Command-line entry point for the first-passage-time density toolkit."""

import argparse
import logging
import sys
from typing import List, Optional

import config
from src.commands import EXIT_INPUT, CliConfig
from src.commands.bench import EXPERIMENTS, run_bench_command
from src.commands.evaluate import run_eval_command
from src.commands.fit import run_fit_command
from src.commands.simulate import run_simulate_command
from src.commands.validate import run_validate_command
from src.errors import DomainError, InputError
from src.models import METHOD_NAMES

# Configure logging
logging.basicConfig(
    level=config.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

COMMANDS = {
    "eval": run_eval_command,
    "fit": run_fit_command,
    "simulate": run_simulate_command,
    "bench": run_bench_command,
    "validate": run_validate_command,
}


def _common_flags() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", choices=METHOD_NAMES, help=f"approximation method (default {config.DEFAULT_METHOD})")
    common.add_argument("--eps", type=float, help="absolute error tolerance on each density")
    common.add_argument("--delta", type=int, help="large-time switch of combined SWSE")
    common.add_argument("--max-terms", type=int, help="cap on series terms per evaluation")
    common.add_argument("--log", action="store_true", help="report log densities only")
    common.add_argument("--v", type=float, help="drift rate")
    common.add_argument("--eta", type=float, help="drift standard deviation across trials")
    common.add_argument("--a", type=float, help="boundary separation")
    common.add_argument("--w", type=float, help="relative start point in (0, 1)")
    common.add_argument("--z", type=float, help="absolute start point, converted to w = z / a")
    common.add_argument("--t0", type=float, help="non-decision time in seconds")
    common.add_argument("--sigma2", type=float, help="diffusion variance (default 1)")
    common.add_argument("--input", help="input CSV file")
    common.add_argument("--output", help="output file, '-' or absent for stdout")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--reps", type=int, help="timing repetitions")
    common.add_argument("--grid", choices=("table1", "table2", "file"), help="parameter grid")
    common.add_argument("--grid-file", help="JSON grid used with --grid file")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="fpt", description="Diffusion decision model first-passage-time densities")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    evaluate = subparsers.add_parser("eval", parents=[common], help="evaluate densities")
    evaluate.add_argument("--rt", type=float, help="response time of a single observation")
    evaluate.add_argument("--choice", help="boundary of the single observation: lower or upper")

    fit = subparsers.add_parser("fit", parents=[common], help="maximum-likelihood fit of a dataset")
    fit.add_argument("--starts", type=int, help="use only the first N default starts")

    simulate = subparsers.add_parser("simulate", parents=[common], help="simulate two-class data")
    simulate.add_argument("--v-c1", type=float, help="drift rate of stimulus class c1")
    simulate.add_argument("--v-c2", type=float, help="drift rate of stimulus class c2")
    simulate.add_argument("--n-per-class", type=int, help="trials per stimulus class")
    simulate.add_argument("--participants", type=int, help="number of simulated participants")
    simulate.add_argument("--dt", type=float, help="Euler step in seconds")

    bench = subparsers.add_parser("bench", parents=[common], help="timing experiments")
    bench.add_argument("--experiment", choices=EXPERIMENTS, default="vectorized")
    bench.add_argument("--summary", help="path of the JSON summary")
    bench.add_argument("--starts", type=int, help="fit experiment: use only the first N starts")
    bench.add_argument("--participants", type=int, help="fit experiment: simulated datasets when no --input")
    bench.add_argument("--n-per-class", type=int, help="fit experiment: trials per class of simulated datasets")

    subparsers.add_parser("validate", parents=[common], help="check methods against the reference density")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    args = build_parser().parse_args(argv)
    cfg = CliConfig.from_namespace(args)
    logger.info(f"Running command: {cfg.subcommand}")
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (DomainError, InputError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
