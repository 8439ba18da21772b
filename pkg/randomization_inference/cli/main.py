"""
Command-line entry point: randinf
"""
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from ..core.config import settings
from ..core.constants import (
    EXIT_DEGENERATE,
    EXIT_ERROR,
    EXIT_INPUT_FORMAT,
    STATISTIC_DIFF_IN_MEANS,
    STATISTICS,
)
from ..core.exceptions import (
    DegenerateDataError,
    InputFormatError,
    InsufficientDataError,
    RandomizationInferenceError,
)
from . import commands

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "analyze": commands.analyze,
    "simulate": commands.simulate,
    "replicate-tables": commands.replicate_tables,
    "gap-check": commands.gap_check,
    "fiducial": commands.fiducial,
}


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--output-dir", default=settings.OUTPUT_DIR, help="Directory for CSV/JSON outputs")
    parent.add_argument("--stdout", action="store_true", help="Also print machine-readable outputs to stdout")
    parent.add_argument("--seed", type=int, default=None, help="Master seed")
    parent.add_argument("--workers", type=int, default=None, help="Worker processes (default: all cores)")
    parent.add_argument("--m", type=int, default=None, help="Randomization draws per test")
    parent.add_argument("--alpha", type=float, default=None, help="Significance level")
    return parent


def _scenario_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", default=None, help="JSON scenario document; flags win on conflict")
    parent.add_argument("--name", default=None)
    parent.add_argument("--design", choices=["crd", "pairs", "factorial"], default=None)
    parent.add_argument("--n", type=int, default=None, help="Units (crd)")
    parent.add_argument("--n1", type=int, default=None, help="Treated units (crd)")
    parent.add_argument("--n-pairs", dest="n_pairs", type=int, default=None)
    parent.add_argument("--k", type=int, default=None, help="Factors (factorial)")
    parent.add_argument("--r", type=int, default=None, help="Replications per cell (factorial)")
    parent.add_argument("--reps", type=int, default=None, help="Simulated assignments")
    parent.add_argument("--statistic", choices=list(STATISTICS), default=None)
    parent.add_argument("--add-one", dest="add_one", action="store_true", help="Use (1 + count)/(1 + M) p-values")
    parent.add_argument("--mu1", type=float, default=None)
    parent.add_argument("--var1", type=float, default=None)
    parent.add_argument("--mu0", type=float, default=None)
    parent.add_argument("--var0", type=float, default=None)
    parent.add_argument("--pair-var", dest="pair_var", type=float, default=None)
    parent.add_argument("--noise-var", dest="noise_var", type=float, default=None)
    parent.add_argument("--exact-moments", dest="exact_moments", action="store_true")
    parent.add_argument("--population-csv", dest="population_csv", default=None, help="Potential-outcome table")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subparser per command

    Returns:
        argparse.ArgumentParser: The parser
    """
    parser = argparse.ArgumentParser(prog="randinf", description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    scenario = _scenario_options()

    analyze = subparsers.add_parser("analyze", parents=[common], help="Analyze a yobs,t CSV")
    analyze.add_argument("input", help="CSV with header yobs,t")
    analyze.add_argument("--statistic", choices=list(STATISTICS), default=STATISTIC_DIFF_IN_MEANS)
    analyze.add_argument("--binary", action="store_true", help="Add pooled and unpooled proportion variances")

    subparsers.add_parser("simulate", parents=[common, scenario], help="Run one simulation scenario")

    replicate = subparsers.add_parser("replicate-tables", parents=[common], help="Run the built-in paradox examples")
    replicate.add_argument("--example", choices=["1", "2", "all"], default="all")
    replicate.add_argument("--reps", type=int, default=None)

    gap = subparsers.add_parser("gap-check", parents=[common, scenario], help="Check the variance-gap formulas")
    gap.add_argument("--r-values", dest="r_values", type=int, nargs="+", default=None,
                     help="Replications per cell to sweep (factorial)")

    fid = subparsers.add_parser("fiducial", parents=[common], help="Fiducial interval by test inversion")
    fid.add_argument("input", help="CSV with header yobs,t")
    fid.add_argument("--level", type=float, default=0.95)
    fid.add_argument("--exact", action="store_true", help="Invert exact randomization tests")
    return parser


def _unwrap(error: Exception) -> Exception:
    """Recover an engine error raised inside a pydantic validator"""
    if isinstance(error, ValidationError):
        for detail in error.errors():
            inner = detail.get("ctx", {}).get("error")
            if isinstance(inner, Exception):
                return inner
    return error


def exit_code_for(error: Exception) -> int:
    """
    Map an exception to a process exit code

    Args:
        error: Raised exception

    Returns:
        int: 2 for input format, 3 for degenerate data, 4 otherwise
    """
    error = _unwrap(error)
    if isinstance(error, InputFormatError):
        return EXIT_INPUT_FORMAT
    if isinstance(error, (DegenerateDataError, InsufficientDataError)):
        return EXIT_DEGENERATE
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, configure logging and run one command

    Args:
        argv: Arguments without the program name, defaults to sys.argv

    Returns:
        int: Exit code
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        return COMMANDS[args.command](args)
    except (RandomizationInferenceError, ValidationError) as e:
        inner = _unwrap(e)
        detail = f" ({inner.cause})" if isinstance(inner, DegenerateDataError) else ""
        if isinstance(inner, InsufficientDataError):
            detail = f" (arm: {inner.arm})"
        logger.error(f"{args.command} failed: {inner}{detail}")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
