"""
Subcommand handlers of the randinf command line
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Iterable

from ..core.config import load_json_config, settings
from ..core.constants import EXIT_OK, EXIT_SIGNATURE_FAILED, REJECTIONS_FILE, STREAM_RANDOMIZATION
from ..core.exceptions import ParameterError
from ..engine.design import count_crd, stream
from ..engine.estimators import binary_report, variance_report
from ..engine.intervals import fiducial_interval, neyman_ci
from ..engine.regression import ols_fit, score_test, wald_hw_test
from ..engine.testing import frt_exact, frt_monte_carlo, neyman_test
from ..harness.outputs import scenario_directory, write_analysis_outputs, write_gap_outputs, write_scenario_outputs
from ..harness.scenarios import (
    check_paradox_signature,
    example_one,
    example_two,
    run_scenario,
    verify_gap_sweep,
    verify_gap_theorem,
)
from ..models.scenario import ScenarioConfig
from ..utils.file_utils import read_observed_data, write_rows_csv
from ..utils.helpers import measure_time

logger = logging.getLogger(__name__)

# Seed used by analyze and fiducial when Monte Carlo is needed and no seed is given
DEFAULT_ANALYSIS_SEED = 0

# gap-check population when neither flags nor a config file give one
GAP_CHECK_DEFAULTS = {
    "name": "gap-check",
    "design": "crd",
    "n": 1000,
    "n1": 700,
    "reps": 2000,
    "mu1": 0.1,
    "var1": 0.25,
    "mu0": 0.0,
    "var0": 0.0625,
}


def _emit(paths: Iterable[str], to_stdout: bool) -> None:
    """Echo written files to stdout when machine output was requested"""
    if not to_stdout:
        return
    for path in paths:
        sys.stdout.write(Path(path).read_text())


def _seed(args: argparse.Namespace) -> int:
    return DEFAULT_ANALYSIS_SEED if args.seed is None else args.seed


@measure_time
def analyze(args: argparse.Namespace) -> int:
    """
    Analyze one observed dataset

    Writes the variance report, the Neymanian, randomization, Huber-White
    and score tests, and the Neyman and fiducial intervals.
    """
    d = read_observed_data(args.input)
    m = settings.DEFAULT_DRAWS if args.m is None else args.m
    alpha = settings.DEFAULT_ALPHA if args.alpha is None else args.alpha
    seed = _seed(args)
    logger.info(f"Analyzing {args.input}: n={d.n}, n1={d.n1}, n0={d.n0}")

    report = variance_report(d)
    binary = binary_report(d) if args.binary else None

    total = count_crd(d.n, d.n1)
    if total <= settings.ENUMERATION_CAP:
        frt = frt_exact(d, args.statistic, workers=args.workers or 1)
    else:
        logger.info(f"{total} assignments exceed the enumeration cap; using {m} Monte Carlo draws")
        frt = frt_monte_carlo(d, args.statistic, m, stream(seed, 0, STREAM_RANDOMIZATION))

    fit = ols_fit(d)
    tests = [neyman_test(d), frt, wald_hw_test(fit, d), score_test(d)]
    level = 1 - alpha
    intervals = [
        neyman_ci(d, level),
        fiducial_interval(d, level, m, stream(seed, 1, STREAM_RANDOMIZATION), exact=total <= m),
    ]

    paths = write_analysis_outputs(report, tests, intervals, args.output_dir, binary)
    _emit(paths.values(), args.stdout)
    return EXIT_OK


@measure_time
def fiducial(args: argparse.Namespace) -> int:
    """Invert the randomization test for a yobs,t dataset"""
    d = read_observed_data(args.input)
    m = settings.DEFAULT_DRAWS if args.m is None else args.m
    exact = args.exact or count_crd(d.n, d.n1) <= m
    result = fiducial_interval(d, args.level, m, stream(_seed(args), 1, STREAM_RANDOMIZATION), exact=exact)
    path = write_rows_csv(
        [{**result.to_row(), "empty": result.empty, "truncated": result.truncated, "connected": result.connected}],
        os.path.join(args.output_dir, "fiducial.csv"),
        ["method", "level", "lower", "upper", "empty", "truncated", "connected"],
    )
    _emit([path], args.stdout)
    return EXIT_OK


def _scenario_document(args: argparse.Namespace) -> Dict[str, Any]:
    """Merge a JSON scenario document with command-line flags; flags win"""
    document = load_json_config(args.config) if args.config else {}
    population = dict(document.get("population", {}))

    overrides = {
        "name": args.name,
        "design": args.design,
        "n": args.n,
        "n1": args.n1,
        "n_pairs": args.n_pairs,
        "k": args.k,
        "r": args.r,
        "reps": args.reps,
        "m": args.m,
        "alpha": args.alpha,
        "statistic": args.statistic,
        "master_seed": args.seed,
    }
    document.update({key: value for key, value in overrides.items() if value is not None})
    if args.add_one:
        document["add_one"] = True

    population_overrides = {
        "mu1": args.mu1,
        "var1": args.var1,
        "mu0": args.mu0,
        "var0": args.var0,
        "pair_var": args.pair_var,
        "noise_var": args.noise_var,
    }
    population.update({key: value for key, value in population_overrides.items() if value is not None})
    if args.population_csv:
        population.update({"source": "csv", "path": args.population_csv})
    if args.exact_moments:
        population["exact_moments"] = True
    if population:
        document["population"] = population
    return document


def _scenario_config(args: argparse.Namespace) -> ScenarioConfig:
    document = _scenario_document(args)
    if document.get("master_seed") is None:
        raise ParameterError("A master seed is required: pass --seed or set master_seed in the config file")
    return ScenarioConfig.model_validate(document)


@measure_time
def simulate(args: argparse.Namespace) -> int:
    """Run one scenario and write its rejection table, variances and summary"""
    cfg = _scenario_config(args)
    result = run_scenario(cfg, args.workers or settings.effective_workers)
    paths = write_scenario_outputs(result, scenario_directory(args.output_dir, cfg.name))
    _emit(paths.values(), args.stdout)
    return EXIT_OK


@measure_time
def replicate_tables(args: argparse.Namespace) -> int:
    """Run the built-in paradox examples and check their signatures"""
    if args.seed is None:
        raise ParameterError("replicate-tables needs --seed")
    factories = {1: example_one, 2: example_two}
    examples = [1, 2] if args.example == "all" else [int(args.example)]
    workers = args.workers or settings.effective_workers

    passed = True
    for example in examples:
        cfg = factories[example](args.seed, reps=1000 if args.reps is None else args.reps, m=settings.DEFAULT_DRAWS if args.m is None else args.m)
        if args.alpha is not None:
            cfg = cfg.model_copy(update={"alpha": args.alpha})
        result = run_scenario(cfg, workers)
        paths = write_scenario_outputs(result, scenario_directory(args.output_dir, cfg.name))
        _emit([paths[REJECTIONS_FILE]], args.stdout)

        ok, failures = check_paradox_signature(example, result)
        for failure in failures:
            logger.error(f"Example {example} signature check failed: {failure}")
        if ok:
            logger.info(f"Example {example} signature checks passed")
        passed = passed and ok
    return EXIT_OK if passed else EXIT_SIGNATURE_FAILED


@measure_time
def gap_check(args: argparse.Namespace) -> int:
    """Compare the empirical variance gap with its leading-order formula"""
    if args.seed is None:
        args.seed = DEFAULT_ANALYSIS_SEED
    if not args.config:
        for key, value in GAP_CHECK_DEFAULTS.items():
            if getattr(args, key) is None:
                setattr(args, key, value)
    if args.r is None and args.r_values:
        args.r = args.r_values[0]
    cfg = _scenario_config(args)
    workers = args.workers or settings.effective_workers
    if cfg.design == "factorial" and args.r_values:
        reports = verify_gap_sweep(cfg, args.r_values, workers)
    else:
        reports = [verify_gap_theorem(cfg, workers)]
    paths = write_gap_outputs(reports, args.output_dir)
    _emit(paths.values(), args.stdout)
    return EXIT_OK
