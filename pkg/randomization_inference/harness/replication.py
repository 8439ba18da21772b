"""
Per-replication work and the worker pool that runs it

Replication i draws its assignment from stream (master_seed, i, ASSIGNMENT)
and its randomization-test draws from (master_seed, i, RANDOMIZATION), so
results do not depend on how replications are spread over workers.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from ..core.constants import STATISTIC_DIFF_IN_MEANS, STATISTIC_VARIANCE_RATIO, STREAM_ASSIGNMENT, STREAM_RANDOMIZATION
from ..core.exceptions import RandomizationInferenceError
from ..engine.design import draw_crd, draw_factorial, draw_pairs, stream
from ..engine.estimators import estimate_factorial, pair_report, variance_report
from ..engine.population import factorial_contrast, observe, observe_factorial
from ..engine.testing import factorial_tests, frt_monte_carlo, neyman_test, pair_tests
from ..models.population import FactorialTable, MatchedPairTable, PotentialTable
from ..models.scenario import ScenarioConfig
from ..utils.helpers import format_error_response

logger = logging.getLogger(__name__)

Population = Union[PotentialTable, MatchedPairTable, FactorialTable]

# Replication kinds
KIND_TESTS = "tests"
KIND_VARIANCES = "variances"
KIND_HETEROGENEITY = "heterogeneity"


class ReplicationOutcome(BaseModel):
    """What one re-randomization produced"""
    model_config = ConfigDict(frozen=True)

    rep_index: int
    v_neyman: Optional[float] = None
    v_fisher: Optional[float] = None
    neyman_reject: Optional[bool] = None
    fisher_reject: Optional[bool] = None
    var_ratio_reject: Optional[bool] = None
    error: Optional[Dict[str, Any]] = None

    @property
    def degenerate(self) -> bool:
        return self.error is not None


def _degenerate(rep_index: int, error: Exception, context: str) -> ReplicationOutcome:
    logger.warning(f"Replication {rep_index} is degenerate: {error}")
    return ReplicationOutcome(rep_index=rep_index, error=format_error_response(error, context))


def _flagged(rep_index: int, method: str) -> ReplicationOutcome:
    error = RandomizationInferenceError(f"{method} test was degenerate")
    return _degenerate(rep_index, error, f"replication {rep_index}")


def replicate_crd(pop: PotentialTable, cfg: ScenarioConfig, rep_index: int, kind: str = KIND_TESTS) -> ReplicationOutcome:
    """
    One completely randomized replication

    Args:
        pop: Frozen potential table
        cfg: Scenario protocol
        rep_index: Replication index
        kind: KIND_TESTS runs the Neymanian test and the configured
            randomization test, KIND_VARIANCES only records the variances,
            KIND_HETEROGENEITY adds a variance-ratio randomization test

    Returns:
        ReplicationOutcome: Decisions and variances, or the error that made it degenerate
    """
    try:
        a = draw_crd(pop.n, cfg.n1, stream(cfg.master_seed, rep_index, STREAM_ASSIGNMENT))
        d = observe(pop, a)
        report = variance_report(d)
        if kind == KIND_VARIANCES:
            return ReplicationOutcome(rep_index=rep_index, v_neyman=report.v_neyman, v_fisher=report.v_fisher)

        neyman = neyman_test(d)
        statistic = STATISTIC_DIFF_IN_MEANS if kind == KIND_HETEROGENEITY else cfg.statistic
        fisher = frt_monte_carlo(
            d, statistic, cfg.m, stream(cfg.master_seed, rep_index, STREAM_RANDOMIZATION), cfg.add_one
        )
        var_ratio_reject = None
        if kind == KIND_HETEROGENEITY:
            ratio = frt_monte_carlo(
                d, STATISTIC_VARIANCE_RATIO, cfg.m,
                stream(cfg.master_seed, rep_index, STREAM_RANDOMIZATION, 1), cfg.add_one,
            )
            if ratio.degenerate:
                return _flagged(rep_index, ratio.method)
            var_ratio_reject = ratio.rejects(cfg.alpha)
    except RandomizationInferenceError as e:
        return _degenerate(rep_index, e, f"replication {rep_index}")

    for result in (neyman, fisher):
        if result.degenerate:
            return _flagged(rep_index, result.method)
    logger.debug(f"Replication {rep_index}: p_neyman={neyman.p_value:.4g}, p_fisher={fisher.p_value:.4g}")
    return ReplicationOutcome(
        rep_index=rep_index,
        v_neyman=report.v_neyman,
        v_fisher=report.v_fisher,
        neyman_reject=neyman.rejects(cfg.alpha),
        fisher_reject=fisher.rejects(cfg.alpha),
        var_ratio_reject=var_ratio_reject,
    )


def replicate_pairs(pt: MatchedPairTable, cfg: ScenarioConfig, rep_index: int, kind: str = KIND_TESTS) -> ReplicationOutcome:
    """One matched-pair replication; the sign-flip test is exact for small designs"""
    try:
        report = pair_report(pt, draw_pairs(pt.n_pairs, stream(cfg.master_seed, rep_index, STREAM_ASSIGNMENT)))
        if kind == KIND_VARIANCES:
            return ReplicationOutcome(rep_index=rep_index, v_neyman=report.v_neyman, v_fisher=report.v_fisher)
        neyman, fisher = pair_tests(
            report, mode="auto", m=cfg.m,
            rng=stream(cfg.master_seed, rep_index, STREAM_RANDOMIZATION), add_one=cfg.add_one,
        )
    except RandomizationInferenceError as e:
        return _degenerate(rep_index, e, f"replication {rep_index}")

    for result in (neyman, fisher):
        if result.degenerate:
            return _flagged(rep_index, result.method)
    return ReplicationOutcome(
        rep_index=rep_index,
        v_neyman=report.v_neyman,
        v_fisher=report.v_fisher,
        neyman_reject=neyman.rejects(cfg.alpha),
        fisher_reject=fisher.rejects(cfg.alpha),
    )


def replicate_factorial(ft: FactorialTable, cfg: ScenarioConfig, rep_index: int, kind: str = KIND_TESTS) -> ReplicationOutcome:
    """One balanced factorial replication for the configured contrast"""
    try:
        a = draw_factorial(ft.k, ft.r, stream(cfg.master_seed, rep_index, STREAM_ASSIGNMENT))
        observed = observe_factorial(ft, a)
        report = estimate_factorial(observed, ft.k, ft.r, factorial_contrast(ft.k, cfg.contrast_factors))
        if kind == KIND_VARIANCES:
            return ReplicationOutcome(rep_index=rep_index, v_neyman=report.v1_neyman, v_fisher=report.v1_fisher)
        neyman, fisher = factorial_tests(
            report, observed, cfg.m, stream(cfg.master_seed, rep_index, STREAM_RANDOMIZATION), cfg.add_one
        )
    except RandomizationInferenceError as e:
        return _degenerate(rep_index, e, f"replication {rep_index}")

    for result in (neyman, fisher):
        if result.degenerate:
            return _flagged(rep_index, result.method)
    return ReplicationOutcome(
        rep_index=rep_index,
        v_neyman=report.v1_neyman,
        v_fisher=report.v1_fisher,
        neyman_reject=neyman.rejects(cfg.alpha),
        fisher_reject=fisher.rejects(cfg.alpha),
    )


_REPLICATORS = {
    "crd": replicate_crd,
    "pairs": replicate_pairs,
    "factorial": replicate_factorial,
}


def _run_chunk(args) -> List[ReplicationOutcome]:
    population, cfg, indices, kind = args
    replicate = _REPLICATORS[cfg.design]
    return [replicate(population, cfg, i, kind) for i in indices]


def run_replications(
    population: Population,
    cfg: ScenarioConfig,
    kind: str = KIND_TESTS,
    workers: Optional[int] = None,
    indices: Optional[Sequence[int]] = None,
) -> List[ReplicationOutcome]:
    """
    Run replications, in parallel when more than one worker is allowed

    Args:
        population: Frozen table matching cfg.design
        cfg: Scenario protocol
        kind: Replication kind
        workers: Processes; 1 runs inline
        indices: Replication indices, defaults to range(cfg.reps)

    Returns:
        List[ReplicationOutcome]: Outcomes ordered by rep_index
    """
    indices = list(range(cfg.reps)) if indices is None else list(indices)
    workers = max(1, min(workers or 1, len(indices) or 1))

    if workers == 1:
        outcomes = _run_chunk((population, cfg, indices, kind))
    else:
        chunk_size = math.ceil(len(indices) / (workers * 4))
        tasks = [
            (population, cfg, indices[start:start + chunk_size], kind)
            for start in range(0, len(indices), chunk_size)
        ]
        logger.info(f"Running {len(indices)} replications on {workers} workers in {len(tasks)} chunks")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [outcome for chunk in pool.map(_run_chunk, tasks) for outcome in chunk]

    return sorted(outcomes, key=lambda outcome: outcome.rep_index)
