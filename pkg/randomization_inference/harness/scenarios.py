"""
Simulation scenarios: paradox tables, variance gaps, power sweeps and
heterogeneous-effect demonstrations
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ParameterError
from ..engine.estimators import theorem3_gap, theorem6_gap
from ..engine.population import (
    constant_effect_population,
    factorial_contrast,
    freeze_normal_factorial,
    freeze_normal_pairs,
    freeze_normal_population,
    summarize_factorial,
    summarize_pairs,
    summarize_population,
)
from ..models.scenario import (
    GapReport,
    HeterogeneityReport,
    PopulationSpec,
    RejectionTable,
    ScenarioConfig,
    ScenarioResult,
    ScenarioSummary,
    SweepPoint,
    SweepReport,
    VarianceScatterRow,
)
from ..utils.file_utils import read_factorial_table, read_pair_table, read_potential_table
from ..utils.helpers import binomial_standard_error, measure_time, relative_deviation
from .replication import KIND_HETEROGENEITY, KIND_TESTS, KIND_VARIANCES, Population, run_replications

logger = logging.getLogger(__name__)


def build_population(cfg: ScenarioConfig) -> Population:
    """
    Freeze the population a scenario re-randomizes

    Args:
        cfg: Scenario protocol

    Returns:
        Population: Potential, matched-pair or factorial table
    """
    spec = cfg.population
    if cfg.design == "crd":
        if spec.source == "csv":
            pop = read_potential_table(spec.path)
        else:
            pop = freeze_normal_population(
                cfg.n, spec.mu1, spec.var1, spec.mu0, spec.var0, cfg.master_seed, spec.exact_moments
            )
        if pop.n != cfg.n:
            raise ParameterError(f"Population has {pop.n} units but the scenario expects n={cfg.n}")
        return pop

    if cfg.design == "pairs":
        if spec.source == "csv":
            pt = read_pair_table(spec.path)
        else:
            pt = freeze_normal_pairs(
                cfg.n_pairs, spec.mu1, spec.var1, spec.mu0, spec.var0, spec.pair_var, cfg.master_seed
            )
        if pt.n_pairs != cfg.n_pairs:
            raise ParameterError(f"Population has {pt.n_pairs} pairs but the scenario expects {cfg.n_pairs}")
        return pt

    if spec.source == "csv":
        ft = read_factorial_table(spec.path)
    else:
        cells = 2 ** cfg.k
        means = spec.cell_means or [spec.mu1] * (cells // 2) + [spec.mu0] * (cells // 2)
        ft = freeze_normal_factorial(cfg.k, cfg.r, means, spec.noise_var, cfg.master_seed)
    if (ft.k, ft.r) != (cfg.k, cfg.r):
        raise ParameterError(f"Population has k={ft.k}, r={ft.r} but the scenario expects k={cfg.k}, r={cfg.r}")
    return ft


def population_estimands(cfg: ScenarioConfig, population: Population) -> Tuple[Dict[str, Any], float]:
    """
    Population summary for the digest and the leading-order variance gap

    Returns:
        Tuple[Dict[str, Any], float]: Summary mapping and theoretical gap
    """
    if cfg.design == "crd":
        summary = summarize_population(population)
        return summary.model_dump(), theorem3_gap(summary, cfg.n1, cfg.n0)
    if cfg.design == "pairs":
        summary = summarize_pairs(population)
        return summary.model_dump(exclude={"per_pair"}), summary.tau ** 2 / summary.n_pairs
    summary = summarize_factorial(population, factorial_contrast(cfg.k, cfg.contrast_factors))
    return summary.model_dump(mode="json"), theorem6_gap(summary.cell_means, cfg.k, cfg.r)


def _design_size(cfg: ScenarioConfig) -> int:
    if cfg.design == "crd":
        return cfg.n
    if cfg.design == "pairs":
        return cfg.n_pairs
    return cfg.r * 2 ** cfg.k


@measure_time
def run_scenario(cfg: ScenarioConfig, workers: Optional[int] = None) -> ScenarioResult:
    """
    Freeze one population and re-randomize it cfg.reps times

    Args:
        cfg: Scenario protocol
        workers: Processes, defaults to cfg.workers or 1

    Returns:
        ScenarioResult: Rejection cross-table, variance scatter and digest
    """
    logger.info(f"Starting scenario {cfg.name}: design={cfg.design}, reps={cfg.reps}, m={cfg.m}")
    population = build_population(cfg)
    estimands, theoretical_gap = population_estimands(cfg, population)
    outcomes = run_replications(population, cfg, KIND_TESTS, workers or cfg.workers)

    valid = [o for o in outcomes if not o.degenerate]
    table = RejectionTable.from_decisions(
        [(o.neyman_reject, o.fisher_reject) for o in valid],
        degenerate=len(outcomes) - len(valid),
    )
    scatter = [VarianceScatterRow(rep_index=o.rep_index, v_neyman=o.v_neyman, v_fisher=o.v_fisher) for o in valid]

    v_neyman = np.array([row.v_neyman for row in scatter])
    v_fisher = np.array([row.v_fisher for row in scatter])
    summary = ScenarioSummary(
        config=cfg.model_dump(mode="json"),
        population=estimands,
        neyman_power=table.neyman_rate,
        neyman_se=table.neyman_se,
        fisher_power=table.fisher_rate,
        fisher_se=table.fisher_se,
        mean_v_neyman=float(v_neyman.mean()) if scatter else math.nan,
        mean_v_fisher=float(v_fisher.mean()) if scatter else math.nan,
        empirical_gap=float((v_fisher - v_neyman).mean()) if scatter else math.nan,
        theoretical_gap=theoretical_gap,
        fisher_never_below_neyman=bool(np.all(v_fisher >= v_neyman)),
        degenerate=[o.error for o in outcomes if o.degenerate],
    )
    logger.info(
        f"Finished scenario {cfg.name}: neyman={table.neyman_rate:.3f}, fisher={table.fisher_rate:.3f}, "
        f"degenerate={table.degenerate}"
    )
    return ScenarioResult(table=table, scatter=scatter, summary=summary)


def _population_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


@measure_time
def run_population_study(cfg: ScenarioConfig, n_populations: int, workers: Optional[int] = None) -> RejectionTable:
    """
    Repeat a scenario over independently frozen populations

    An extension of the single-population protocol for robustness studies:
    population j uses a seed derived from (master_seed, j).

    Args:
        cfg: Scenario protocol
        n_populations: Number of populations
        workers: Processes per scenario

    Returns:
        RejectionTable: Sum of the per-population tables
    """
    if n_populations < 1:
        raise ParameterError("n_populations must be at least 1")
    total = RejectionTable()
    for j in range(n_populations):
        variant = cfg.model_copy(update={
            "master_seed": _population_seed(cfg.master_seed, j),
            "name": f"{cfg.name}-population-{j}",
        })
        total = total + run_scenario(variant, workers).table
    return total


@measure_time
def verify_gap_theorem(cfg: ScenarioConfig, workers: Optional[int] = None) -> GapReport:
    """
    Empirical mean of v_fisher - v_neyman against its leading-order formula

    Args:
        cfg: crd or factorial scenario; only variances are computed
        workers: Processes

    Returns:
        GapReport: Both gaps, their relative deviation and N times the empirical gap
    """
    if cfg.design not in ("crd", "factorial"):
        raise ParameterError(f"Gap verification supports crd and factorial designs, not {cfg.design}")
    population = build_population(cfg)
    _, theoretical = population_estimands(cfg, population)
    outcomes = [o for o in run_replications(population, cfg, KIND_VARIANCES, workers or cfg.workers) if not o.degenerate]
    gaps = np.array([o.v_fisher - o.v_neyman for o in outcomes])
    if len(gaps) == 0:
        raise ParameterError("Every replication was degenerate; no gap to report")

    empirical = float(gaps.mean())
    report = GapReport(
        design=cfg.design,
        size=cfg.n if cfg.design == "crd" else cfg.r,
        reps=len(gaps),
        empirical_gap=empirical,
        empirical_se=float(gaps.std(ddof=1) / np.sqrt(len(gaps))) if len(gaps) > 1 else math.nan,
        theoretical_gap=theoretical,
        relative_deviation=relative_deviation(empirical, theoretical),
        scaled_gap=empirical * _design_size(cfg),
    )
    logger.info(f"Gap check {cfg.name}: empirical={empirical:.6g}, theoretical={theoretical:.6g}")
    return report


def verify_gap_sweep(cfg: ScenarioConfig, r_values: Sequence[int], workers: Optional[int] = None) -> List[GapReport]:
    """
    Factorial gap check repeated over replication counts r

    Args:
        cfg: Factorial scenario
        r_values: Replications per cell to try
        workers: Processes

    Returns:
        List[GapReport]: One report per r, in the given order
    """
    if cfg.design != "factorial":
        raise ParameterError("The r sweep applies to factorial scenarios")
    return [verify_gap_theorem(cfg.model_copy(update={"r": r, "name": f"{cfg.name}-r{r}"}), workers) for r in r_values]


def _sweep_point(
    n: int, tau: float, y0: np.ndarray, reps: int, m: int, alpha: float, seed: int, workers: Optional[int]
) -> SweepPoint:
    cfg = ScenarioConfig(
        name=f"sweep-n{n}", design="crd", n=n, n1=n // 2, reps=reps, m=m, alpha=alpha, master_seed=seed,
    )
    outcomes = run_replications(constant_effect_population(y0, tau), cfg, KIND_TESTS, workers)
    valid = [o for o in outcomes if not o.degenerate]
    table = RejectionTable.from_decisions([(o.neyman_reject, o.fisher_reject) for o in valid])
    return SweepPoint(
        n=n, tau=tau,
        neyman_power=table.neyman_rate, fisher_power=table.fisher_rate,
        neyman_se=table.neyman_se, fisher_se=table.fisher_se,
    )


@measure_time
def local_alternative_sweep(
    c: float,
    n_grid: Sequence[int],
    reps: int,
    m: int,
    seed: int,
    fixed_tau: float = 0.3,
    outcome_var: float = 1.0,
    alpha: float = 0.05,
    workers: Optional[int] = None,
) -> SweepReport:
    """
    Powers of both tests under constant effects, local and fixed

    For each N a balanced design is run twice on the same control column:
    once with effect c / sqrt(N) and once with the fixed effect.

    Args:
        c: Local-alternative constant
        n_grid: Population sizes, ascending
        reps: Replications per point
        m: Randomization draws per test
        seed: Master seed
        fixed_tau: Effect of the companion fixed sweep
        outcome_var: Variance of the control outcomes
        alpha: Level
        workers: Processes

    Returns:
        SweepReport: Local and fixed power curves
    """
    if not math.isfinite(c):
        raise ParameterError("c must be finite")
    if list(n_grid) != sorted(n_grid) or any(n < 4 for n in n_grid):
        raise ParameterError("n_grid must be ascending with every N >= 4")

    local, fixed = [], []
    for n in n_grid:
        y0 = freeze_normal_population(n, 0.0, outcome_var, 0.0, outcome_var, _population_seed(seed, n)).y0
        local.append(_sweep_point(n, c / math.sqrt(n), y0, reps, m, alpha, seed, workers))
        fixed.append(_sweep_point(n, fixed_tau, y0, reps, m, alpha, seed, workers))
        logger.info(
            f"N={n}: local gap {local[-1].difference:.3f}, fixed gap {fixed[-1].difference:.3f}"
        )
    return SweepReport(c=c, fixed_tau=fixed_tau, local=local, fixed=fixed)


@measure_time
def heterogeneity_demo(cfg: ScenarioConfig, workers: Optional[int] = None) -> HeterogeneityReport:
    """
    Rejection rates when the average effect is zero but variances differ

    Runs the Neymanian test and randomization tests with both the
    difference-in-means and the variance-ratio statistic.

    Args:
        cfg: crd scenario, ideally with equal means, var1 > var0 and n1 > n0
        workers: Processes

    Returns:
        HeterogeneityReport: Three rejection rates with binomial standard errors
    """
    if cfg.design != "crd":
        raise ParameterError("The heterogeneity demonstration uses a crd scenario")
    population = build_population(cfg)
    summary = summarize_population(population)
    if not summary.s1sq > summary.s0sq or not cfg.n1 > cfg.n0:
        logger.warning("Expected S1^2 > S0^2 and n1 > n0 for a heterogeneity demonstration")
    if abs(summary.tau) > 1e-8 * max(1.0, math.sqrt(summary.s1sq)):
        logger.warning(f"Average effect is {summary.tau:.3g}, not zero")

    outcomes = run_replications(population, cfg, KIND_HETEROGENEITY, workers or cfg.workers)
    valid = [o for o in outcomes if not o.degenerate]
    count = len(valid)

    def rate(flags: List[bool]) -> float:
        return sum(flags) / count if count else math.nan

    neyman = rate([o.neyman_reject for o in valid])
    frt_diff = rate([o.fisher_reject for o in valid])
    frt_ratio = rate([o.var_ratio_reject for o in valid])
    return HeterogeneityReport(
        reps=len(outcomes),
        valid=count,
        neyman_rate=neyman,
        frt_diff_rate=frt_diff,
        frt_var_ratio_rate=frt_ratio,
        neyman_se=binomial_standard_error(neyman, count),
        frt_diff_se=binomial_standard_error(frt_diff, count),
        frt_var_ratio_se=binomial_standard_error(frt_ratio, count),
    )


def example_one(master_seed: int, reps: int = 1000, m: int = 100000, workers: Optional[int] = None) -> ScenarioConfig:
    """Balanced normal population, N = 100 with 50 treated"""
    return ScenarioConfig(
        name="example-1",
        design="crd",
        population=PopulationSpec(mu1=0.1, var1=1 / 16, mu0=0.0, var0=1 / 16, exact_moments=True),
        n=100,
        n1=50,
        reps=reps,
        m=m,
        master_seed=master_seed,
        workers=workers,
    )


def example_two(master_seed: int, reps: int = 1000, m: int = 100000, workers: Optional[int] = None) -> ScenarioConfig:
    """
    Unbalanced normal population, 70 treated with the larger variance and 30 controls

    The realized average effect is pinned at 0.07 by exact moments. At this
    effect Fisher rejects about 1% of the time while Neyman rejects about 6%.
    """
    return ScenarioConfig(
        name="example-2",
        design="crd",
        population=PopulationSpec(mu1=0.07, var1=1 / 4, mu0=0.0, var0=1 / 16, exact_moments=True),
        n=100,
        n1=70,
        reps=reps,
        m=m,
        master_seed=master_seed,
        workers=workers,
    )


def heterogeneity_scenario(
    master_seed: int, reps: int = 1000, m: int = 10000, workers: Optional[int] = None
) -> ScenarioConfig:
    """Zero average effect, treated variance four times the control variance, 70/30 split"""
    return ScenarioConfig(
        name="heterogeneity",
        design="crd",
        population=PopulationSpec(mu1=0.0, var1=1 / 4, mu0=0.0, var0=1 / 16, exact_moments=True),
        n=100,
        n1=70,
        reps=reps,
        m=m,
        master_seed=master_seed,
        workers=workers,
    )


# Signature bands of the built-in examples: (centre, half-width) of each rejection rate
EXAMPLE_ONE_NEYMAN_RATE = (0.512, 0.06)
EXAMPLE_ONE_FISHER_RATE = (0.497, 0.06)
EXAMPLE_ONE_MAX_KEEP_REJECT = 2
EXAMPLE_ONE_MIN_REJECT_KEEP = 5
EXAMPLE_TWO_MAX_FISHER_RATE = 0.02
EXAMPLE_TWO_NEYMAN_RANGE = (0.03, 0.12)


def _outside(rate: float, band: Tuple[float, float]) -> bool:
    centre, half_width = band
    return abs(rate - centre) > half_width


def check_paradox_signature(example: int, result: ScenarioResult) -> Tuple[bool, List[str]]:
    """
    Checks of the Neyman-rejects-but-Fisher-keeps pattern

    Example 1 (balanced): both rejection rates near their reference values,
    Fisher rejecting with Neyman keeping at most twice, and the reverse
    disagreement at least five times.
    Example 2 (unbalanced): Fisher power at most 0.02 and below the level,
    Neyman power between 0.03 and 0.12.

    Args:
        example: 1 or 2
        result: Scenario result

    Returns:
        Tuple[bool, List[str]]: Pass flag and one message per failed check
    """
    table = result.table
    alpha = result.summary.config["alpha"]
    failures = []
    if example == 1:
        if table.keep_reject > EXAMPLE_ONE_MAX_KEEP_REJECT:
            failures.append(f"keep_reject={table.keep_reject} exceeds {EXAMPLE_ONE_MAX_KEEP_REJECT}")
        if table.reject_keep < EXAMPLE_ONE_MIN_REJECT_KEEP:
            failures.append(f"reject_keep={table.reject_keep} is below {EXAMPLE_ONE_MIN_REJECT_KEEP}")
        if _outside(table.neyman_rate, EXAMPLE_ONE_NEYMAN_RATE):
            failures.append(f"Neyman rate {table.neyman_rate:.3f} outside {EXAMPLE_ONE_NEYMAN_RATE[0]} +/- {EXAMPLE_ONE_NEYMAN_RATE[1]}")
        if _outside(table.fisher_rate, EXAMPLE_ONE_FISHER_RATE):
            failures.append(f"Fisher rate {table.fisher_rate:.3f} outside {EXAMPLE_ONE_FISHER_RATE[0]} +/- {EXAMPLE_ONE_FISHER_RATE[1]}")
    elif example == 2:
        if table.fisher_rate > EXAMPLE_TWO_MAX_FISHER_RATE or not table.fisher_rate < alpha:
            failures.append(f"Fisher power {table.fisher_rate:.3f} exceeds {min(EXAMPLE_TWO_MAX_FISHER_RATE, alpha)}")
        low, high = EXAMPLE_TWO_NEYMAN_RANGE
        if not low <= table.neyman_rate <= high:
            failures.append(f"Neyman power {table.neyman_rate:.3f} outside [{low}, {high}]")
    else:
        raise ParameterError(f"Unknown example {example}; choose 1 or 2")
    return not failures, failures
