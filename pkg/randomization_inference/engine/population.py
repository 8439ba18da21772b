"""
Finite populations of potential outcomes

Builds and summarizes completely randomized, matched-pair and factorial
tables, and realizes the data an assignment reveals. Tables are frozen once
built; the assignment is the only source of randomness afterwards.
"""
import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from ..core.constants import STREAM_POPULATION
from ..core.exceptions import DegenerateDataError, ParameterError
from ..models.assignments import Assignment, FactorialAssignment, PairAssignment
from ..models.population import (
    FactorialSummary,
    FactorialTable,
    MatchedPairTable,
    ObservedData,
    PairObservedData,
    PairSummary,
    PopulationSummary,
    PotentialTable,
)
from .design import stream

logger = logging.getLogger(__name__)


def summarize_population(pop: PotentialTable) -> PopulationSummary:
    """
    Population estimands of a potential table

    Args:
        pop: Potential outcomes

    Returns:
        PopulationSummary: tau, arm means, S1^2, S0^2, S_tau^2 and S10 (divisor N-1)
    """
    ybar1 = float(pop.y1.mean())
    ybar0 = float(pop.y0.mean())
    cov = np.cov(pop.y1, pop.y0, ddof=1)
    return PopulationSummary(
        n=pop.n,
        tau=ybar1 - ybar0,
        ybar1=ybar1,
        ybar0=ybar0,
        s1sq=float(cov[0, 0]),
        s0sq=float(cov[1, 1]),
        stausq=float(np.var(pop.tau_i, ddof=1)),
        s10=float(cov[0, 1]),
    )


def _normal_column(
    rng: np.random.Generator, n: int, mu: float, var: float, exact_moments: bool
) -> np.ndarray:
    draws = rng.normal(mu, np.sqrt(var), size=n)
    if exact_moments:
        draws = mu + np.sqrt(var) * (draws - draws.mean()) / draws.std(ddof=1)
    return draws


def freeze_normal_population(
    n: int,
    mu1: float,
    var1: float,
    mu0: float,
    var0: float,
    seed: int,
    exact_moments: bool = False,
) -> PotentialTable:
    """
    Draw a potential table from independent normals, once

    Args:
        n: Units
        mu1: Mean of Y(1)
        var1: Variance of Y(1)
        mu0: Mean of Y(0)
        var0: Variance of Y(0)
        seed: Master seed of the population stream
        exact_moments: Rescale each column so its sample mean and variance
            equal the parameters exactly

    Returns:
        PotentialTable: The frozen table
    """
    if var1 <= 0 or var0 <= 0:
        raise ParameterError(f"Variances must be positive, got var1={var1}, var0={var0}")
    if n < 2:
        raise ParameterError(f"A population needs at least 2 units, got n={n}")

    rng = stream(seed, STREAM_POPULATION)
    y1 = _normal_column(rng, n, mu1, var1, exact_moments)
    y0 = _normal_column(rng, n, mu0, var0, exact_moments)
    logger.info(f"Froze normal population: n={n}, mu1={mu1}, var1={var1}, mu0={mu0}, var0={var0}")
    return PotentialTable(y1=y1, y0=y0)


def constant_effect_population(y0: Sequence[float], tau: float) -> PotentialTable:
    """Table with Y_i(1) = Y_i(0) + tau for every unit"""
    y0 = np.asarray(y0, dtype=float)
    return PotentialTable(y1=y0 + tau, y0=y0)


def observe(pop: PotentialTable, a: Assignment) -> ObservedData:
    """
    Outcomes revealed by a completely randomized assignment

    Args:
        pop: Potential outcomes
        a: Assignment of the same length

    Returns:
        ObservedData: Y(1) for treated units, Y(0) for controls
    """
    if a.n != pop.n:
        raise ParameterError(f"Assignment covers {a.n} units, population has {pop.n}")
    yobs = np.where(a.labels == 1, pop.y1, pop.y0)
    return ObservedData(yobs=yobs, t=a.labels)


def observe_pairs(pt: MatchedPairTable, a: PairAssignment) -> PairObservedData:
    """
    Outcomes revealed by pair flips

    A flip of 1 treats the first unit of the pair and controls the second;
    a flip of 0 does the opposite.
    """
    if a.n_pairs != pt.n_pairs:
        raise ParameterError(f"Assignment covers {a.n_pairs} pairs, table has {pt.n_pairs}")
    first_treated = a.flips == 1
    y_obs = np.column_stack([
        np.where(first_treated, pt.y[:, 0, 1], pt.y[:, 0, 0]),
        np.where(first_treated, pt.y[:, 1, 0], pt.y[:, 1, 1]),
    ])
    return PairObservedData(y_obs=y_obs, flips=a.flips)


def observe_factorial(ft: FactorialTable, a: FactorialAssignment) -> ObservedData:
    """Outcome of each unit under the treatment combination it received"""
    if a.k != ft.k or a.r != ft.r:
        raise ParameterError(f"Assignment is for k={a.k}, r={a.r}; table has k={ft.k}, r={ft.r}")
    yobs = ft.y[np.arange(ft.n), a.cell_of_unit]
    return ObservedData(yobs=yobs, t=a.cell_of_unit, design="factorial")


def hajek_diagnostic(x: Sequence[float], n_sample: Optional[int] = None) -> float:
    """
    Hajek ratio max_i (x_i - mean)^2 / (sum_i (x_i - mean)^2 / N)

    Large values warn that a normal approximation to the sample mean may be
    poor. No threshold is applied.

    Args:
        x: Finite population values
        n_sample: Sample size the caller has in mind, checked to lie in [1, N-1]

    Returns:
        float: The ratio, between 1 and N
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        raise DegenerateDataError("The Hajek ratio needs at least 2 values", cause="constant values")
    if n_sample is not None and not 1 <= n_sample <= len(x) - 1:
        raise ParameterError(f"n_sample={n_sample} must lie in [1, {len(x) - 1}]")
    dev2 = (x - x.mean()) ** 2
    mean_dev2 = dev2.sum() / len(x)
    if mean_dev2 == 0:
        raise DegenerateDataError("The Hajek ratio is undefined for constant values", cause="constant values")
    return float(dev2.max() / mean_dev2)


def neyman_hajek_ratio(pop: PotentialTable, n1: int, n0: int) -> float:
    """Hajek ratio of x_i = Y_i(1)/N1 + Y_i(0)/N0, the quantity behind the CLT for tau hat"""
    if n1 + n0 != pop.n:
        raise ParameterError(f"Arm sizes ({n1}, {n0}) do not partition {pop.n} units")
    return hajek_diagnostic(pop.y1 / n1 + pop.y0 / n0, n_sample=n1)


def summarize_pairs(pt: MatchedPairTable) -> PairSummary:
    """
    Population estimands of a matched-pair table

    Args:
        pt: Matched-pair potential outcomes

    Returns:
        PairSummary: tau, within-pair effects and the exact variance of the pair estimator
    """
    y = pt.y
    per_pair = ((y[:, 0, 1] - y[:, 0, 0]) + (y[:, 1, 1] - y[:, 1, 0])) / 2
    spread = y[:, 0, 1] + y[:, 0, 0] - y[:, 1, 1] - y[:, 1, 0]
    return PairSummary(
        n_pairs=pt.n_pairs,
        tau=float(per_pair.mean()),
        per_pair=per_pair,
        sampling_variance=float((spread ** 2).sum() / (4 * pt.n_pairs ** 2)),
    )


def freeze_normal_pairs(
    n_pairs: int,
    mu1: float,
    var1: float,
    mu0: float,
    var0: float,
    pair_var: float,
    seed: int,
) -> MatchedPairTable:
    """
    Draw a matched-pair table once

    Both units of a pair share a normal pair effect with variance pair_var,
    which is what makes matching informative.
    """
    if var1 <= 0 or var0 <= 0 or pair_var < 0:
        raise ParameterError("Unit variances must be positive and pair_var nonnegative")
    rng = stream(seed, STREAM_POPULATION)
    shared = rng.normal(0.0, np.sqrt(pair_var), size=(n_pairs, 1)) if pair_var > 0 else np.zeros((n_pairs, 1))
    y = np.empty((n_pairs, 2, 2))
    y[:, :, 1] = mu1 + shared + rng.normal(0.0, np.sqrt(var1), size=(n_pairs, 2))
    y[:, :, 0] = mu0 + shared + rng.normal(0.0, np.sqrt(var0), size=(n_pairs, 2))
    logger.info(f"Froze matched-pair population: n_pairs={n_pairs}, pair_var={pair_var}")
    return MatchedPairTable(y=y)


def canonical_cells(k: int) -> np.ndarray:
    """
    Treatment combinations in canonical order

    Lexicographic with +1 before -1 in each coordinate; for k=2 the rows are
    (+,+), (+,-), (-,+), (-,-).

    Returns:
        np.ndarray: (2^k, k) array of signs
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    return np.array(list(itertools.product((1, -1), repeat=k)), dtype=float)


def factorial_contrast(k: int, factors: Sequence[int] = (0,)) -> np.ndarray:
    """
    Contrast vector of a main effect or interaction

    Args:
        k: Factors
        factors: Zero-based factors whose coordinates are multiplied;
            (0,) is the main effect of the first factor

    Returns:
        np.ndarray: +/-1 vector of length 2^k
    """
    factors = tuple(factors)
    if not factors or len(set(factors)) != len(factors) or any(f < 0 or f >= k for f in factors):
        raise ParameterError(f"Contrast factors {factors} must be distinct indices in [0, {k - 1}]")
    return canonical_cells(k)[:, list(factors)].prod(axis=1)


def validate_contrast(contrast: Sequence[float], k: int) -> np.ndarray:
    """
    Check a contrast vector against the design

    Raises:
        ParameterError: Wrong length, entries other than +/-1, or nonzero sum
    """
    g = np.asarray(contrast, dtype=float)
    if g.shape != (2 ** k,):
        raise ParameterError(f"Contrast must have {2 ** k} entries, got shape {g.shape}")
    if not np.all(np.abs(g) == 1):
        raise ParameterError("Contrast entries must be +1 or -1")
    if g.sum() != 0:
        raise ParameterError("Contrast entries must sum to zero")
    return g


def summarize_factorial(ft: FactorialTable, contrast: Optional[Sequence[float]] = None) -> FactorialSummary:
    """
    Population estimands of a factorial table for one contrast

    Args:
        ft: Factorial potential outcomes
        contrast: +/-1 vector, defaults to the first main effect

    Returns:
        FactorialSummary: Cell means and variances, the factorial effect, the
            variance of unit-level effects and the exact sampling variance
    """
    g = ft.g1 if contrast is None else validate_contrast(contrast, ft.k)
    scale = 2.0 ** -(ft.k - 1)
    cell_means = ft.y.mean(axis=0)
    cell_vars = ft.y.var(axis=0, ddof=1)
    unit_effects = scale * (ft.y @ g)
    s_tau1sq = float(np.var(unit_effects, ddof=1))
    sampling_variance = cell_vars.sum() / (4.0 ** (ft.k - 1) * ft.r) - s_tau1sq / ft.n
    return FactorialSummary(
        k=ft.k,
        r=ft.r,
        contrast=g,
        cell_means=cell_means,
        cell_vars=cell_vars,
        tau1=float(scale * (g @ cell_means)),
        s_tau1sq=s_tau1sq,
        sampling_variance=max(float(sampling_variance), 0.0),
    )


def freeze_normal_factorial(
    k: int,
    r: int,
    cell_means: Sequence[float],
    noise_var: float,
    seed: int,
) -> FactorialTable:
    """
    Draw a factorial table once: Y_i(z) = mean(z) + independent normal noise

    Args:
        k: Factors
        r: Replications per cell
        cell_means: Mean per treatment combination, canonical order
        noise_var: Variance of the unit-level noise
        seed: Master seed of the population stream

    Returns:
        FactorialTable: The frozen table
    """
    means = np.asarray(cell_means, dtype=float)
    if means.shape != (2 ** k,):
        raise ParameterError(f"cell_means must have {2 ** k} entries")
    if noise_var <= 0:
        raise ParameterError(f"noise_var must be positive, got {noise_var}")
    rng = stream(seed, STREAM_POPULATION)
    n = r * 2 ** k
    y = means + rng.normal(0.0, np.sqrt(noise_var), size=(n, 2 ** k))
    logger.info(f"Froze factorial population: k={k}, r={r}, n={n}")
    return FactorialTable(k=k, r=r, y=y)
