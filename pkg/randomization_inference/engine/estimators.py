"""
Point and variance estimators

Every estimator reads observed data only; population tables enter solely
through the observe_* functions.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import InsufficientDataError, ParameterError
from ..models.assignments import FactorialAssignment, PairAssignment
from ..models.population import (
    FactorialTable,
    MatchedPairTable,
    ObservedData,
    PairObservedData,
    PopulationSummary,
)
from ..models.reports import BinaryReport, FactorialEffectReport, PairEffectReport, VarianceReport
from .population import observe_factorial, observe_pairs, validate_contrast

logger = logging.getLogger(__name__)


def _require_crd(d: ObservedData) -> None:
    if d.design != "crd":
        raise ParameterError("Expected completely randomized data with 0/1 labels")


def diff_in_means(d: ObservedData) -> float:
    """
    Difference between the treated and control means of the observed outcomes

    Args:
        d: Observed data

    Returns:
        float: Treated mean minus control mean
    """
    _require_crd(d)
    return float(d.treated.mean() - d.control.mean())


def variance_report(d: ObservedData) -> VarianceReport:
    """
    All variance estimators of the difference in means

    Args:
        d: Observed data with at least two units per arm

    Returns:
        VarianceReport: Neyman, sharp-null, OLS, Huber-White, score and
            improved variances plus the sample variances they use

    Raises:
        InsufficientDataError: If an arm has fewer than two units
    """
    _require_crd(d)
    for arm, size in (("treated", d.n1), ("control", d.n0)):
        if size < 2:
            raise InsufficientDataError(f"The {arm} arm needs at least 2 units, has {size}", arm=arm)

    n, n1, n0 = d.n, d.n1, d.n0
    s1sq = float(np.var(d.treated, ddof=1))
    s0sq = float(np.var(d.control, ddof=1))
    ssq = float(np.var(d.yobs, ddof=1))

    return VarianceReport(
        tau_hat=diff_in_means(d),
        v_neyman=s1sq / n1 + s0sq / n0,
        v_fisher=n * ssq / (n1 * n0),
        v_ols=n * ((n1 - 1) * s1sq + (n0 - 1) * s0sq) / ((n - 2) * n1 * n0),
        v_hw=s1sq * (n1 - 1) / n1 ** 2 + s0sq * (n0 - 1) / n0 ** 2,
        v_score=(n - 1) * ssq / (n1 * n0),
        v_improved=(n0 / (n1 * n)) * s1sq + (n1 / (n0 * n)) * s0sq + 2 * np.sqrt(s1sq * s0sq) / n,
        s1sq=s1sq,
        s0sq=s0sq,
        ssq=ssq,
    )


def theorem3_gap(summary: PopulationSummary, n1: int, n0: int) -> float:
    """
    Leading-order value of v_fisher - v_neyman in a completely randomized design

    (1/N0 - 1/N1)(S1^2 - S0^2) + (Ybar1 - Ybar0)^2 / N

    Args:
        summary: Population estimands
        n1: Treated units
        n0: Control units

    Returns:
        float: The theoretical gap
    """
    if n1 < 1 or n0 < 1:
        raise ParameterError(f"Arm sizes must be positive, got ({n1}, {n0})")
    return (1 / n0 - 1 / n1) * (summary.s1sq - summary.s0sq) + (summary.ybar1 - summary.ybar0) ** 2 / (n1 + n0)


def binary_gap(p1: float, p0: float, n1: int, n0: int) -> float:
    """Leading-order variance gap for 0/1 outcomes with arm proportions p1 and p0"""
    if n1 < 1 or n0 < 1:
        raise ParameterError(f"Arm sizes must be positive, got ({n1}, {n0})")
    return (1 / n0 - 1 / n1) * (p1 * (1 - p1) - p0 * (1 - p0)) + (p1 - p0) ** 2 / (n1 + n0)


def binary_report(d: ObservedData) -> BinaryReport:
    """
    Variance report for 0/1 outcomes

    Adds the unpooled and pooled two-proportion variances. Arms whose
    outcomes are all equal are listed in constant_arms rather than refused.

    Args:
        d: Observed data with outcomes in {0, 1}

    Returns:
        BinaryReport: The report
    """
    _require_crd(d)
    bad = np.flatnonzero((d.yobs != 0) & (d.yobs != 1))
    if bad.size:
        raise ParameterError(f"Binary outcomes must be 0 or 1; unit {int(bad[0])} has {d.yobs[bad[0]]}")

    base = variance_report(d)
    p1 = float(d.treated.mean())
    p0 = float(d.control.mean())
    p = float(d.yobs.mean())
    constant = [arm for arm, values in (("treated", d.treated), ("control", d.control)) if np.ptp(values) == 0]
    if constant:
        logger.warning(f"Constant binary outcomes in arm(s): {', '.join(constant)}")

    return BinaryReport(
        **base.model_dump(),
        p1_hat=p1,
        p0_hat=p0,
        p_hat=p,
        v_unpooled=p1 * (1 - p1) / d.n1 + p0 * (1 - p0) / d.n0,
        v_pooled=p * (1 - p) * (1 / d.n1 + 1 / d.n0),
        constant_arms=constant,
    )


def variance_decomposition(d: ObservedData) -> Tuple[float, float]:
    """
    Both sides of the total-variance decomposition of the observed outcomes

    (N-1)s^2 = (N1-1)s1^2 + (N0-1)s0^2 + N1(Ybar1 - Ybar)^2 + N0(Ybar0 - Ybar)^2

    Returns:
        Tuple[float, float]: Left and right side
    """
    _require_crd(d)
    ybar = d.yobs.mean()
    lhs = float(((d.yobs - ybar) ** 2).sum())
    rhs = float(
        ((d.treated - d.treated.mean()) ** 2).sum()
        + ((d.control - d.control.mean()) ** 2).sum()
        + d.n1 * (d.treated.mean() - ybar) ** 2
        + d.n0 * (d.control.mean() - ybar) ** 2
    )
    return lhs, rhs


def pair_effect_report(per_pair: Sequence[float]) -> PairEffectReport:
    """
    Pair estimates from within-pair effect estimates

    Args:
        per_pair: tau_i hat, one per pair

    Returns:
        PairEffectReport: Mean effect, Neymanian and sharp-null variances
    """
    tau_i = np.asarray(per_pair, dtype=float)
    n_pairs = len(tau_i)
    if n_pairs < 2:
        raise InsufficientDataError(f"Matched-pair estimates need at least 2 pairs, got {n_pairs}", arm="pairs")
    tau_hat = float(tau_i.mean())
    return PairEffectReport(
        tau_hat=tau_hat,
        per_pair=tau_i,
        v_neyman=float(((tau_i - tau_hat) ** 2).sum() / (n_pairs * (n_pairs - 1))),
        v_fisher=float((tau_i ** 2).sum() / n_pairs ** 2),
    )


def estimate_pairs(observed: PairObservedData) -> PairEffectReport:
    """Within-pair treated-minus-control differences and their summaries"""
    diff = observed.y_obs[:, 0] - observed.y_obs[:, 1]
    return pair_effect_report(np.where(observed.flips == 1, diff, -diff))


def pair_report(pt: MatchedPairTable, a: PairAssignment) -> PairEffectReport:
    """
    Matched-pair estimates for the data a flip vector reveals

    Args:
        pt: Matched-pair potential outcomes
        a: Pair flips

    Returns:
        PairEffectReport: The report
    """
    return estimate_pairs(observe_pairs(pt, a))


def estimate_factorial(
    observed: ObservedData,
    k: int,
    r: int,
    contrast: Optional[Sequence[float]] = None,
) -> FactorialEffectReport:
    """
    Factorial effect estimate from cell-labelled observations

    Args:
        observed: Outcomes with canonical cell indices as labels
        k: Factors
        r: Units per cell
        contrast: +/-1 vector, defaults to the first main effect

    Returns:
        FactorialEffectReport: Effect, Neymanian and sharp-null variances
    """
    if observed.design != "factorial":
        raise ParameterError("Expected factorial data labelled by cell index")
    j_cells = 2 ** k
    g = validate_contrast(contrast, k) if contrast is not None else np.concatenate(
        [np.ones(j_cells // 2), -np.ones(j_cells // 2)]
    )
    cells = observed.t
    if np.any(cells >= j_cells):
        raise ParameterError(f"Cell indices must lie in [0, {j_cells - 1}]")
    counts = np.bincount(cells, minlength=j_cells)
    if np.any(counts < 2):
        empty = int(np.flatnonzero(counts < 2)[0])
        raise InsufficientDataError(f"Cell {empty} has {counts[empty]} units; need at least 2", arm=f"cell {empty}")
    if np.any(counts != r):
        raise ParameterError(f"Every cell must hold r={r} units, got counts {counts.tolist()}")

    y = observed.yobs
    cell_means = np.bincount(cells, weights=y, minlength=j_cells) / r
    cell_vars = np.bincount(cells, weights=(y - cell_means[cells]) ** 2, minlength=j_cells) / (r - 1)
    denom = 4.0 ** (k - 1) * r

    return FactorialEffectReport(
        tau1_hat=float(2.0 ** -(k - 1) * (g @ cell_means)),
        v1_neyman=float(cell_vars.sum() / denom),
        v1_fisher=float(j_cells * np.var(y, ddof=1) / denom),
        cell_means=cell_means,
        cell_vars=cell_vars,
        k=k,
        r=r,
        contrast=g,
    )


def factorial_report(
    ft: FactorialTable,
    a: FactorialAssignment,
    contrast: Optional[Sequence[float]] = None,
) -> FactorialEffectReport:
    """
    Factorial estimates for the data a balanced allocation reveals

    Args:
        ft: Factorial potential outcomes
        a: Balanced allocation
        contrast: +/-1 vector, defaults to the first main effect

    Returns:
        FactorialEffectReport: The report
    """
    return estimate_factorial(observe_factorial(ft, a), ft.k, ft.r, contrast)


def theorem6_gap(cell_means: Sequence[float], k: int, r: int) -> float:
    """
    Leading-order value of v1_fisher - v1_neyman in a balanced factorial

    Sum over ordered pairs of cells of the squared mean difference, divided
    by 2^(3k-1) r.

    Args:
        cell_means: Mean potential outcome per cell, canonical order
        k: Factors
        r: Units per cell

    Returns:
        float: The theoretical gap
    """
    means = np.asarray(cell_means, dtype=float)
    if means.shape != (2 ** k,):
        raise ParameterError(f"Expected {2 ** k} cell means, got shape {means.shape}")
    diffs = means[:, None] - means[None, :]
    return float((diffs ** 2).sum() / (2.0 ** (3 * k - 1) * r))
