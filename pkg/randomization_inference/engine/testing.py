"""
Hypothesis tests for completely randomized, matched-pair and factorial data

Neymanian tests use the normal approximation. Randomization tests hold the
observed outcomes fixed and recompute the statistic over drawn or
enumerated assignments. The observed statistic is always evaluated by the
same vectorised kernel as the reference assignments. Kernels work on
exact integer scores of the outcomes, so "at least as extreme" comparisons
are exact and ties count as extreme.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Literal, Optional, Tuple

import numpy as np
from scipy.stats import norm

from ..core.config import settings
from ..core.constants import DECIMAL_GRID_DIGITS, STATISTIC_DIFF_IN_MEANS, STATISTIC_VARIANCE_RATIO
from ..core.exceptions import DegenerateDataError, EnumerationCapError, ParameterError
from ..models.population import ObservedData
from ..models.reports import FactorialEffectReport, PairEffectReport
from ..models.results import TestResult
from .design import count_crd, draw_crd_batch, draw_factorial_batch, enumerate_crd_batches
from .estimators import variance_report

logger = logging.getLogger(__name__)

Statistic = Literal["diff_in_means", "variance_ratio"]
PairMode = Literal["auto", "exact", "mc", "normal"]


def reject_map(p_value: float) -> dict:
    """Rejection decision at each configured level"""
    return {level: p_value <= level for level in settings.REJECTION_LEVELS}


def normal_test(estimate: float, variance: float, method: str) -> TestResult:
    """
    Two-sided normal-approximation test of a zero mean

    A zero variance is degenerate: p is 0 for a nonzero estimate and 1
    otherwise, and the result is flagged.

    Args:
        estimate: Point estimate
        variance: Its estimated variance
        method: Result method label

    Returns:
        TestResult: z statistic and p = 2 Phi(-|z|)
    """
    if variance < 0:
        raise ParameterError(f"Variance must be nonnegative, got {variance}")
    if variance == 0:
        p_value = 0.0 if estimate != 0 else 1.0
        statistic = float(np.copysign(np.inf, estimate)) if estimate != 0 else 0.0
        return TestResult(
            statistic=statistic,
            p_value=p_value,
            method=method,
            reject_at=reject_map(p_value),
            degenerate=True,
        )

    z = estimate / np.sqrt(variance)
    p_value = float(min(1.0, 2 * norm.sf(abs(z))))
    return TestResult(statistic=float(z), p_value=p_value, method=method, reject_at=reject_map(p_value))


def neyman_test(d: ObservedData) -> TestResult:
    """
    Normal-approximation test of zero average effect with the Neymanian variance

    Args:
        d: Observed data with at least two units per arm

    Returns:
        TestResult: method "neyman"
    """
    report = variance_report(d)
    if report.v_neyman == 0:
        logger.warning("Neymanian variance is zero; returning a degenerate test")
    return normal_test(report.tau_hat, report.v_neyman, "neyman")


def variance_ratio_statistic(d: ObservedData) -> float:
    """
    Ratio s1^2 / s0^2 of treated to control sample variances

    Raises:
        DegenerateDataError: If the control variance is zero
    """
    s0sq = float(np.var(d.control, ddof=1)) if d.n0 >= 2 else 0.0
    if s0sq == 0:
        raise DegenerateDataError("The variance ratio needs a positive control variance", cause="zero control variance")
    return float(np.var(d.treated, ddof=1)) / s0sq


def integer_scores(y: np.ndarray, limit: int) -> Tuple[np.ndarray, float]:
    """
    Outcomes as int64 scores on one common grid

    Integer and decimal data (up to DECIMAL_GRID_DIGITS places) map exactly
    onto k * 10^-d. Other data are rounded onto the finest binary grid whose
    scores stay within limit. Sums of scores are exact, so assignments with
    mathematically equal statistics get equal keys.

    Args:
        y: Outcomes
        limit: Largest admissible absolute score

    Returns:
        Tuple[np.ndarray, float]: Scores and the grid unit, y ~ scores * unit
    """
    y = np.asarray(y, dtype=float)
    peak = float(np.max(np.abs(y))) if y.size else 0.0
    if peak == 0:
        return np.zeros(len(y), dtype=np.int64), 1.0

    for digits in range(DECIMAL_GRID_DIGITS + 1):
        if peak * 10.0 ** digits > limit:
            break
        scaled = y * 10.0 ** digits
        rounded = np.round(scaled)
        if np.all(np.abs(scaled - rounded) <= 1e-15 * np.maximum(np.abs(scaled), 1.0)):
            return rounded.astype(np.int64), 10.0 ** -digits

    exponent = int(np.floor(np.log2(limit / peak)))
    return np.round(np.ldexp(y, exponent)).astype(np.int64), float(np.ldexp(1.0, -exponent))


def _score_limit(n: int, statistic: str) -> int:
    # |n S1 - n1 T| and n1 Q1 - S1^2 must fit in int64
    if statistic == STATISTIC_DIFF_IN_MEANS:
        return 2 ** 61 // (n * n)
    return 2 ** 31 // n


def _crd_keys(z: np.ndarray, n1: int, treated: np.ndarray, statistic: str) -> np.ndarray:
    """
    Two-sided extremeness keys for rows of treated indices

    For the difference in means the key is |n S1 - n1 T| on integer scores,
    which is |tau_hat| times n1 n0 / unit. For the variance ratio it is
    max(s1^2, s0^2) / min(s1^2, s0^2), monotone in |log ratio|; nan when both
    variances vanish, which is never extreme.

    Args:
        z: Integer outcome scores
        n1: Treated units
        treated: (rows, n1) treated indices
        statistic: Statistic name

    Returns:
        np.ndarray: One key per row
    """
    n = len(z)
    n0 = n - n1
    picked = z[treated]
    sum1 = picked.sum(axis=1)
    total = z.sum()
    if statistic == STATISTIC_DIFF_IN_MEANS:
        return np.abs(n * sum1 - n1 * total)

    sum0 = total - sum1
    sq1 = (picked * picked).sum(axis=1)
    sq0 = (z * z).sum() - sq1
    # s1^2 / s0^2 as one division of scaled integers, so equal ratios round alike
    s1sq = (n1 * sq1 - sum1 * sum1).astype(float) * (n0 * (n0 - 1))
    s0sq = (n0 * sq0 - sum0 * sum0).astype(float) * (n1 * (n1 - 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.maximum(s1sq, s0sq) / np.minimum(s1sq, s0sq)


def _crd_scores(d: ObservedData, statistic: str) -> np.ndarray:
    return integer_scores(d.yobs, _score_limit(d.n, statistic))[0]


def _observed_value(d: ObservedData, statistic: str) -> float:
    if statistic == STATISTIC_DIFF_IN_MEANS:
        return float(d.treated.mean() - d.control.mean())
    s0sq = float(np.var(d.control, ddof=1))
    return float(np.var(d.treated, ddof=1)) / s0sq if s0sq > 0 else float("nan")


def _check_statistic(d: ObservedData, statistic: str) -> None:
    if statistic not in (STATISTIC_DIFF_IN_MEANS, STATISTIC_VARIANCE_RATIO):
        raise ParameterError(f"Unknown statistic {statistic!r}")
    if statistic == STATISTIC_VARIANCE_RATIO and (d.n1 < 2 or d.n0 < 2):
        raise ParameterError("The variance ratio needs at least 2 units per arm")


def _observed_row(d: ObservedData) -> np.ndarray:
    return np.flatnonzero(d.t == 1)[None, :]


def _method(statistic: str, exact: bool) -> str:
    if statistic == STATISTIC_VARIANCE_RATIO:
        return "frt_var_ratio"
    return "frt_exact" if exact else "frt_mc"


def _constant_result(d: ObservedData, statistic: str, exact: bool, m: int, add_one: bool) -> TestResult:
    logger.warning("Observed outcomes are constant; randomization test is degenerate")
    value = 0.0 if statistic == STATISTIC_DIFF_IN_MEANS else float("nan")
    return TestResult(
        statistic=value,
        p_value=1.0,
        method=_method(statistic, exact),
        m_draws=0 if exact else m,
        reject_at=reject_map(1.0),
        degenerate=True,
        add_one=add_one,
    )


def _observed_key(d: ObservedData, z: np.ndarray, statistic: str):
    return _crd_keys(z, d.n1, _observed_row(d), statistic)[0]


def frt_monte_carlo(
    d: ObservedData,
    statistic: Statistic = STATISTIC_DIFF_IN_MEANS,
    m: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    add_one: bool = False,
    batch_size: Optional[int] = None,
) -> TestResult:
    """
    Fisher randomization test of the sharp null, Monte Carlo reference distribution

    Args:
        d: Observed data
        statistic: diff_in_means (two-sided on |value|) or variance_ratio
            (two-sided on |log value|)
        m: Number of independent assignments, defaults to settings.DEFAULT_DRAWS
        rng: Random stream of the reference draws
        add_one: Return (1 + count)/(1 + m) instead of count/m
        batch_size: Assignments per vectorised chunk

    Returns:
        TestResult: method "frt_mc" or "frt_var_ratio"
    """
    _check_statistic(d, statistic)
    m = settings.DEFAULT_DRAWS if m is None else m
    if m < 1:
        raise ParameterError(f"m must be positive, got {m}")
    if rng is None:
        raise ParameterError("frt_monte_carlo needs an explicit random stream")
    if np.ptp(d.yobs) == 0:
        return _constant_result(d, statistic, False, m, add_one)

    z = _crd_scores(d, statistic)
    observed_value = _observed_value(d, statistic)
    observed_key = _observed_key(d, z, statistic)
    if np.isnan(observed_key):
        return _constant_result(d, statistic, False, m, add_one)

    batch_size = batch_size or settings.BATCH_SIZE
    count = 0
    remaining = m
    while remaining > 0:
        size = min(batch_size, remaining)
        keys = _crd_keys(z, d.n1, draw_crd_batch(d.n, d.n1, size, rng), statistic)
        count += int(np.count_nonzero(keys >= observed_key))
        remaining -= size

    p_value = (1 + count) / (1 + m) if add_one else count / m
    return TestResult(
        statistic=observed_value,
        p_value=p_value,
        method=_method(statistic, False),
        m_draws=m,
        reject_at=reject_map(p_value),
        extreme_count=count,
        n_assignments=m,
        add_one=add_one,
    )


def exact_extreme_count(
    d: ObservedData,
    statistic: Statistic = STATISTIC_DIFF_IN_MEANS,
    start: int = 0,
    stop: Optional[int] = None,
    cap: Optional[int] = None,
) -> int:
    """
    Count enumerated assignments at least as extreme as the observed one

    Args:
        d: Observed data
        statistic: Statistic name
        start: First lexicographic position
        stop: End position (exclusive)
        cap: Enumeration cap

    Returns:
        int: Extreme assignments in [start, stop)
    """
    z = _crd_scores(d, statistic)
    observed_key = _observed_key(d, z, statistic)
    count = 0
    for batch in enumerate_crd_batches(d.n, d.n1, cap=cap, start=start, stop=stop):
        keys = _crd_keys(z, d.n1, batch, statistic)
        count += int(np.count_nonzero(keys >= observed_key))
    return count


def _exact_count_task(args) -> int:
    d, statistic, start, stop, cap = args
    return exact_extreme_count(d, statistic, start, stop, cap)


def frt_exact(
    d: ObservedData,
    statistic: Statistic = STATISTIC_DIFF_IN_MEANS,
    cap: Optional[int] = None,
    workers: int = 1,
) -> TestResult:
    """
    Fisher randomization test over every completely randomized assignment

    Args:
        d: Observed data
        statistic: Statistic name
        cap: Enumeration cap, defaults to settings.ENUMERATION_CAP
        workers: Processes sharing lexicographic ranges of the enumeration

    Returns:
        TestResult: p = extreme_count / C(n, n1), method "frt_exact" or "frt_var_ratio"

    Raises:
        EnumerationCapError: If C(n, n1) exceeds the cap
    """
    _check_statistic(d, statistic)
    total = count_crd(d.n, d.n1)
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if total > cap:
        raise EnumerationCapError(total, cap)
    if np.ptp(d.yobs) == 0:
        return _constant_result(d, statistic, True, 0, False)

    observed_value = _observed_value(d, statistic)
    if np.isnan(_observed_key(d, _crd_scores(d, statistic), statistic)):
        return _constant_result(d, statistic, True, 0, False)

    if workers > 1 and total >= 2 * settings.BATCH_SIZE:
        bounds = np.linspace(0, total, workers + 1).astype(np.int64)
        tasks = [(d, statistic, int(lo), int(hi), cap) for lo, hi in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            count = sum(pool.map(_exact_count_task, tasks))
    else:
        count = exact_extreme_count(d, statistic, cap=cap)

    p_value = count / total
    return TestResult(
        statistic=observed_value,
        p_value=p_value,
        method=_method(statistic, True),
        m_draws=0,
        reject_at=reject_map(p_value),
        extreme_count=count,
        n_assignments=total,
    )


def _pair_kernel(scores: np.ndarray, signs: np.ndarray) -> np.ndarray:
    # |sum of signed scores|, proportional to |mean signed effect|
    return np.abs((signs * scores).sum(axis=1))


def _sign_rows(codes: np.ndarray, n_pairs: int) -> np.ndarray:
    bits = (codes[:, None] >> np.arange(n_pairs)) & 1
    return 1 - 2 * bits


def pair_sign_flip_test(
    report: PairEffectReport,
    exact: bool,
    m: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    add_one: bool = False,
    cap: Optional[int] = None,
) -> TestResult:
    """
    Sign-flip randomization test of the matched-pair sharp null

    Exact mode enumerates the 2^N sign vectors as the bits of 0..2^N-1,
    code 0 being the observed orientation.

    Args:
        report: Matched-pair estimates
        exact: Enumerate instead of sampling
        m: Monte Carlo draws
        rng: Random stream for Monte Carlo mode
        add_one: Return (1 + count)/(1 + m) in Monte Carlo mode
        cap: Enumeration cap

    Returns:
        TestResult: method "pair_frt"
    """
    tau_i = np.asarray(report.per_pair, dtype=float)
    n_pairs = len(tau_i)
    scores, _ = integer_scores(tau_i, 2 ** 62 // n_pairs)
    observed_key = _pair_kernel(scores, np.ones((1, n_pairs), dtype=np.int64))[0]
    degenerate = bool(np.all(tau_i == 0))
    batch_size = settings.BATCH_SIZE
    count = 0

    if exact:
        total = 2 ** n_pairs
        cap = settings.ENUMERATION_CAP if cap is None else cap
        if total > cap:
            raise EnumerationCapError(total, cap)
        for start in range(0, total, batch_size):
            codes = np.arange(start, min(start + batch_size, total), dtype=np.int64)
            count += int(np.count_nonzero(_pair_kernel(scores, _sign_rows(codes, n_pairs)) >= observed_key))
        p_value = count / total
        m_draws, n_assignments, add_one = 0, total, False
    else:
        m = settings.DEFAULT_DRAWS if m is None else m
        if rng is None:
            raise ParameterError("Monte Carlo sign flips need an explicit random stream")
        remaining = m
        while remaining > 0:
            size = min(batch_size, remaining)
            signs = 1 - 2 * rng.integers(0, 2, size=(size, n_pairs))
            count += int(np.count_nonzero(_pair_kernel(scores, signs) >= observed_key))
            remaining -= size
        p_value = (1 + count) / (1 + m) if add_one else count / m
        m_draws, n_assignments = m, m

    return TestResult(
        statistic=report.tau_hat,
        p_value=p_value,
        method="pair_frt",
        m_draws=m_draws,
        reject_at=reject_map(p_value),
        degenerate=degenerate,
        extreme_count=count,
        n_assignments=n_assignments,
        add_one=add_one,
    )


def pair_tests(
    report: PairEffectReport,
    mode: PairMode = "auto",
    m: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    add_one: bool = False,
) -> Tuple[TestResult, TestResult]:
    """
    Neymanian and Fisherian tests for a matched-pair experiment

    Args:
        report: Matched-pair estimates
        mode: "exact" enumerates sign flips, "mc" samples them, "normal" uses
            the sharp-null variance in a normal approximation, "auto" is exact
            up to settings.PAIR_EXACT_LIMIT pairs and Monte Carlo beyond
        m: Monte Carlo draws
        rng: Random stream for Monte Carlo mode
        add_one: Use (1 + count)/(1 + m) in Monte Carlo mode

    Returns:
        Tuple[TestResult, TestResult]: (Neyman, Fisher)
    """
    neyman = normal_test(report.tau_hat, report.v_neyman, "pair_neyman")
    if mode == "auto":
        mode = "exact" if report.n_pairs <= settings.PAIR_EXACT_LIMIT else "mc"

    if mode == "normal":
        fisher = normal_test(report.tau_hat, report.v_fisher, "pair_frt_normal")
    elif mode in ("exact", "mc"):
        fisher = pair_sign_flip_test(report, exact=mode == "exact", m=m, rng=rng, add_one=add_one)
    else:
        raise ParameterError(f"Unknown pair test mode {mode!r}")
    return neyman, fisher


def _factorial_sums(
    observed: ObservedData,
    report: FactorialEffectReport,
    m: int,
    rng: np.random.Generator,
) -> Tuple[int, np.ndarray, float]:
    """Signed contrast sums of integer scores: observed, m re-allocations, grid unit"""
    k, r = report.k, report.r
    n = r * 2 ** k
    if observed.n != n:
        raise ParameterError(f"Expected {n} observations for k={k}, r={r}, got {observed.n}")
    z, unit = integer_scores(observed.yobs, 2 ** 62 // n)
    signs = np.rint(report.contrast).astype(np.int64)[np.arange(n) // r]

    def kernel(perm: np.ndarray) -> np.ndarray:
        blocks = np.sort(perm.reshape(len(perm), 2 ** k, r), axis=2).reshape(len(perm), n)
        return (z[blocks] * signs).sum(axis=1)

    observed_sum = int(kernel(np.argsort(observed.t, kind="stable")[None, :])[0])
    sums = []
    remaining = m
    while remaining > 0:
        size = min(settings.BATCH_SIZE, remaining)
        sums.append(kernel(draw_factorial_batch(k, r, size, rng)))
        remaining -= size
    return observed_sum, np.concatenate(sums), unit


def factorial_randomization_distribution(
    observed: ObservedData,
    report: FactorialEffectReport,
    m: int,
    rng: np.random.Generator,
) -> Tuple[float, np.ndarray]:
    """
    Factorial effect recomputed over balanced re-allocations, outcomes fixed

    Args:
        observed: Cell-labelled observations
        report: Estimates carrying k, r and the contrast
        m: Re-allocations
        rng: Random stream

    Returns:
        Tuple[float, np.ndarray]: Observed statistic and the m drawn statistics
    """
    observed_sum, sums, unit = _factorial_sums(observed, report, m, rng)
    scale = unit * 2.0 ** -(report.k - 1) / report.r
    return float(observed_sum * scale), sums * scale


def factorial_tests(
    report: FactorialEffectReport,
    observed: ObservedData,
    m: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    add_one: bool = False,
) -> Tuple[TestResult, TestResult]:
    """
    Neymanian and Fisherian tests of one factorial effect

    Args:
        report: Estimates from estimate_factorial
        observed: The cell-labelled observations behind the report
        m: Monte Carlo re-allocations, defaults to settings.DEFAULT_DRAWS
        rng: Random stream of the re-allocations
        add_one: Use (1 + count)/(1 + m)

    Returns:
        Tuple[TestResult, TestResult]: (Neyman, Fisher)
    """
    neyman = normal_test(report.tau1_hat, report.v1_neyman, "factorial_neyman")
    m = settings.DEFAULT_DRAWS if m is None else m
    if rng is None:
        raise ParameterError("factorial_tests needs an explicit random stream")

    if np.ptp(observed.yobs) == 0:
        fisher = TestResult(
            statistic=0.0, p_value=1.0, method="factorial_frt", m_draws=m,
            reject_at=reject_map(1.0), degenerate=True, add_one=add_one,
        )
        return neyman, fisher

    observed_sum, sums, unit = _factorial_sums(observed, report, m, rng)
    observed_stat = float(observed_sum * unit * 2.0 ** -(report.k - 1) / report.r)
    count = int(np.count_nonzero(np.abs(sums) >= abs(observed_sum)))
    p_value = (1 + count) / (1 + m) if add_one else count / m
    fisher = TestResult(
        statistic=observed_stat,
        p_value=p_value,
        method="factorial_frt",
        m_draws=m,
        reject_at=reject_map(p_value),
        extreme_count=count,
        n_assignments=m,
        add_one=add_one,
    )
    return neyman, fisher


def shifted_statistics(d: ObservedData, treated: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ingredients of the constant-effect randomization test

    Under Y_i(1) = Y_i(0) + c the statistic of assignment A on the adjusted
    outcomes is tau_A - c * d_A, where d_A = k_A/N1 - (N1 - k_A)/N0 and k_A
    counts the observed-treated units in A.

    Args:
        d: Observed data
        treated: (rows, n1) treated indices

    Returns:
        Tuple[np.ndarray, np.ndarray]: tau_A and d_A per row
    """
    tau_a = _shifted_difference(d, treated)
    k_a = (d.t[treated] == 1).sum(axis=1)
    return tau_a, k_a / d.n1 - (d.n1 - k_a) / d.n0


def observed_shift_statistic(d: ObservedData) -> float:
    """Observed difference in means through the randomization kernel"""
    return float(_shifted_difference(d, _observed_row(d))[0])


def _shifted_difference(d: ObservedData, treated: np.ndarray) -> np.ndarray:
    # tau_A from exact integer sums, so equal differences compare equal
    z, unit = integer_scores(d.yobs, _score_limit(d.n, STATISTIC_DIFF_IN_MEANS))
    signed = d.n * z[treated].sum(axis=1) - d.n1 * z.sum()
    return signed * unit / (d.n1 * d.n0)
