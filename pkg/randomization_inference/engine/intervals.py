"""
Interval estimates of the average causal effect
"""
import logging
from typing import Optional

import numpy as np
from scipy.stats import norm

from ..core.config import settings
from ..core.constants import FIDUCIAL_GRID_HALF_WIDTH, FIDUCIAL_GRID_POINTS, FIDUCIAL_TOLERANCE
from ..core.exceptions import DegenerateDataError, ParameterError
from ..models.population import ObservedData
from ..models.results import IntervalResult
from .design import draw_crd_batch, enumerate_crd_batches
from .estimators import variance_report
from .testing import observed_shift_statistic, shifted_statistics

logger = logging.getLogger(__name__)


def _check_level(level: float) -> None:
    if not 0 < level < 1:
        raise ParameterError(f"level must lie in (0, 1), got {level}")


def neyman_ci(d: ObservedData, level: float = 0.95) -> IntervalResult:
    """
    Symmetric normal interval tau_hat +/- z sqrt(v_neyman)

    Args:
        d: Observed data
        level: Coverage level

    Returns:
        IntervalResult: method "neyman_ci"

    Raises:
        DegenerateDataError: If the Neymanian variance is zero
    """
    _check_level(level)
    report = variance_report(d)
    if report.v_neyman == 0:
        raise DegenerateDataError("Neymanian variance is zero; the interval is degenerate")
    half = norm.ppf(1 - (1 - level) / 2) * np.sqrt(report.v_neyman)
    return IntervalResult(
        lower=report.tau_hat - half,
        upper=report.tau_hat + half,
        level=level,
        method="neyman_ci",
    )


class _ShiftedReference:
    """
    Reference assignments shared by every candidate effect

    Holds tau_A and d_A for a fixed set of assignments, so the p-value of
    each candidate c is a vectorised comparison.
    """

    def __init__(self, d: ObservedData, tau_a: np.ndarray, d_a: np.ndarray, add_one: bool):
        self.tau_a = tau_a
        self.d_a = d_a
        self.add_one = add_one
        self.tau_obs = observed_shift_statistic(d)

    def p_value(self, c: float) -> float:
        count = int(np.count_nonzero(np.abs(self.tau_a - c * self.d_a) >= abs(self.tau_obs - c)))
        m = len(self.tau_a)
        return (1 + count) / (1 + m) if self.add_one else count / m


def _reference(
    d: ObservedData,
    exact: bool,
    m: Optional[int],
    rng: Optional[np.random.Generator],
    add_one: bool,
    cap: Optional[int],
) -> _ShiftedReference:
    tau_parts, d_parts = [], []
    if exact:
        batches = enumerate_crd_batches(d.n, d.n1, cap=cap)
        add_one = False
    else:
        if rng is None:
            raise ParameterError("A Monte Carlo fiducial interval needs an explicit random stream")
        m = settings.DEFAULT_DRAWS if m is None else m
        sizes = [settings.BATCH_SIZE] * (m // settings.BATCH_SIZE)
        if m % settings.BATCH_SIZE:
            sizes.append(m % settings.BATCH_SIZE)
        batches = (draw_crd_batch(d.n, d.n1, size, rng) for size in sizes)

    for treated in batches:
        tau_a, d_a = shifted_statistics(d, treated)
        tau_parts.append(tau_a)
        d_parts.append(d_a)
    return _ShiftedReference(d, np.concatenate(tau_parts), np.concatenate(d_parts), add_one)


def _bisect(reference: _ShiftedReference, alpha: float, kept: float, dropped: float, tolerance: float) -> float:
    """Move the kept endpoint towards the boundary between retained and rejected effects"""
    while abs(kept - dropped) > tolerance:
        mid = (kept + dropped) / 2
        if reference.p_value(mid) > alpha:
            kept = mid
        else:
            dropped = mid
    return kept


def fiducial_interval(
    d: ObservedData,
    level: float = 0.95,
    m: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    exact: bool = False,
    add_one: bool = False,
    cap: Optional[int] = None,
) -> IntervalResult:
    """
    Constant effects c not rejected by the randomization test

    For each c the treated outcomes are shifted by -c and the
    difference-in-means randomization test is run; c is kept when its
    p-value exceeds 1 - level. Candidates come from a grid over
    tau_hat +/- 10 sqrt(v_neyman), and both ends of the retained hull are
    refined by bisection. All candidates share one set of reference
    assignments.

    Args:
        d: Observed data
        level: Fiducial level
        m: Monte Carlo assignments, defaults to settings.DEFAULT_DRAWS
        rng: Random stream of the reference assignments
        exact: Use every assignment instead of a Monte Carlo sample
        add_one: Use (1 + count)/(1 + m) p-values in Monte Carlo mode
        cap: Enumeration cap in exact mode

    Returns:
        IntervalResult: method "fiducial", with empty, truncated and connected flags
    """
    _check_level(level)
    alpha = 1 - level
    report = variance_report(d)
    scale = np.sqrt(report.v_neyman) if report.v_neyman > 0 else np.sqrt(report.v_fisher)
    if scale == 0:
        raise DegenerateDataError("Observed outcomes are constant; no fiducial interval exists", cause="constant outcomes")

    reference = _reference(d, exact, m, rng, add_one, cap)
    grid = reference.tau_obs + np.linspace(
        -FIDUCIAL_GRID_HALF_WIDTH * scale, FIDUCIAL_GRID_HALF_WIDTH * scale, FIDUCIAL_GRID_POINTS
    )
    retained = np.array([reference.p_value(c) > alpha for c in grid])

    if not retained.any():
        logger.warning("No candidate effect was retained; reporting an empty fiducial interval")
        return IntervalResult(lower=float("nan"), upper=float("nan"), level=level, method="fiducial", empty=True)

    kept = np.flatnonzero(retained)
    first, last = int(kept[0]), int(kept[-1])
    connected = bool(retained[first:last + 1].all())
    if not connected:
        logger.warning("Retained effects do not form one run on the grid; reporting their hull")
    truncated = first == 0 or last == len(grid) - 1
    if truncated:
        logger.warning("Fiducial interval reaches the edge of the search grid")

    tolerance = FIDUCIAL_TOLERANCE * scale
    lower = grid[first] if first == 0 else _bisect(reference, alpha, grid[first], grid[first - 1], tolerance)
    upper = grid[last] if last == len(grid) - 1 else _bisect(reference, alpha, grid[last], grid[last + 1], tolerance)

    return IntervalResult(
        lower=float(lower),
        upper=float(upper),
        level=level,
        method="fiducial",
        truncated=truncated,
        connected=connected,
    )
