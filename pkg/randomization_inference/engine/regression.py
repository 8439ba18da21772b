"""
Two-group linear model: OLS fit, Huber-White Wald test and score test

The design matrix is an intercept plus a 0/1 treatment column, so every
quantity has a closed form in the arm means.
"""
import logging

import numpy as np

from ..core.exceptions import DegenerateDataError, InsufficientDataError
from ..models.population import ObservedData
from ..models.reports import OlsFit
from ..models.results import TestResult
from .estimators import diff_in_means
from .testing import normal_test

logger = logging.getLogger(__name__)


def ols_fit(d: ObservedData) -> OlsFit:
    """
    Fit Y = alpha + beta T + error by least squares

    Args:
        d: Observed data

    Returns:
        OlsFit: Intercept (control mean), slope (difference in means),
            residuals, sigma^2 with divisor N-2 and the null MLE with divisor N
    """
    if d.n <= 2:
        raise InsufficientDataError(f"sigma^2 needs more than 2 units, got {d.n}", arm="all")
    mean1 = d.treated.mean()
    mean0 = d.control.mean()
    residuals = d.yobs - np.where(d.t == 1, mean1, mean0)
    return OlsFit(
        alpha_hat=float(mean0),
        beta_hat=diff_in_means(d),
        residuals=residuals,
        sigma2_hat=float((residuals ** 2).sum() / (d.n - 2)),
        sigma2_mle=float(((d.yobs - d.yobs.mean()) ** 2).sum() / d.n),
    )


def huber_white_variance(fit: OlsFit, d: ObservedData) -> float:
    """
    Sandwich variance of the slope from the residuals

    sum e_i^2 (T_i - Tbar)^2 / (sum (T_i - Tbar)^2)^2

    Args:
        fit: OLS fit of the same data
        d: Observed data

    Returns:
        float: The Huber-White variance
    """
    centered = d.t - d.t.mean()
    return float((fit.residuals ** 2 * centered ** 2).sum() / (centered ** 2).sum() ** 2)


def wald_hw_test(fit: OlsFit, d: ObservedData) -> TestResult:
    """
    Wald test of a zero slope with the Huber-White variance

    Args:
        fit: OLS fit of the same data
        d: Observed data

    Returns:
        TestResult: method "wald_hw"
    """
    v_hw = huber_white_variance(fit, d)
    if v_hw == 0:
        logger.warning("Huber-White variance is zero; returning a degenerate test")
    return normal_test(fit.beta_hat, v_hw, "wald_hw")


def score_variance(d: ObservedData) -> float:
    """V_S = (N-1) s^2 / (N1 N0)"""
    return float((d.n - 1) * np.var(d.yobs, ddof=1) / (d.n1 * d.n0))


def score_test(d: ObservedData) -> TestResult:
    """
    Rao score test of a zero slope under the normal linear model

    Args:
        d: Observed data

    Returns:
        TestResult: S = tau_hat / sqrt(V_S), method "score"

    Raises:
        DegenerateDataError: If all outcomes are equal
    """
    v_score = score_variance(d)
    if v_score == 0:
        raise DegenerateDataError("The score test is undefined for constant outcomes", cause="constant outcomes")
    return normal_test(diff_in_means(d), v_score, "score")


def score_chi_square(fit: OlsFit, d: ObservedData) -> float:
    """
    Squared score statistic from the null-restricted likelihood

    (N1 N0 tau / (N sigma~^2))^2 * N sigma~^2 / (N1 N0), which equals tau^2 / V_S.

    Args:
        fit: OLS fit of the same data
        d: Observed data

    Returns:
        float: The chi-square(1) statistic
    """
    if fit.sigma2_mle == 0:
        raise DegenerateDataError("The score test is undefined for constant outcomes", cause="constant outcomes")
    score = d.n1 * d.n0 * fit.beta_hat / (d.n * fit.sigma2_mle)
    information = d.n1 * d.n0 / (d.n * fit.sigma2_mle)
    return float(score ** 2 / information)
