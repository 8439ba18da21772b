"""
Tests for randomization_inference.models.results and reports modules
"""
import math

import pytest
from pydantic import ValidationError

from randomization_inference.core.constants import INTERVAL_RESULT_COLUMNS, TEST_RESULT_COLUMNS
from randomization_inference.models.reports import VarianceReport
from randomization_inference.models.results import IntervalResult, TestResult


class TestTestResult:
    """Test TestResult model"""

    def test_rejects_at_or_below_level(self):
        """Test that p equal to alpha rejects"""
        result = TestResult(statistic=2.0, p_value=0.05, method="neyman")
        assert result.rejects(0.05)
        assert not result.rejects(0.049)

    def test_p_value_range(self):
        """Test that p-values lie in [0, 1]"""
        with pytest.raises(ValidationError):
            TestResult(statistic=0.0, p_value=1.5, method="neyman")

    def test_unknown_method(self):
        """Test that the method is one of the known procedures"""
        with pytest.raises(ValidationError):
            TestResult(statistic=0.0, p_value=0.5, method="t_test")

    def test_to_row(self):
        """Test the CSV row layout"""
        row = TestResult(statistic=1.0, p_value=0.3, method="frt_mc", m_draws=100).to_row()
        assert list(row) == TEST_RESULT_COLUMNS
        assert row["m_draws"] == 100


class TestIntervalResult:
    """Test IntervalResult model"""

    def test_width_and_contains(self):
        """Test width and membership"""
        interval = IntervalResult(lower=-1.0, upper=2.0, level=0.95, method="neyman_ci")
        assert interval.width == 3.0
        assert interval.contains(0.0)
        assert not interval.contains(2.5)

    def test_order(self):
        """Test that lower may not exceed upper"""
        with pytest.raises(ValidationError):
            IntervalResult(lower=1.0, upper=0.0, level=0.95, method="fiducial")

    def test_empty_interval_allows_nan(self):
        """Test that an empty interval carries nan endpoints"""
        interval = IntervalResult(lower=math.nan, upper=math.nan, level=0.9, method="fiducial", empty=True)
        assert interval.empty
        assert list(interval.to_row()) == INTERVAL_RESULT_COLUMNS


class TestVarianceReport:
    """Test VarianceReport model"""

    def test_negative_variance_refused(self):
        """Test that variances are nonnegative"""
        with pytest.raises(ValidationError):
            VarianceReport(
                tau_hat=0, v_neyman=-1, v_fisher=0, v_ols=0, v_hw=0, v_score=0, v_improved=0,
                s1sq=0, s0sq=0, ssq=0,
            )
