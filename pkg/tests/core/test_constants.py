"""
Tests for randomization_inference.core.constants module
"""
from randomization_inference.core.constants import (
    DESIGNS,
    EXIT_DEGENERATE,
    EXIT_ERROR,
    EXIT_INPUT_FORMAT,
    EXIT_OK,
    EXIT_SIGNATURE_FAILED,
    INTERVAL_METHODS,
    STATISTICS,
    STREAM_ASSIGNMENT,
    STREAM_POPULATION,
    STREAM_RANDOMIZATION,
    TEST_METHODS,
)
from randomization_inference.models.results import IntervalMethod, TestMethod


class TestMethods:
    """Test method and statistic registries"""

    def test_test_methods_match_result_literal(self):
        """Test that every documented method is accepted by TestResult"""
        assert set(TEST_METHODS) == set(TestMethod.__args__)

    def test_interval_methods_match_result_literal(self):
        """Test that every documented interval method is accepted by IntervalResult"""
        assert set(INTERVAL_METHODS) == set(IntervalMethod.__args__)

    def test_statistics(self):
        """Test the randomization test statistics"""
        assert set(STATISTICS) == {"diff_in_means", "variance_ratio"}

    def test_designs(self):
        """Test the supported designs"""
        assert DESIGNS == ("crd", "pairs", "factorial")


class TestStreamsAndExitCodes:
    """Test stream purposes and exit codes"""

    def test_stream_purposes_are_distinct(self):
        """Test that stream purposes never collide"""
        assert len({STREAM_POPULATION, STREAM_ASSIGNMENT, STREAM_RANDOMIZATION}) == 3

    def test_exit_codes(self):
        """Test the documented exit codes"""
        assert (EXIT_OK, EXIT_SIGNATURE_FAILED, EXIT_INPUT_FORMAT, EXIT_DEGENERATE, EXIT_ERROR) == (0, 1, 2, 3, 4)
