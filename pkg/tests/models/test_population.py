"""
Tests for randomization_inference.models.population module
"""
import numpy as np
import pytest
from pydantic import ValidationError

from randomization_inference.models.population import (
    FactorialTable,
    MatchedPairTable,
    ObservedData,
    PairObservedData,
    PopulationSummary,
    PotentialTable,
)


class TestPotentialTable:
    """Test PotentialTable model"""

    def test_effects_and_size(self):
        """Test unit effects and size"""
        pop = PotentialTable(y1=[2, 3, 5], y0=[1, 1, 1])
        assert pop.n == 3
        assert pop.tau_i.tolist() == [1.0, 2.0, 4.0]

    def test_arrays_are_read_only(self):
        """Test that frozen tables cannot be mutated in place"""
        pop = PotentialTable(y1=[2, 3], y0=[1, 1])
        with pytest.raises(ValueError):
            pop.y1[0] = 10.0

    def test_length_mismatch(self):
        """Test that columns must have equal length"""
        with pytest.raises(ValidationError, match="equal length"):
            PotentialTable(y1=[1, 2, 3], y0=[1, 2])

    def test_single_unit(self):
        """Test that a one-unit population is degenerate"""
        with pytest.raises(ValidationError, match="at least 2 units"):
            PotentialTable(y1=[1], y0=[0])

    def test_non_finite(self):
        """Test that non-finite outcomes are refused"""
        with pytest.raises(ValidationError, match="non-finite"):
            PotentialTable(y1=[1, np.nan], y0=[0, 0])


class TestPopulationSummary:
    """Test PopulationSummary model"""

    def test_sampling_variance(self):
        """Test S1^2/N1 + S0^2/N0 - S_tau^2/N"""
        summary = PopulationSummary(n=10, tau=1, ybar1=1, ybar0=0, s1sq=2, s0sq=1, stausq=0.5, s10=1.25)
        assert summary.sampling_variance(4, 6) == pytest.approx(2 / 4 + 1 / 6 - 0.05)

    def test_sampling_variance_needs_partition(self):
        """Test that arm sizes must add up to N"""
        summary = PopulationSummary(n=10, tau=0, ybar1=0, ybar0=0, s1sq=1, s0sq=1, stausq=0, s10=1)
        with pytest.raises(ValueError, match="partition"):
            summary.sampling_variance(4, 5)


class TestMatchedPairTable:
    """Test MatchedPairTable model"""

    def test_shape(self, pair_table):
        """Test the pair count"""
        assert pair_table.n_pairs == 3

    def test_wrong_shape(self):
        """Test that the trailing axes must be (2, 2)"""
        with pytest.raises(ValidationError, match="shape"):
            MatchedPairTable(y=np.zeros((3, 2, 3)))

    def test_single_pair(self):
        """Test that one pair is degenerate"""
        with pytest.raises(ValidationError, match="at least 2 pairs"):
            MatchedPairTable(y=np.zeros((1, 2, 2)))


class TestFactorialTable:
    """Test FactorialTable model"""

    def test_properties(self, factorial_table):
        """Test cell count, size and the first main-effect contrast"""
        assert factorial_table.j_cells == 4
        assert factorial_table.n == 8
        assert factorial_table.g1.tolist() == [1, 1, -1, -1]

    def test_shape_must_match(self):
        """Test that the table must be (r 2^k, 2^k)"""
        with pytest.raises(ValidationError, match="shape"):
            FactorialTable(k=2, r=2, y=np.zeros((6, 4)))

    def test_r_at_least_two(self):
        """Test that r = 1 is refused"""
        with pytest.raises(ValidationError):
            FactorialTable(k=1, r=1, y=np.zeros((2, 2)))


class TestObservedData:
    """Test ObservedData model"""

    def test_arms(self, d4):
        """Test arm sizes and outcomes"""
        assert (d4.n, d4.n1, d4.n0) == (4, 2, 2)
        assert d4.treated.tolist() == [1.0, 2.0]
        assert d4.control.tolist() == [3.0, 4.0]

    def test_labels_must_be_binary(self):
        """Test that CRD labels are 0 or 1"""
        with pytest.raises(ValidationError, match="0 or 1"):
            ObservedData(yobs=[1, 2, 3], t=[0, 1, 2])

    def test_empty_treated_arm(self):
        """Test that an empty treated arm is insufficient data"""
        with pytest.raises(ValidationError, match="treated arm is empty"):
            ObservedData(yobs=[1, 2], t=[0, 0])

    def test_empty_control_arm(self):
        """Test that an empty control arm is insufficient data"""
        with pytest.raises(ValidationError, match="control arm is empty"):
            ObservedData(yobs=[1, 2], t=[1, 1])

    def test_non_integer_labels(self):
        """Test that fractional labels are refused"""
        with pytest.raises(ValidationError):
            ObservedData(yobs=[1, 2], t=[0.5, 1])

    def test_factorial_labels(self, factorial_observed):
        """Test that factorial data accepts cell indices"""
        assert factorial_observed.design == "factorial"
        assert factorial_observed.t.max() == 3


class TestPairObservedData:
    """Test PairObservedData model"""

    def test_shape(self):
        """Test one flip per pair"""
        obs = PairObservedData(y_obs=[[1, 2], [3, 4]], flips=[1, 0])
        assert obs.n_pairs == 2

    def test_flip_count_mismatch(self):
        """Test that flips must match the pair count"""
        with pytest.raises(ValidationError):
            PairObservedData(y_obs=[[1, 2], [3, 4]], flips=[1])
