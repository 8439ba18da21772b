"""
Tests for randomization_inference.models.assignments module
"""
import pytest
from pydantic import ValidationError

from randomization_inference.models.assignments import Assignment, FactorialAssignment, PairAssignment


class TestAssignment:
    """Test Assignment model"""

    def test_from_treated(self):
        """Test building an assignment from treated indices"""
        a = Assignment.from_treated(5, [0, 3])
        assert a.labels.tolist() == [1, 0, 0, 1, 0]
        assert a.n1 == 2
        assert a.n == 5
        assert a.treated_indices == (0, 3)

    def test_count_mismatch(self):
        """Test that n1 must match the labels"""
        with pytest.raises(ValidationError, match="expected n1"):
            Assignment(labels=[1, 0, 1], n1=1)

    def test_all_treated(self):
        """Test that both arms must be nonempty"""
        with pytest.raises(ValidationError):
            Assignment(labels=[1, 1], n1=2)

    def test_frozen(self):
        """Test that an assignment cannot be reassigned"""
        a = Assignment.from_treated(3, [1])
        with pytest.raises(ValidationError):
            a.n1 = 2


class TestPairAssignment:
    """Test PairAssignment model"""

    def test_flips(self):
        """Test a valid flip vector"""
        assert PairAssignment(flips=[0, 1, 1]).n_pairs == 3

    def test_invalid_flip(self):
        """Test that flips are 0 or 1"""
        with pytest.raises(ValidationError):
            PairAssignment(flips=[0, 2])


class TestFactorialAssignment:
    """Test FactorialAssignment model"""

    def test_balanced(self):
        """Test a balanced allocation"""
        a = FactorialAssignment(cell_of_unit=[1, 0, 0, 1], k=1, r=2)
        assert a.cell_of_unit.tolist() == [1, 0, 0, 1]

    def test_unbalanced(self):
        """Test that every cell needs exactly r units"""
        with pytest.raises(ValidationError, match="exactly r"):
            FactorialAssignment(cell_of_unit=[0, 0, 0, 1], k=1, r=2)

    def test_cell_out_of_range(self):
        """Test that cell indices are bounded by 2^k"""
        with pytest.raises(ValidationError):
            FactorialAssignment(cell_of_unit=[0, 0, 2, 2], k=1, r=2)
