"""
Tests for randomization_inference.models.scenario module
"""
import math

import pytest
from pydantic import ValidationError

from randomization_inference.core.constants import REJECTION_COLUMNS
from randomization_inference.models.scenario import PopulationSpec, RejectionTable, ScenarioConfig, SweepPoint


class TestPopulationSpec:
    """Test PopulationSpec model"""

    def test_defaults(self):
        """Test the default normal population"""
        spec = PopulationSpec()
        assert spec.source == "normal"
        assert spec.var1 == pytest.approx(1 / 16)

    def test_csv_needs_path(self):
        """Test that a csv population names its file"""
        with pytest.raises(ValidationError, match="needs a path"):
            PopulationSpec(source="csv")

    def test_positive_variance(self):
        """Test that variances are positive"""
        with pytest.raises(ValidationError):
            PopulationSpec(var1=0)


class TestScenarioConfig:
    """Test ScenarioConfig model"""

    def test_crd(self):
        """Test a valid completely randomized scenario"""
        cfg = ScenarioConfig(design="crd", n=10, n1=4, master_seed=1)
        assert cfg.n0 == 6
        assert cfg.reps == 1000

    def test_crd_needs_sizes(self):
        """Test that n and n1 are required"""
        with pytest.raises(ValidationError, match="needs n and n1"):
            ScenarioConfig(design="crd", master_seed=1)

    def test_crd_arm_range(self):
        """Test that both arms are nonempty"""
        with pytest.raises(ValidationError, match="must lie in"):
            ScenarioConfig(design="crd", n=10, n1=10, master_seed=1)

    def test_seed_required(self):
        """Test that the master seed has no default"""
        with pytest.raises(ValidationError):
            ScenarioConfig(design="crd", n=10, n1=5)

    def test_pairs_need_count(self):
        """Test that a pairs scenario needs n_pairs"""
        with pytest.raises(ValidationError, match="n_pairs"):
            ScenarioConfig(design="pairs", master_seed=1)

    def test_factorial_contrast_factors(self):
        """Test that contrast factors are bounded by k"""
        with pytest.raises(ValidationError, match="Contrast factors"):
            ScenarioConfig(design="factorial", k=2, r=3, contrast_factors=(2,), master_seed=1)

    def test_factorial_cell_means_length(self):
        """Test that cell_means has 2^k entries"""
        with pytest.raises(ValidationError, match="cell_means"):
            ScenarioConfig(
                design="factorial", k=2, r=3, master_seed=1,
                population=PopulationSpec(cell_means=[0.0, 1.0]),
            )

    def test_variance_ratio_only_for_crd(self):
        """Test that the variance-ratio statistic needs a crd design"""
        with pytest.raises(ValidationError, match="crd scenarios only"):
            ScenarioConfig(design="pairs", n_pairs=5, statistic="variance_ratio", master_seed=1)

    def test_nested_population_from_dict(self):
        """Test validating a JSON-like document"""
        cfg = ScenarioConfig.model_validate({
            "design": "crd", "n": 20, "n1": 10, "master_seed": 3,
            "population": {"mu1": 0.5, "exact_moments": True},
        })
        assert cfg.population.mu1 == 0.5
        assert cfg.population.exact_moments


class TestRejectionTable:
    """Test RejectionTable model"""

    def test_from_decisions(self):
        """Test cross-tabulation of decision pairs"""
        table = RejectionTable.from_decisions(
            [(False, False), (False, True), (True, False), (True, True), (True, True)], degenerate=2
        )
        assert (table.keep_keep, table.keep_reject, table.reject_keep, table.reject_reject) == (1, 1, 1, 2)
        assert table.valid == 5
        assert table.total == 7
        assert table.neyman_rate == pytest.approx(3 / 5)
        assert table.fisher_rate == pytest.approx(3 / 5)
        assert table.neyman_se == pytest.approx(math.sqrt(0.6 * 0.4 / 5))

    def test_addition(self):
        """Test that tables add cellwise"""
        a = RejectionTable(keep_keep=1, reject_reject=2, degenerate=1)
        b = RejectionTable(keep_keep=3, keep_reject=1)
        total = a + b
        assert (total.keep_keep, total.keep_reject, total.reject_reject, total.degenerate) == (4, 1, 2, 1)

    def test_empty_rates_are_nan(self):
        """Test that rates are undefined without valid replications"""
        table = RejectionTable(degenerate=3)
        assert math.isnan(table.neyman_rate)
        assert math.isnan(table.fisher_se)

    def test_to_row(self):
        """Test the CSV row layout"""
        assert list(RejectionTable(keep_keep=1).to_row()) == REJECTION_COLUMNS


class TestSweepPoint:
    """Test SweepPoint model"""

    def test_difference(self):
        """Test the Neyman minus Fisher power"""
        point = SweepPoint(n=10, tau=0.1, neyman_power=0.3, fisher_power=0.25, neyman_se=0.01, fisher_se=0.01)
        assert point.difference == pytest.approx(0.05)
