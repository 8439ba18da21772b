"""
Tests for randomization_inference.harness.outputs module
"""
import json
import os

import pandas as pd
import pytest

from randomization_inference.core.constants import (
    BINARY_REPORT_FILE,
    GAP_FILE,
    INTERVALS_FILE,
    REJECTION_COLUMNS,
    REJECTIONS_FILE,
    SUMMARY_FILE,
    SWEEP_FILE,
    TESTS_FILE,
    VARIANCE_REPORT_FILE,
    VARIANCES_FILE,
)
from randomization_inference.engine.estimators import binary_report, variance_report
from randomization_inference.engine.intervals import neyman_ci
from randomization_inference.engine.testing import frt_exact, neyman_test
from randomization_inference.harness.outputs import (
    scenario_directory,
    write_analysis_outputs,
    write_gap_outputs,
    write_scenario_outputs,
)
from randomization_inference.harness.scenarios import run_scenario
from randomization_inference.models.scenario import GapReport, ScenarioConfig


class TestScenarioOutputs:
    """Test write_scenario_outputs function"""

    def test_files(self, temp_dir):
        """Test the three scenario files and their layout"""
        cfg = ScenarioConfig(name="out", design="crd", n=16, n1=8, reps=6, m=100, master_seed=1)
        paths = write_scenario_outputs(run_scenario(cfg, workers=1), temp_dir)
        assert set(paths) == {REJECTIONS_FILE, VARIANCES_FILE, SUMMARY_FILE}

        rejections = pd.read_csv(paths[REJECTIONS_FILE])
        assert rejections.columns.tolist() == REJECTION_COLUMNS
        assert rejections["valid"][0] + rejections["degenerate"][0] == 6

        variances = pd.read_csv(paths[VARIANCES_FILE])
        assert variances.columns.tolist() == ["rep_index", "v_neyman", "v_fisher"]

        with open(paths[SUMMARY_FILE]) as f:
            summary = json.load(f)
        assert summary["config"]["master_seed"] == 1
        assert summary["table"]["valid"] == rejections["valid"][0]


class TestAnalysisOutputs:
    """Test write_analysis_outputs function"""

    def test_files(self, temp_dir, binary_data):
        """Test the report, tests, intervals and binary files"""
        paths = write_analysis_outputs(
            variance_report(binary_data),
            [neyman_test(binary_data), frt_exact(binary_data)],
            [neyman_ci(binary_data)],
            temp_dir,
            binary_report(binary_data),
        )
        assert set(paths) == {VARIANCE_REPORT_FILE, TESTS_FILE, INTERVALS_FILE, BINARY_REPORT_FILE}
        tests = pd.read_csv(paths[TESTS_FILE])
        assert tests["method"].tolist() == ["neyman", "frt_exact"]
        binary = pd.read_csv(paths[BINARY_REPORT_FILE])
        assert binary["v_pooled"][0] == pytest.approx(1 / 6)

    def test_without_binary(self, temp_dir, d4):
        """Test that the binary file is optional"""
        paths = write_analysis_outputs(variance_report(d4), [neyman_test(d4)], [neyman_ci(d4)], temp_dir)
        assert BINARY_REPORT_FILE not in paths
        assert not os.path.exists(os.path.join(temp_dir, BINARY_REPORT_FILE))


class TestGapOutputs:
    """Test write_gap_outputs function"""

    @staticmethod
    def _report(size: int) -> GapReport:
        return GapReport(
            design="factorial", size=size, reps=10, empirical_gap=0.1, empirical_se=0.01,
            theoretical_gap=0.11, relative_deviation=1 / 11, scaled_gap=0.1 * size,
        )

    def test_single_report(self, temp_dir):
        """Test that one report writes only the JSON file"""
        paths = write_gap_outputs([self._report(4)], temp_dir)
        assert set(paths) == {GAP_FILE}
        with open(paths[GAP_FILE]) as f:
            assert json.load(f)["size"] == 4

    def test_sweep(self, temp_dir):
        """Test that several reports add the sweep table"""
        paths = write_gap_outputs([self._report(2), self._report(4)], temp_dir)
        sweep = pd.read_csv(paths[SWEEP_FILE])
        assert sweep["size"].tolist() == [2, 4]


class TestScenarioDirectory:
    """Test scenario_directory function"""

    def test_replaces_path_and_shell_characters(self):
        """Test that separators, spaces and quotes become underscores"""
        assert scenario_directory("out", 'example 1/a:b*c?"d"') == os.path.join("out", "example_1_a_b_c__d_")

    def test_keeps_clean_names(self):
        """Test that a built-in example name is unchanged"""
        assert scenario_directory("out", "example-2") == os.path.join("out", "example-2")

    def test_blank_name(self):
        """Test that a blank name still gives a directory"""
        assert scenario_directory("out", "  ") == os.path.join("out", "scenario")
