"""
Writers for scenario and analysis outputs
"""
import logging
import os
import re
from typing import Dict, List, Optional, Sequence

from ..core.constants import (
    BINARY_REPORT_COLUMNS,
    BINARY_REPORT_FILE,
    GAP_COLUMNS,
    GAP_FILE,
    INTERVAL_RESULT_COLUMNS,
    INTERVALS_FILE,
    REJECTION_COLUMNS,
    REJECTIONS_FILE,
    SCATTER_COLUMNS,
    SUMMARY_FILE,
    SWEEP_FILE,
    TEST_RESULT_COLUMNS,
    TESTS_FILE,
    VARIANCE_REPORT_COLUMNS,
    VARIANCE_REPORT_FILE,
    VARIANCES_FILE,
)
from ..models.reports import BinaryReport, VarianceReport
from ..models.results import IntervalResult, TestResult
from ..models.scenario import GapReport, ScenarioResult
from ..utils.file_utils import write_json, write_rows_csv

logger = logging.getLogger(__name__)

# Characters replaced in scenario directory names
UNSAFE_NAME_CHARS = re.compile(r"[^\w.-]")


def scenario_directory(output_dir: str, name: str) -> str:
    """
    Directory of one scenario's outputs, its name reduced to letters, digits, dot, dash and underscore

    Args:
        output_dir: Parent output directory
        name: Scenario name

    Returns:
        str: output_dir/<safe name>
    """
    safe = UNSAFE_NAME_CHARS.sub("_", name.strip()) or "scenario"
    return os.path.join(output_dir, safe)


def write_scenario_outputs(result: ScenarioResult, output_dir: str) -> Dict[str, str]:
    """
    Write rejections.csv, variances.csv and summary.json

    Args:
        result: Scenario result
        output_dir: Target directory, created if missing

    Returns:
        Dict[str, str]: Written paths by file name
    """
    paths = {
        REJECTIONS_FILE: write_rows_csv(
            [result.table.to_row()], os.path.join(output_dir, REJECTIONS_FILE), REJECTION_COLUMNS
        ),
        VARIANCES_FILE: write_rows_csv(
            [row.model_dump() for row in result.scatter], os.path.join(output_dir, VARIANCES_FILE), SCATTER_COLUMNS
        ),
        SUMMARY_FILE: write_json(
            {**result.summary.model_dump(mode="python"), "table": result.table.to_row()},
            os.path.join(output_dir, SUMMARY_FILE),
        ),
    }
    logger.info(f"Wrote scenario outputs to {output_dir}")
    return paths


def write_analysis_outputs(
    report: VarianceReport,
    tests: Sequence[TestResult],
    intervals: Sequence[IntervalResult],
    output_dir: str,
    binary: Optional[BinaryReport] = None,
) -> Dict[str, str]:
    """
    Write the variance report, test results and intervals of one dataset

    Args:
        report: Variance report
        tests: Test results
        intervals: Interval estimates
        output_dir: Target directory
        binary: Proportion report for 0/1 outcomes

    Returns:
        Dict[str, str]: Written paths by file name
    """
    paths = {
        VARIANCE_REPORT_FILE: write_rows_csv(
            [report.to_row()], os.path.join(output_dir, VARIANCE_REPORT_FILE), VARIANCE_REPORT_COLUMNS
        ),
        TESTS_FILE: write_rows_csv(
            [t.to_row() for t in tests], os.path.join(output_dir, TESTS_FILE), TEST_RESULT_COLUMNS
        ),
        INTERVALS_FILE: write_rows_csv(
            [i.to_row() for i in intervals], os.path.join(output_dir, INTERVALS_FILE), INTERVAL_RESULT_COLUMNS
        ),
    }
    if binary is not None:
        paths[BINARY_REPORT_FILE] = write_rows_csv(
            [binary.to_binary_row()], os.path.join(output_dir, BINARY_REPORT_FILE), BINARY_REPORT_COLUMNS
        )
    return paths


def write_gap_outputs(reports: List[GapReport], output_dir: str) -> Dict[str, str]:
    """
    Write gap_check.json for the first report and gap_sweep.csv for all of them

    Args:
        reports: One or more gap reports
        output_dir: Target directory

    Returns:
        Dict[str, str]: Written paths by file name
    """
    paths = {GAP_FILE: write_json(reports[0].model_dump(), os.path.join(output_dir, GAP_FILE))}
    if len(reports) > 1:
        paths[SWEEP_FILE] = write_rows_csv(
            [r.model_dump() for r in reports], os.path.join(output_dir, SWEEP_FILE), GAP_COLUMNS
        )
    return paths
