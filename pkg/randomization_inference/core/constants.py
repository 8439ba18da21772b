"""
Constants for the randomization inference engine
"""

# Test statistics accepted by the randomization tests
STATISTIC_DIFF_IN_MEANS = "diff_in_means"
STATISTIC_VARIANCE_RATIO = "variance_ratio"

STATISTICS = {
    STATISTIC_DIFF_IN_MEANS: "Difference in arm means, two-sided on |value|",
    STATISTIC_VARIANCE_RATIO: "Ratio of treated to control sample variance, two-sided on |log value|",
}

# Test result methods
TEST_METHODS = {
    "neyman": "Normal approximation with the Neymanian variance estimator",
    "frt_mc": "Fisher randomization test, Monte Carlo reference distribution",
    "frt_exact": "Fisher randomization test, exhaustive reference distribution",
    "frt_var_ratio": "Fisher randomization test with the variance-ratio statistic",
    "pair_neyman": "Matched-pair normal approximation with the Neymanian variance",
    "pair_frt": "Matched-pair sign-flip randomization test",
    "pair_frt_normal": "Matched-pair normal approximation with the sharp-null variance",
    "factorial_neyman": "Factorial normal approximation with the Neymanian variance",
    "factorial_frt": "Factorial randomization test with the contrast statistic",
    "wald_hw": "Wald test with the Huber-White variance of the two-group regression",
    "score": "Rao score test of the two-group regression",
}

# Interval methods
INTERVAL_METHODS = {
    "neyman_ci": "Symmetric normal interval with the Neymanian variance",
    "fiducial": "Constant effects not rejected by the randomization test",
}

# Experimental designs
DESIGNS = ("crd", "pairs", "factorial")

# Random stream purposes, the last element of every stream path
STREAM_POPULATION = 0
STREAM_ASSIGNMENT = 1
STREAM_RANDOMIZATION = 2

# Fiducial search
FIDUCIAL_GRID_POINTS = 201
FIDUCIAL_GRID_HALF_WIDTH = 10.0
FIDUCIAL_TOLERANCE = 1e-4

# CSV layouts
VARIANCE_REPORT_COLUMNS = [
    "tau_hat", "v_neyman", "v_fisher", "v_ols", "v_hw", "v_score", "v_improved", "s1sq", "s0sq", "ssq",
]
TEST_RESULT_COLUMNS = ["method", "statistic", "p_value", "m_draws"]
INTERVAL_RESULT_COLUMNS = ["method", "level", "lower", "upper"]
BINARY_REPORT_COLUMNS = ["p1_hat", "p0_hat", "p_hat", "v_unpooled", "v_pooled"]
REJECTION_COLUMNS = [
    "keep_keep", "keep_reject", "reject_keep", "reject_reject",
    "valid", "degenerate", "neyman_rate", "neyman_se", "fisher_rate", "fisher_se",
]
SCATTER_COLUMNS = ["rep_index", "v_neyman", "v_fisher"]
POTENTIAL_TABLE_COLUMNS = ["y1", "y0"]
PAIR_TABLE_COLUMNS = ["y11_t", "y11_c", "y12_t", "y12_c"]
OBSERVED_COLUMNS = ["yobs", "t"]

# Output file names
REJECTIONS_FILE = "rejections.csv"
VARIANCES_FILE = "variances.csv"
SUMMARY_FILE = "summary.json"
VARIANCE_REPORT_FILE = "variance_report.csv"
TESTS_FILE = "tests.csv"
INTERVALS_FILE = "intervals.csv"
BINARY_REPORT_FILE = "binary_report.csv"
GAP_FILE = "gap_check.json"
SWEEP_FILE = "gap_sweep.csv"
GAP_COLUMNS = [
    "design", "size", "reps", "empirical_gap", "empirical_se", "theoretical_gap", "relative_deviation", "scaled_gap",
]

# CLI exit codes
EXIT_OK = 0
EXIT_SIGNATURE_FAILED = 1
EXIT_INPUT_FORMAT = 2
EXIT_DEGENERATE = 3
EXIT_ERROR = 4

# Randomization kernels: decimal places tried before falling back to a binary grid
DECIMAL_GRID_DIGITS = 9
