"""
Inference engine: populations, designs, estimators, tests, intervals and regression
"""

# Populations
from .population import (
    summarize_population,
    freeze_normal_population,
    constant_effect_population,
    observe,
    observe_pairs,
    observe_factorial,
    hajek_diagnostic,
    neyman_hajek_ratio,
    summarize_pairs,
    freeze_normal_pairs,
    canonical_cells,
    factorial_contrast,
    validate_contrast,
    summarize_factorial,
    freeze_normal_factorial
)

# Assignment mechanisms
from .design import (
    stream,
    count_crd,
    draw_crd,
    draw_crd_batch,
    enumerate_crd,
    enumerate_crd_batches,
    draw_pairs,
    enumerate_pairs,
    draw_factorial,
    draw_factorial_batch
)

# Estimators
from .estimators import (
    diff_in_means,
    variance_report,
    theorem3_gap,
    binary_gap,
    binary_report,
    variance_decomposition,
    pair_effect_report,
    estimate_pairs,
    pair_report,
    estimate_factorial,
    factorial_report,
    theorem6_gap
)

# Tests and intervals
from .testing import (
    normal_test,
    neyman_test,
    variance_ratio_statistic,
    frt_monte_carlo,
    exact_extreme_count,
    frt_exact,
    pair_sign_flip_test,
    pair_tests,
    factorial_randomization_distribution,
    factorial_tests
)
from .intervals import neyman_ci, fiducial_interval

# Regression
from .regression import (
    ols_fit,
    huber_white_variance,
    wald_hw_test,
    score_variance,
    score_test,
    score_chi_square
)
