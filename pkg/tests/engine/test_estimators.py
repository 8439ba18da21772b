"""
Tests for randomization_inference.engine.estimators module
"""
import numpy as np
import pytest

from randomization_inference.core.exceptions import InsufficientDataError, ParameterError
from randomization_inference.engine.design import enumerate_crd, stream
from randomization_inference.engine.estimators import (
    binary_gap,
    binary_report,
    diff_in_means,
    estimate_factorial,
    estimate_pairs,
    factorial_report,
    pair_effect_report,
    pair_report,
    theorem3_gap,
    theorem6_gap,
    variance_decomposition,
    variance_report,
)
from randomization_inference.engine.design import draw_factorial
from randomization_inference.engine.population import (
    constant_effect_population,
    factorial_contrast,
    freeze_normal_population,
    observe,
    summarize_population,
)
from randomization_inference.models.assignments import PairAssignment
from randomization_inference.models.population import ObservedData, PairObservedData, PopulationSummary


class TestVarianceReport:
    """Test variance_report on the four-unit dataset"""

    def test_point_estimate(self, d4):
        """Test the difference in means"""
        assert diff_in_means(d4) == pytest.approx(-2.0)

    def test_all_estimators(self, d4):
        """Test every variance estimator against hand-computed values"""
        report = variance_report(d4)
        assert report.tau_hat == pytest.approx(-2.0)
        assert report.v_neyman == pytest.approx(0.5)
        assert report.v_fisher == pytest.approx(5 / 3)
        assert report.v_ols == pytest.approx(0.5)
        assert report.v_hw == pytest.approx(0.25)
        assert report.v_score == pytest.approx(1.25)
        assert report.v_improved == pytest.approx(0.5)
        assert (report.s1sq, report.s0sq) == pytest.approx((0.5, 0.5))
        assert report.ssq == pytest.approx(5 / 3)

    def test_score_fisher_ratio(self, d4):
        """Test v_score = (N-1)/N v_fisher"""
        report = variance_report(d4)
        assert report.v_score == pytest.approx(report.v_fisher * 3 / 4)

    def test_ols_equals_neyman_when_balanced(self):
        """Test that OLS and Neyman variances coincide when N1 = N0"""
        d = ObservedData(yobs=[1.0, 4.0, 2.0, 0.5, 3.0, 7.0], t=[1, 1, 1, 0, 0, 0])
        report = variance_report(d)
        assert report.v_ols == pytest.approx(report.v_neyman)

    def test_hw_below_neyman(self):
        """Test that the Huber-White variance never exceeds the Neymanian one"""
        d = ObservedData(yobs=[1.0, 4.0, 2.0, 0.5, 3.0, 7.0, 2.2], t=[1, 1, 1, 1, 0, 0, 0])
        report = variance_report(d)
        assert report.v_hw <= report.v_neyman

    def test_singleton_arm(self):
        """Test that a one-unit arm is insufficient and named"""
        d = ObservedData(yobs=[1.0, 2.0, 3.0], t=[1, 0, 0])
        with pytest.raises(InsufficientDataError) as exc_info:
            variance_report(d)
        assert exc_info.value.arm == "treated"

    def test_factorial_data_refused(self, factorial_observed):
        """Test that cell-labelled data is not completely randomized data"""
        with pytest.raises(ParameterError):
            variance_report(factorial_observed)


class TestGapFormulas:
    """Test the leading-order variance gaps"""

    def test_theorem3_gap(self):
        """Test (1/N0 - 1/N1)(S1^2 - S0^2) + tau^2/N"""
        summary = PopulationSummary(n=10, tau=1, ybar1=1, ybar0=0, s1sq=2, s0sq=1, stausq=0, s10=1)
        assert theorem3_gap(summary, 4, 6) == pytest.approx(-1 / 12 + 0.1)

    def test_theorem3_gap_balanced_is_nonnegative(self):
        """Test that a balanced design leaves only tau^2/N"""
        summary = PopulationSummary(n=10, tau=0.5, ybar1=0.5, ybar0=0, s1sq=4, s0sq=1, stausq=0, s10=1)
        assert theorem3_gap(summary, 5, 5) == pytest.approx(0.025)

    def test_binary_gap(self):
        """Test the proportion version of the gap"""
        assert binary_gap(0.5, 0.5, 5, 5) == pytest.approx(0.0)
        assert binary_gap(0.8, 0.2, 4, 6) == pytest.approx(0.36 / 10)

    def test_theorem6_gap(self):
        """Test the factorial gap on cell means (2, 3, 6, 7)"""
        assert theorem6_gap([2, 3, 6, 7], 2, 2) == pytest.approx(136 / 64)

    def test_theorem6_gap_equal_means(self):
        """Test that equal cell means have no gap"""
        assert theorem6_gap([1, 1, 1, 1], 2, 5) == 0.0

    def test_theorem6_gap_length(self):
        """Test that one mean per cell is required"""
        with pytest.raises(ParameterError):
            theorem6_gap([1, 2, 3], 2, 2)

    def test_theorem3_gap_matches_enumeration(self):
        """Test the gap against the exact mean over all assignments of a moderate population"""
        pop = freeze_normal_population(14, 0.8, 2.0, 0.0, 0.5, seed=11, exact_moments=True)
        gaps = []
        for a in enumerate_crd(14, 9):
            report = variance_report(observe(pop, a))
            gaps.append(report.v_fisher - report.v_neyman)
        theoretical = theorem3_gap(summarize_population(pop), 9, 5)
        assert np.mean(gaps) == pytest.approx(theoretical, rel=0.2)


class TestBinaryReport:
    """Test binary_report function"""

    def test_pooled_and_unpooled(self, binary_data):
        """Test the two-proportion variances"""
        report = binary_report(binary_data)
        assert report.p1_hat == pytest.approx(2 / 3)
        assert report.p0_hat == pytest.approx(1 / 3)
        assert report.p_hat == pytest.approx(0.5)
        assert report.v_unpooled == pytest.approx(4 / 27)
        assert report.v_pooled == pytest.approx(1 / 6)
        assert report.constant_arms == []

    def test_inherits_variance_report(self, binary_data):
        """Test that the general estimators are included"""
        report = binary_report(binary_data)
        assert report.v_neyman == pytest.approx(variance_report(binary_data).v_neyman)
        assert set(report.to_binary_row()) == {"p1_hat", "p0_hat", "p_hat", "v_unpooled", "v_pooled"}

    def test_constant_arm_flagged(self):
        """Test that an all-ones arm is flagged rather than refused"""
        d = ObservedData(yobs=[1, 1, 0, 1], t=[1, 1, 0, 0])
        assert binary_report(d).constant_arms == ["treated"]

    def test_non_binary(self, d4):
        """Test that outcomes other than 0/1 are refused"""
        with pytest.raises(ParameterError, match="0 or 1"):
            binary_report(d4)


class TestVarianceDecomposition:
    """Test variance_decomposition function"""

    def test_sides_agree(self, d4):
        """Test the total sum of squares split"""
        lhs, rhs = variance_decomposition(d4)
        assert lhs == pytest.approx(5.0)
        assert rhs == pytest.approx(lhs)

    def test_random_data(self, rng):
        """Test the identity on arbitrary data"""
        d = ObservedData(yobs=rng.normal(size=30), t=[1] * 12 + [0] * 18)
        lhs, rhs = variance_decomposition(d)
        assert rhs == pytest.approx(lhs)


class TestPairEstimates:
    """Test matched-pair estimators"""

    def test_pair_effect_report(self):
        """Test mean, Neymanian and sharp-null variances"""
        report = pair_effect_report([1.0, 2.0, 3.0])
        assert report.tau_hat == pytest.approx(2.0)
        assert report.v_neyman == pytest.approx(1 / 3)
        assert report.v_fisher == pytest.approx(14 / 9)
        assert report.n_pairs == 3

    def test_too_few_pairs(self):
        """Test that one pair is insufficient"""
        with pytest.raises(InsufficientDataError) as exc_info:
            pair_effect_report([1.0])
        assert exc_info.value.arm == "pairs"

    def test_estimate_pairs_signs(self):
        """Test treated-minus-control differences for both flip values"""
        observed = PairObservedData(y_obs=[[5.0, 2.0], [1.0, 4.0]], flips=[1, 0])
        assert estimate_pairs(observed).per_pair.tolist() == [3.0, 3.0]

    def test_pair_report(self, pair_table):
        """Test the estimates a flip vector reveals"""
        report = pair_report(pair_table, PairAssignment(flips=[1, 1, 1]))
        assert report.per_pair.tolist() == pytest.approx([0.5, 0.5, -0.5])


class TestFactorialEstimates:
    """Test factorial estimators"""

    def test_main_effect(self, factorial_observed):
        """Test estimate and variances for the first main effect"""
        report = estimate_factorial(factorial_observed, 2, 2)
        assert report.cell_means.tolist() == pytest.approx([2, 3, 6, 7])
        assert report.cell_vars.tolist() == pytest.approx([2, 2, 2, 2])
        assert report.tau1_hat == pytest.approx(-4.0)
        assert report.v1_neyman == pytest.approx(1.0)
        assert report.v1_fisher == pytest.approx(3.0)

    def test_second_main_effect(self, factorial_observed):
        """Test a different contrast on the same data"""
        report = estimate_factorial(factorial_observed, 2, 2, factorial_contrast(2, (1,)))
        assert report.tau1_hat == pytest.approx(0.5 * (2 - 3 + 6 - 7))

    def test_cell_with_one_unit(self):
        """Test that a cell with fewer than 2 units is named"""
        d = ObservedData(yobs=[1, 2, 3, 4], t=[0, 0, 0, 1], design="factorial")
        with pytest.raises(InsufficientDataError) as exc_info:
            estimate_factorial(d, 1, 2)
        assert exc_info.value.arm == "cell 1"

    def test_unbalanced(self):
        """Test that unequal cell sizes are refused"""
        d = ObservedData(yobs=[1, 2, 3, 4, 5], t=[0, 0, 0, 1, 1], design="factorial")
        with pytest.raises(ParameterError, match="r=2"):
            estimate_factorial(d, 1, 2)

    def test_crd_data_refused(self, d4):
        """Test that 0/1 completely randomized data is refused"""
        with pytest.raises(ParameterError):
            estimate_factorial(d4, 1, 2)

    def test_factorial_report_is_unbiased(self, factorial_table):
        """Test that the estimate averages to the factorial effect over allocations"""
        rng = stream(3, 1)
        estimates = [factorial_report(factorial_table, draw_factorial(2, 2, rng)).tau1_hat for _ in range(4000)]
        assert np.mean(estimates) == pytest.approx(2.0, abs=0.15)


def _random_design(rng):
    """Arbitrary outcomes with arms of at least two units"""
    n = int(rng.integers(4, 60))
    n1 = int(rng.integers(2, n - 1))
    t = np.zeros(n, dtype=int)
    t[rng.choice(n, size=n1, replace=False)] = 1
    y = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), size=n)
    return ObservedData(yobs=y, t=t)


class TestIdentitiesOnRandomInputs:
    """Test exact algebraic identities between the estimators on many random inputs"""

    def test_score_variance_is_scaled_fisher_variance(self, rng):
        """Test v_score = (N - 1)/N v_fisher"""
        for _ in range(1000):
            d = _random_design(rng)
            report = variance_report(d)
            assert report.v_score == pytest.approx((d.n - 1) / d.n * report.v_fisher, rel=1e-10)

    def test_sum_of_squares_decomposition(self, rng):
        """Test (N-1)s^2 = within-arm plus between-arm sums of squares"""
        for _ in range(1000):
            lhs, rhs = variance_decomposition(_random_design(rng))
            assert rhs == pytest.approx(lhs, rel=1e-10)

    def test_pair_variance_identity(self, rng):
        """Test v_fisher - v_neyman = (tau_hat^2 - v_fisher)/(N - 1) for matched pairs"""
        for _ in range(1000):
            n_pairs = int(rng.integers(2, 80))
            report = pair_effect_report(rng.normal(rng.uniform(-2, 2), rng.uniform(0.1, 5), size=n_pairs))
            lhs = report.v_fisher - report.v_neyman
            rhs = (report.tau_hat ** 2 - report.v_fisher) / (n_pairs - 1)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * report.v_fisher)


def _enumerated_reports(pop, n1):
    return [variance_report(observe(pop, a)) for a in enumerate_crd(pop.n, n1)]


class TestEnumeratedMoments:
    """Test unbiasedness and conservativeness over every assignment of small populations"""

    def test_difference_in_means_is_unbiased(self, small_population):
        """Test that the mean of tau_hat over all assignments is tau"""
        taus = [r.tau_hat for r in _enumerated_reports(small_population, 4)]
        assert np.mean(taus) == pytest.approx(summarize_population(small_population).tau, abs=1e-12)

    def test_neyman_variance_is_conservative(self, small_population):
        """Test E(v_neyman) = var(tau_hat) + S_tau^2/N with a positive effect variance"""
        reports = _enumerated_reports(small_population, 4)
        summary = summarize_population(small_population)
        true_variance = np.var([r.tau_hat for r in reports])
        assert true_variance == pytest.approx(summary.sampling_variance(4, 6), rel=1e-10)
        expected_neyman = np.mean([r.v_neyman for r in reports])
        assert summary.stausq > 0
        assert expected_neyman == pytest.approx(true_variance + summary.stausq / 10, rel=1e-10)
        assert expected_neyman > true_variance

    def test_neyman_variance_is_exact_for_constant_effects(self):
        """Test E(v_neyman) = var(tau_hat) when every unit has the same effect"""
        pop = constant_effect_population(np.arange(12.0) ** 1.5, 2.0)
        reports = _enumerated_reports(pop, 5)
        assert np.mean([r.v_neyman for r in reports]) == pytest.approx(np.var([r.tau_hat for r in reports]), rel=1e-10)

    def test_assignment_moments(self):
        """Test E(T_i) = N1/N and cov(T_i, T_j) = -N1 N0/(N^2 (N - 1))"""
        n, n1 = 9, 4
        labels = np.array([a.labels for a in enumerate_crd(n, n1)], dtype=float)
        assert labels.mean(axis=0) == pytest.approx(np.full(n, n1 / n))
        cov = np.cov(labels, rowvar=False, ddof=0)
        off_diagonal = cov[~np.eye(n, dtype=bool)]
        assert off_diagonal == pytest.approx(np.full(n * (n - 1), -n1 * (n - n1) / (n ** 2 * (n - 1))))
        assert np.diag(cov) == pytest.approx(np.full(n, n1 * (n - n1) / n ** 2))
