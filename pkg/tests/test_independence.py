"""Tests for the asymptotic-independence statistic."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hyp_settings
from hypothesis import strategies as st

from sumfunc.errors.lab_errors import InvalidArgumentError
from sumfunc.metrics.independence import (
    classify,
    delta_closed_form,
    independence_delta,
    independence_report,
    mean_pair_product,
    pair_numerator,
    pairwise_product_bruteforce,
    product_of_means,
)
from sumfunc.models.analysis_models import Expectation, Verdict
from sumfunc.models.table_models import FunctionKind
from sumfunc.sieve.external import external_table
from sumfunc.sieve.segmented import build_table

int_vectors = st.lists(st.integers(-50, 50), min_size=2, max_size=200)


class TestStatistic:
    """Tests for the pair statistic and its two evaluation paths."""

    @pytest.mark.parametrize(
        "kind", [FunctionKind.MOEBIUS, FunctionKind.LIOUVILLE, FunctionKind.DIVISOR_COUNT]
    )
    @pytest.mark.parametrize("n", [2, 10, 500, 2000])
    def test_bruteforce_matches_identity(self, table_of, kind: FunctionKind, n: int) -> None:
        """Test that integer kinds agree exactly with the pairwise sum."""
        table = table_of(kind)
        assert pairwise_product_bruteforce(table, n) == mean_pair_product(table, n)

    def test_bruteforce_real_kind(self, table_of) -> None:
        """Test the real-valued pairwise sum against the identity."""
        table = table_of(FunctionKind.VON_MANGOLDT)
        assert pairwise_product_bruteforce(table, 300) == pytest.approx(
            mean_pair_product(table, 300), rel=1e-12
        )

    @pytest.mark.parametrize("n", [2, 3, 97, 10_000])
    def test_closed_form_identical(self, table_of, n: int) -> None:
        """Test that the difference of means and the closed form give the same double."""
        for kind in (FunctionKind.MOEBIUS, FunctionKind.VON_MANGOLDT):
            table = table_of(kind)
            assert independence_delta(table, n) == delta_closed_form(table, n)

    def test_pair_numerator_small(self, table_of) -> None:
        """Test P(4) for mu: (1 - 1 - 1 + 0)^2 - 3 = -2."""
        assert pair_numerator(table_of(FunctionKind.MOEBIUS), 4) == Fraction(-2)

    def test_constant_one(self) -> None:
        """Test delta(n) = 1/n and a product of means near 1 for f = 1."""
        table = build_table(FunctionKind.CONSTANT, 1000)
        for n in (2, 10, 1000):
            assert independence_delta(table, n) == 1 / n
            assert mean_pair_product(table, n) == 1.0
            assert product_of_means(table, n) == float(Fraction(n - 1, n))

    def test_n_below_two(self, moebius) -> None:
        """Test that n = 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            independence_delta(moebius, 1)

    def test_bruteforce_cap(self, moebius) -> None:
        """Test that the pairwise oracle stops at n = 2000."""
        with pytest.raises(InvalidArgumentError, match="2000"):
            pairwise_product_bruteforce(moebius, 2001)

    @hyp_settings(max_examples=100, deadline=None)
    @given(values=int_vectors)
    def test_sign_flip_invariance(self, values) -> None:
        """Test delta(-f) == delta(f)."""
        plus = external_table(np.array(values, dtype=np.int64))
        minus = external_table(-np.array(values, dtype=np.int64))
        n = len(values)
        assert independence_delta(plus, n) == independence_delta(minus, n)

    @hyp_settings(max_examples=100, deadline=None)
    @given(values=int_vectors, scale=st.integers(-7, 7))
    def test_quadratic_scaling(self, values, scale: int) -> None:
        """Test delta(c f) == c^2 delta(f)."""
        base = external_table(np.array(values, dtype=np.int64))
        scaled = external_table(scale * np.array(values, dtype=np.int64))
        n = len(values)
        assert independence_delta(scaled, n) == pytest.approx(
            scale**2 * independence_delta(base, n), rel=1e-14, abs=0.0
        )


class TestReport:
    """Tests for the grid report and its decay classification."""

    def test_constant_slope(self) -> None:
        """Test slope -1 for the constant function."""
        table = build_table(FunctionKind.CONSTANT, 100_000)
        report = independence_report(table, [10, 100, 1000, 10_000, 100_000])
        assert report.slope == pytest.approx(-1.0, abs=1e-9)
        assert report.verdict is Verdict.BOUNDED_BY_C_OVER_N
        assert report.expectation is Expectation.SAME_SIGN_O_1_OVER_N
        assert report.passed

    def test_moebius_decays_like_inverse_square(self, moebius) -> None:
        """Test a slope near -2 for mu."""
        grid = [int(round(10 ** (3 + i / 5))) for i in range(11)]
        report = independence_report(moebius, grid)
        assert report.slope == pytest.approx(-2.0, abs=0.2)
        assert report.expectation is Expectation.BOUNDED_O_1_OVER_N
        assert report.passed

    def test_divisor_count_vanishes(self, divisor_count) -> None:
        """Test that tau is classified as vanishing but slower than 1/n."""
        report = independence_report(divisor_count, [100, 1000, 10_000, 100_000])
        assert report.expectation is Expectation.SUBCRITICAL_GROWTH_VANISHING
        assert -1.0 < report.slope < -0.05
        assert report.passed
        assert abs(report.delta[-1]) < abs(report.delta[0])

    def test_grid_must_start_at_two(self, moebius) -> None:
        """Test that a grid starting at 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            independence_report(moebius, [1, 10, 100])

    def test_serialized_pass_alias(self) -> None:
        """Test that the report serializes its verdict as 'pass'."""
        table = build_table(FunctionKind.CONSTANT, 1000)
        dumped = independence_report(table, [10, 100, 1000]).model_dump(by_alias=True)
        assert dumped["pass"] is True


class TestClassify:
    """Tests for slope classification."""

    def test_faster_than_inverse(self) -> None:
        """Test a bounded kind decaying like 1/n^2."""
        result = classify(bounded=True, same_sign=False, growth=0.5, slope=-2.0, tolerance=0.1)
        assert result.verdict is Verdict.FASTER_THAN_1_OVER_N
        assert result.passed

    def test_bounded_too_slow(self) -> None:
        """Test a bounded kind decaying like n^-1/2 fails."""
        result = classify(bounded=True, same_sign=False, growth=0.5, slope=-0.5, tolerance=0.1)
        assert result.verdict is Verdict.VANISHING
        assert not result.passed

    def test_no_claim(self) -> None:
        """Test that fast growth of unbounded summands carries no expectation."""
        result = classify(bounded=False, same_sign=False, growth=2.0, slope=0.0, tolerance=0.1)
        assert result.verdict is Verdict.NON_VANISHING
        assert result.expectation is Expectation.NO_CLAIM
        assert result.passed
