"""Tests for standardized sums, normality diagnostics and alternating series."""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from sumfunc.errors.lab_errors import InsufficientDataError, InvalidArgumentError
from sumfunc.metrics.clt import (
    VERDICT_DEGENERATE,
    VERDICT_NORMAL,
    alternating_series_table,
    block_standardized_sums,
    clt_report,
    ks_normal_bruteforce,
    mean_decay_exponent,
    mean_decay_report,
    normality_report,
    random_sign_table,
    reference_mean_for,
    sample_moments,
    standardized_partial_sums,
)
from sumfunc.metrics.distribution import empirical_value_distribution, ks_distance
from sumfunc.metrics.summatory import prefix_series
from sumfunc.models.clt_models import SeriesRule, SeriesRuleKind, SeriesSpec, Variant
from sumfunc.models.distribution_models import STANDARD_NORMAL
from sumfunc.models.experiment_models import parse_series_rule
from sumfunc.models.table_models import FunctionKind
from sumfunc.sieve.external import external_table
from sumfunc.sieve.segmented import build_table

DEFAULT_SERIES = SeriesSpec(
    positive=parse_series_rule("geometric:1/2:1"),
    negative=parse_series_rule("geometric:1/3:-2"),
)


class TestStandardizedSums:
    """Tests for variants A, B and block replicates."""

    def test_constant_is_degenerate(self) -> None:
        """Test that a constant table has zero sigma."""
        z = standardized_partial_sums(build_table(FunctionKind.CONSTANT, 100), 100)
        assert z.degenerate
        assert not z.values.any()

    def test_variants_agree_at_n(self, liouville) -> None:
        """Test Z_n(A) == Z_n(B)."""
        a = standardized_partial_sums(liouville, 5000, Variant.PER_INDEX)
        b = standardized_partial_sums(liouville, 5000, Variant.FIXED_N)
        assert a.values[-1] == pytest.approx(b.values[-1], rel=1e-12)

    def test_block_variant_rejected(self, liouville) -> None:
        """Test that BLOCK goes through its own function."""
        with pytest.raises(InvalidArgumentError):
            standardized_partial_sums(liouville, 100, Variant.BLOCK)

    def test_sample_moments_exact(self) -> None:
        """Test mean and population sigma of +/-1."""
        assert sample_moments(np.array([1, -1, 1, -1])) == (0.0, 1.0)

    def test_block_replicates(self) -> None:
        """Test the block count and too few blocks."""
        table = random_sign_table(10_000, seed=3)
        z = block_standardized_sums(table, 10_000, block=500)
        assert z.n == 20
        assert z.variant is Variant.BLOCK
        with pytest.raises(InvalidArgumentError):
            block_standardized_sums(table, 10_000, block=6000)


class TestNormality:
    """Tests for KS distances to the standard normal."""

    def test_normal_scores(self) -> None:
        """Test that normal quantiles score at most 1e-3."""
        m = 1000
        z = special.ndtri((np.arange(1, m + 1) - 0.5) / m)
        entry = normality_report(z, window=1.0)
        assert entry.ks <= 1e-3
        assert entry.verdict == VERDICT_NORMAL

    def test_zero_sequence(self) -> None:
        """Test that z = 0 is degenerate with KS 0.5."""
        entry = normality_report(np.zeros(100), window=1.0)
        assert entry.degenerate
        assert entry.verdict == VERDICT_DEGENERATE
        assert entry.ks == 0.5

    def test_two_point(self) -> None:
        """Test +/-1 at equal mass."""
        entry = normality_report(np.array([-1.0, 1.0] * 50), window=1.0)
        assert entry.ks == pytest.approx(float(special.ndtr(1.0)) - 0.5, abs=1e-12)

    def test_window(self) -> None:
        """Test that only the trailing half enters."""
        z = np.concatenate([np.full(50, 10.0), np.zeros(50)])
        entry = normality_report(z, window=0.5)
        assert entry.size == 50
        assert entry.degenerate
        with pytest.raises(InvalidArgumentError):
            normality_report(z, window=0.0)

    def test_bruteforce_agrees(self) -> None:
        """Test the step-function KS against the pairwise count on seeded samples."""
        rng = np.random.default_rng(11)
        for _ in range(100):
            size = int(rng.integers(1, 501))
            values = rng.integers(-4, 5, size=size)
            z = values.astype(np.float64)
            expected = ks_normal_bruteforce(z)
            assert normality_report(z, window=1.0).ks == expected
            emp = empirical_value_distribution(external_table(values), size)
            assert ks_distance(emp, STANDARD_NORMAL) == expected

    def test_bruteforce_size_cap(self) -> None:
        """Test that more than 500 values are rejected."""
        with pytest.raises(InvalidArgumentError):
            ks_normal_bruteforce(np.zeros(501))

    def test_random_signs_blocks_are_normal(self) -> None:
        """Test that independent signs pass with block replicates."""
        table = random_sign_table(1_000_000, seed=0)
        z = block_standardized_sums(table, 1_000_000, block=500)
        entry = normality_report(z.values, window=1.0, tolerance=0.075)
        assert entry.verdict == VERDICT_NORMAL

    def test_clt_report_entries(self, moebius) -> None:
        """Test two entries per grid point for mu."""
        report = clt_report(moebius, [1000, 10_000])
        assert [e.label for e in report.entries] == ["variant A", "variant B"] * 2
        assert len(report.notes) == 2


class TestAlternatingSeries:
    """Tests for cancelling alternating series."""

    def test_second_partial_sum(self) -> None:
        """Test S(2) = 3/4 - 8/9 = -5/36."""
        table = alternating_series_table(DEFAULT_SERIES, 10)
        assert prefix_series(table, [2]).sums[0] == pytest.approx(-5 / 36, abs=1e-15)

    def test_closed_form(self) -> None:
        """Test measured partial sums against the closed form."""
        table = alternating_series_table(DEFAULT_SERIES, 1000)
        series = prefix_series(table, [1, 10, 100, 1000])
        for n, s in zip(series.checkpoints, series.sums):
            assert s == pytest.approx(DEFAULT_SERIES.partial_sum(n), abs=1e-12)
        assert abs(series.sums[-1]) < abs(series.sums[1])

    def test_identical_magnitudes_cancel(self) -> None:
        """Test that a_k = -b_k gives f = 0."""
        spec = SeriesSpec(
            positive=parse_series_rule("geometric:1/2:1"),
            negative=parse_series_rule("geometric:1/2:-1"),
        )
        assert not alternating_series_table(spec, 50).cells.any()

    def test_p_series(self) -> None:
        """Test p-series partial sums against the Hurwitz closed form."""
        spec = SeriesSpec(
            positive=parse_series_rule("p-series:2:1"),
            negative=parse_series_rule("p-series:2:-1"),
        )
        rule = spec.positive
        assert rule.partial_sum(100) == pytest.approx(float(np.sum(rule.terms(100))), abs=1e-12)

    def test_partial_sums_degenerate(self) -> None:
        """Test that the trailing window of S concentrates at 0."""
        table = alternating_series_table(DEFAULT_SERIES, 10_000)
        sums = np.cumsum(table.cells)
        assert normality_report(sums, window=0.5).verdict == VERDICT_DEGENERATE

    def test_sums_must_cancel(self) -> None:
        """Test that series with different sums are rejected."""
        with pytest.raises(ValidationError):
            SeriesSpec(
                positive=parse_series_rule("geometric:1/2:1"),
                negative=parse_series_rule("geometric:1/3:-1"),
            )

    def test_signs_checked(self) -> None:
        """Test that a negative positive rule is rejected."""
        with pytest.raises(ValidationError):
            SeriesSpec(
                positive=SeriesRule(rule=SeriesRuleKind.GEOMETRIC, ratio=0.5, scale=-1.0),
                negative=SeriesRule(rule=SeriesRuleKind.GEOMETRIC, ratio=0.5, scale=-1.0),
            )

    def test_rule_parameters(self) -> None:
        """Test ratio and p ranges."""
        with pytest.raises(ValidationError):
            SeriesRule(rule=SeriesRuleKind.GEOMETRIC, ratio=1.0)
        with pytest.raises(ValidationError):
            SeriesRule(rule=SeriesRuleKind.P_SERIES, p=1.0)


class TestMeanDecay:
    """Tests for the mean gap decay requirement."""

    def test_square_root_increments(self) -> None:
        """Test S(k) = sqrt(k), whose mean gap decays like n^-1/2."""
        k = np.arange(1, 100_001, dtype=np.float64)
        table = external_table(np.sqrt(k) - np.sqrt(k - 1))
        fit = mean_decay_exponent(table, [10, 100, 1000, 10_000, 100_000], 0.0)
        assert fit.slope == pytest.approx(-0.5, abs=1e-6)

    def test_zero_function(self) -> None:
        """Test that an all-zero gap cannot be fitted."""
        table = build_table(FunctionKind.CONSTANT, 1000, constant=0)
        with pytest.raises(InsufficientDataError):
            mean_decay_exponent(table, [10, 100, 1000], 0.0)

    def test_moebius_fails_condition(self, moebius) -> None:
        """Test that M(n)/n decays slower than 1/n."""
        report = mean_decay_report(moebius, [int(round(10 ** (3 + i / 5))) for i in range(11)])
        assert report.slope > -1.0
        assert report.reference_from_law
        assert report.reference_mean == 0.0

    def test_reference_means(self, divisor_count) -> None:
        """Test cataloged and fallback means."""
        assert reference_mean_for(FunctionKind.MOEBIUS) == (0.0, True)
        assert reference_mean_for(FunctionKind.CONSTANT, constant=3) == (3.0, True)
        mean, from_law = reference_mean_for(FunctionKind.DIVISOR_COUNT, divisor_count)
        assert not from_law
        assert mean > 10.0
        with pytest.raises(InvalidArgumentError):
            reference_mean_for(FunctionKind.DIVISOR_COUNT)
