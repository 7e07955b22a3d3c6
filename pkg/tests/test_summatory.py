"""Tests for summatory functions and asymptotic deviations."""

import math

import numpy as np
import pytest

from sumfunc.errors.lab_errors import ConfigurationError, NotInCatalogError, RangeError
from sumfunc.metrics.distribution import empirical_value_distribution
from sumfunc.metrics.summatory import (
    asymptote_deviation,
    asymptote_for,
    prefix_series,
    running_prefix,
    write_series_csv,
)
from sumfunc.models.analysis_models import AsymptoteForm
from sumfunc.models.table_models import FunctionKind
from sumfunc.services.experiment_service import DENSITY_TOLERANCES
from sumfunc.sieve.oracle import oracle_value

DECADES = [10, 100, 1000, 10_000, 100_000]


class TestPrefixSeries:
    """Tests for checkpointed partial sums."""

    def test_mertens(self, moebius) -> None:
        """Test M(10^k) for k = 1..5."""
        assert prefix_series(moebius, DECADES).sums == [-1, 1, 2, -23, -48]

    def test_prime_counting(self, table_of) -> None:
        """Test pi(10^k) for k = 1..5."""
        table = table_of(FunctionKind.PRIME, 100_000)
        assert prefix_series(table, DECADES).sums == [4, 25, 168, 1229, 9592]

    def test_squarefree_and_divisor(self, table_of) -> None:
        """Test Q(100), Q(1000), D(10) and D(100)."""
        q = table_of(FunctionKind.SQUAREFREE, 1000)
        assert prefix_series(q, [100, 1000]).sums == [61, 608]
        d = table_of(FunctionKind.DIVISOR_COUNT, 1000)
        assert prefix_series(d, [10, 100]).sums == [27, 482]

    def test_liouville_at_ten(self, liouville) -> None:
        """Test L(10) = 0."""
        assert prefix_series(liouville, [10]).sums == [0]

    def test_real_kind_matches_oracle(self, table_of) -> None:
        """Test psi(1000) against an fsum of oracle values."""
        table = table_of(FunctionKind.VON_MANGOLDT, 1000)
        expected = math.fsum(oracle_value(FunctionKind.VON_MANGOLDT, k) for k in range(1, 1001))
        assert prefix_series(table, [1000]).sums[0] == pytest.approx(expected, rel=1e-14)

    def test_integer_sums_are_ints(self, moebius) -> None:
        """Test that integer kinds yield Python ints."""
        assert all(isinstance(s, int) for s in prefix_series(moebius, [5, 50]).sums)

    @pytest.mark.parametrize("kind", [FunctionKind.MOEBIUS, FunctionKind.DIVISOR_COUNT])
    def test_increments_recover_values(self, table_of, kind: FunctionKind) -> None:
        """Test S(n) - S(n-1) = f(n) exactly for integer kinds."""
        table = table_of(kind, 100_000)
        running = running_prefix(table, 100_000)
        assert running[0] == table[1]
        assert np.array_equal(np.diff(running), table.cells[1:].astype(np.int64))

    def test_increments_recover_real_values(self, table_of) -> None:
        """Test S(n) - S(n-1) = Lambda(n) up to rounding."""
        table = table_of(FunctionKind.VON_MANGOLDT, 100_000)
        running = running_prefix(table, 100_000)
        np.testing.assert_allclose(np.diff(running), table.cells[1:], rtol=0, atol=1e-9)

    def test_theta_below_psi(self, table_of) -> None:
        """Test theta(n) <= psi(n) for every n <= 10^5."""
        theta = running_prefix(table_of(FunctionKind.PRIME_LOG, 100_000), 100_000)
        psi = running_prefix(table_of(FunctionKind.VON_MANGOLDT, 100_000), 100_000)
        assert np.all(theta <= psi * (1 + 1e-12))
        assert psi[-1] - theta[-1] > 200

    def test_checkpoint_beyond_limit(self, moebius) -> None:
        """Test that a checkpoint above the limit is rejected."""
        with pytest.raises(RangeError):
            prefix_series(moebius, [10, 100_001])

    def test_running_prefix(self, moebius) -> None:
        """Test that running prefixes match the checkpointed sums."""
        running = running_prefix(moebius, 1000)
        assert running.dtype == np.int64
        assert running[[9, 99, 999]].tolist() == [-1, 1, 2]


class TestAsymptotes:
    """Tests for the asymptote catalog and deviations."""

    def test_catalog_lookup(self) -> None:
        """Test a few catalog entries."""
        assert asymptote_for(FunctionKind.SQUAREFREE).form is AsymptoteForm.SQUAREFREE
        assert asymptote_for(FunctionKind.PRIME_LOG).form is AsymptoteForm.LINEAR
        assert asymptote_for(FunctionKind.CONSTANT, constant=3).evaluate(10.0) == 30.0

    def test_moebius_not_cataloged(self) -> None:
        """Test that mu has no asymptote."""
        with pytest.raises(NotInCatalogError):
            asymptote_for(FunctionKind.MOEBIUS)

    def test_squarefree_density(self, table_of) -> None:
        """Test Q(x) ~ 6x/pi^2 at 10^5."""
        table = table_of(FunctionKind.SQUAREFREE, 100_000)
        series = prefix_series(table, [1000, 100_000])
        deviation = asymptote_deviation(series, asymptote_for(FunctionKind.SQUAREFREE))
        assert abs(deviation.points[-1].relative_deviation) < 1e-3

    def test_psi_at_ten(self, table_of) -> None:
        """Test psi(10) - 10 = log 2520 - 10."""
        table = table_of(FunctionKind.VON_MANGOLDT, 100)
        series = prefix_series(table, [10])
        point = asymptote_deviation(series, asymptote_for(FunctionKind.VON_MANGOLDT)).points[0]
        assert point.deviation == pytest.approx(-2.168, abs=5e-4)
        assert point.deviation == pytest.approx(math.log(2520) - 10, abs=1e-12)

    def test_constant_one_has_zero_deviation(self, table_of) -> None:
        """Test that constant 1 against A(x) = x deviates by exactly 0."""
        table = table_of(FunctionKind.CONSTANT, 10_000)
        series = prefix_series(table, [1, 10, 100, 1000, 10_000])
        deviation = asymptote_deviation(series, asymptote_for(FunctionKind.CONSTANT))
        assert [p.deviation for p in deviation.points] == [0.0] * 5
        assert [p.relative_deviation for p in deviation.points] == [0.0] * 5

    def test_mismatched_asymptote(self, moebius) -> None:
        """Test that a foreign asymptote is rejected."""
        series = prefix_series(moebius, [10])
        with pytest.raises(ConfigurationError):
            asymptote_deviation(series, asymptote_for(FunctionKind.PRIME))

    def test_write_csv(self, table_of, tmp_path) -> None:
        """Test the CSV header and row count."""
        table = table_of(FunctionKind.PRIME, 1000)
        series = prefix_series(table, [10, 100, 1000])
        path = write_series_csv(
            asymptote_deviation(series, asymptote_for(FunctionKind.PRIME)), tmp_path / "s.csv"
        )
        lines = path.read_text().splitlines()
        assert lines[0] == "n,S,deviation,relative_deviation"
        assert lines[1].startswith("10,4,")
        assert len(lines) == 4


class TestMillionScale:
    """Tests for densities and frequencies at N = 10^6."""

    def test_liouville_frequencies(self, table_of) -> None:
        """Test that lambda = +1 and -1 each occur with frequency 1/2 within 1e-3."""
        table = table_of(FunctionKind.LIOUVILLE, 1_000_000)
        distribution = empirical_value_distribution(table, 1_000_000)
        assert distribution.support == [-1.0, 1.0]
        for count in distribution.counts:
            assert abs(count / 1_000_000 - 0.5) < 1e-3

    @pytest.mark.parametrize("kind", [FunctionKind.VON_MANGOLDT, FunctionKind.PRIME_LOG])
    def test_chebyshev_density(self, table_of, kind: FunctionKind) -> None:
        """Test |psi(N)/N - 1| and |theta(N)/N - 1| against the density tolerance."""
        table = table_of(kind, 1_000_000)
        series = prefix_series(table, [1_000_000])
        point = asymptote_deviation(series, asymptote_for(kind)).points[0]
        assert abs(point.relative_deviation) < DENSITY_TOLERANCES[kind]
