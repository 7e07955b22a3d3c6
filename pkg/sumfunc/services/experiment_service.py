"""Business logic for running named experiments."""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Dict, Iterator, List

from sumfunc import __version__
from sumfunc.config import thread_budget
from sumfunc.errors.lab_errors import (
    CacheNotFoundError,
    ConfigurationError,
    IntegrityError,
    NotInCatalogError,
)
from sumfunc.metrics.charfun import (
    empirical_charfun,
    limit_remainder,
    product_charfun_compare,
    remainder_ratio_profile,
    taylor_check,
    write_charfun_csv,
)
from sumfunc.metrics.clt import (
    ALTERNATING_NOTE,
    SIGMA_NOTE,
    VERDICT_NORMAL,
    alternating_series_table,
    block_standardized_sums,
    clt_report,
    mean_decay_report,
    normality_report,
    random_sign_table,
    standardized_partial_sums,
    write_z_csv,
)
from sumfunc.metrics.distribution import (
    empirical_value_distribution,
    ks_distance,
    limit_step_distribution,
    moment,
)
from sumfunc.metrics.independence import independence_report
from sumfunc.metrics.summatory import (
    asymptote_deviation,
    asymptote_for,
    prefix_series,
    running_prefix,
    write_series_csv,
)
from sumfunc.models.analysis_models import DensityReport
from sumfunc.models.clt_models import AlternatingReport, PartialSumCheck, Variant
from sumfunc.models.distribution_models import (
    CharFunReport,
    KsReport,
    RatioPoint,
    TaylorReport,
)
from sumfunc.models.experiment_models import (
    ExperimentConfig,
    ExperimentId,
    OutputRecord,
    RunManifest,
)
from sumfunc.models.table_models import FunctionKind, FunctionTable
from sumfunc.services.store import TableStore, store
from sumfunc.sieve.segmented import build_table
from sumfunc.utils.checksum import file_sha256
from sumfunc.utils.output import write_json

logger = logging.getLogger(__name__)

CLAIMS: Dict[ExperimentId, str] = {
    ExperimentId.INDEPENDENCE: (
        "mean of pairwise products minus product of means tends to 0; bounded summands, "
        "or same-sign summands with S(n) = O(n), give O(1/n); S(x) = o(x^(3/2)) gives o(1)"
    ),
    ExperimentId.DENSITY: "S(x) / A(x) -> 1 for the cataloged asymptote A of the kind",
    ExperimentId.DISTRIBUTION: (
        "value frequencies N(f(i) = a_k) / n converge to the masses of the limit step law"
    ),
    ExperimentId.CHARFUN: (
        "characteristic function of S_n against the n-th power of the summand characteristic "
        "function; |phi_n(t) - phi_f(t)| against |t| |M[f_n] - M[f]|"
    ),
    ExperimentId.TAYLOR: "phi(t) = 1 + sum_{j <= l} (it)^j M[f^j] / j! + o(t^l)",
    ExperimentId.CLT: "(S_n - m n) / (sigma sqrt n) tends to the standard normal law",
    ExperimentId.ALTERNATING: (
        "summands a_k + b_k of convergent series with sums A and -A give S(n) = o(1)"
    ),
    ExperimentId.MERTENS_GAP: (
        "a normal limit needs |M[f_n] - M[f]| = O(1/n); for the Moebius function this "
        "gap is M(n)/n"
    ),
}

DENSITY_TOLERANCES: Dict[FunctionKind, float] = {
    FunctionKind.SQUAREFREE: 1e-3,
    FunctionKind.SQUAREFREE_ODD: 1e-3,
    FunctionKind.SQUAREFREE_EVEN: 1e-3,
    FunctionKind.DIVISOR_COUNT: 1e-3,
    FunctionKind.VON_MANGOLDT: 5e-3,
    FunctionKind.PRIME_LOG: 5e-3,
    FunctionKind.CONSTANT: 1e-12,
}
KS_TOLERANCE = 1e-3
TAYLOR_TOLERANCE = 2e-3
RATIO_BOUNDS = (0.1, 0.05, 0.02, 0.01, 0.005)
CLOSED_FORM_TOLERANCE = 1e-12
MOEBIUS_GAP_SLOPE_BAND = (-0.75, -0.25)
CONTROL_NOTE = (
    "the classical control uses disjoint blocks of independent signs as replicates; "
    "the single-path trailing window is strongly dependent and is reported only"
)

Runner = Callable[[ExperimentConfig, "_RunState"], None]


class _RunState:
    """Outputs, failures and stage timings collected during one run."""

    def __init__(self) -> None:
        self.stage_seconds: Dict[str, float] = {}
        self.outputs: List[Path] = []
        self.failures: List[str] = []

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        logger.info(f"Stage {name} started")
        try:
            yield
        finally:
            self.stage_seconds[name] = time.perf_counter() - started

    def expect(self, ok: bool, message: str) -> None:
        if not ok:
            logger.warning(f"Expectation failed: {message}")
            self.failures.append(message)


class ExperimentService:
    """Service for building tables and running experiments."""

    def __init__(self, table_store: TableStore = store) -> None:
        """
        Initialize the service.

        Args:
            table_store: Cache used for sieved tables
        """
        self.store = table_store
        self._runners: Dict[ExperimentId, Runner] = {
            ExperimentId.INDEPENDENCE: self._independence,
            ExperimentId.DENSITY: self._density,
            ExperimentId.DISTRIBUTION: self._distribution,
            ExperimentId.CHARFUN: self._charfun,
            ExperimentId.TAYLOR: self._taylor,
            ExperimentId.CLT: self._clt,
            ExperimentId.ALTERNATING: self._alternating,
            ExperimentId.MERTENS_GAP: self._mertens_gap,
        }

    def obtain_table(self, config: ExperimentConfig) -> FunctionTable:
        """
        Load the configured table from the cache, building it on a miss.

        A corrupt cache file is rebuilt with a warning.

        Raises:
            ConfigurationError: If the config names the EXTERNAL kind
        """
        threads = thread_budget(config.threads)
        if config.kind is FunctionKind.EXTERNAL:
            raise ConfigurationError("external tables cannot be named in a config")
        if config.kind is FunctionKind.CONSTANT:
            return build_table(
                config.kind,
                config.limit,
                config.segment_size,
                constant=config.constant,
                threads=threads,
            )
        try:
            return self.store.load(config.kind, config.limit, config.cache_dir)
        except CacheNotFoundError:
            logger.info(f"Cache miss for {config.kind.value} limit {config.limit}")
        except IntegrityError as e:
            logger.warning(f"{e.message}; rebuilding")
        table = build_table(config.kind, config.limit, config.segment_size, threads=threads)
        self.store.store(table, config.cache_dir)
        return table

    def run(self, config: ExperimentConfig) -> RunManifest:
        """
        Run one experiment and write its results plus manifest.json.

        Args:
            config: Validated experiment configuration

        Returns:
            RunManifest; passed is False when a declared expectation fails
        """
        logger.info(f"Running experiment {config.experiment.value} on {config.kind.value}")
        config.out_dir.mkdir(parents=True, exist_ok=True)
        state = _RunState()
        self._runners[config.experiment](config, state)
        manifest = RunManifest(
            config=config.model_dump(mode="json"),
            tool_version=__version__,
            stage_seconds=state.stage_seconds,
            outputs=[OutputRecord(name=p.name, sha256=file_sha256(p)) for p in state.outputs],
            passed=not state.failures,
            failures=state.failures,
        )
        write_json(manifest, config.out_dir / "manifest.json")
        logger.info(
            f"Experiment {config.experiment.value} finished: "
            f"{'PASS' if manifest.passed else 'FAIL'}"
        )
        return manifest

    def _table(self, config: ExperimentConfig, state: _RunState) -> FunctionTable:
        with state.stage("table"):
            return self.obtain_table(config)

    def _independence(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        with state.stage("independence"):
            grid = [n for n in config.grid if n >= 2]
            report = independence_report(table, grid, claim=CLAIMS[config.experiment])
        state.outputs.append(write_json(report, config.out_dir / "independence.json"))
        state.expect(
            report.passed,
            f"independence: {report.verdict.value} does not meet {report.expectation.value}",
        )

    def _density(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        with state.stage("density"):
            spec = asymptote_for(config.kind, config.constant)
            deviation = asymptote_deviation(prefix_series(table, config.grid), spec)
        final = deviation.points[-1]
        tolerance = config.tolerance or DENSITY_TOLERANCES.get(config.kind)
        passed = tolerance is None or abs(final.relative_deviation) < tolerance
        report = DensityReport(
            kind=table.label,
            claim=CLAIMS[config.experiment],
            asymptote=spec.label,
            n=final.n,
            relative_deviation=final.relative_deviation,
            tolerance=tolerance,
            passed=passed,
        )
        state.outputs.append(write_series_csv(deviation, config.out_dir / "density.csv"))
        state.outputs.append(write_json(report, config.out_dir / "density.json"))
        state.expect(
            passed,
            f"density: relative deviation {final.relative_deviation:.3e} exceeds {tolerance}",
        )

    def _distribution(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        with state.stage("distribution"):
            law = limit_step_distribution(config.kind, config.constant)
            emp = empirical_value_distribution(table, config.limit, bin_width=config.bin_width)
            ks = ks_distance(emp, law)
        tolerance = config.tolerance or KS_TOLERANCE
        report = KsReport(
            kind=table.label,
            claim=CLAIMS[config.experiment],
            n=config.limit,
            reference=law.label,
            distribution=emp,
            limit_masses=law.masses,
            ks=ks,
            tolerance=tolerance,
            passed=ks <= tolerance,
        )
        state.outputs.append(write_json(report, config.out_dir / "distribution.json"))
        state.expect(report.passed, f"distribution: KS {ks:.3e} exceeds {tolerance}")

    def _charfun(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        t_grid = config.t_values
        with state.stage("charfun"):
            samples = empirical_charfun(table.cells, t_grid)
            try:
                law = limit_step_distribution(config.kind, config.constant)
                remainder = limit_remainder(samples, law, moment(table, config.limit, 1))
                column = remainder.abs_remainder
            except NotInCatalogError:
                logger.info(f"{table.label}: no limit law, remainder column is order-2 Taylor")
                remainder = None
                moments = [moment(table, config.limit, j) for j in (1, 2)]
                column = taylor_check(samples, moments, 2).abs_remainder
            product = product_charfun_compare(table, min(config.product_n, config.limit), t_grid)
        report = CharFunReport(
            kind=table.label,
            claim=CLAIMS[config.experiment],
            n=config.limit,
            limit_remainder=remainder,
            product=product,
        )
        state.outputs.append(write_charfun_csv(samples, column, config.out_dir / "charfun.csv"))
        state.outputs.append(write_json(report, config.out_dir / "charfun.json"))

    def _taylor(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        order = config.taylor_order
        with state.stage("taylor"):
            moments = [moment(table, config.limit, j) for j in range(1, order + 1)]
            samples = empirical_charfun(table.cells, config.t_values)
            remainder = taylor_check(samples, moments, order)
            profile = remainder_ratio_profile(table.cells, moments, order, RATIO_BOUNDS)
        ratios = [ratio for _, ratio in profile]
        shrinks = all(b <= a for a, b in zip(ratios, ratios[1:]))
        tolerance = config.tolerance or TAYLOR_TOLERANCE
        report = TaylorReport(
            kind=table.label,
            claim=CLAIMS[config.experiment],
            n=config.limit,
            moments=moments,
            remainder=remainder,
            profile=[RatioPoint(bound=b, max_ratio=r) for b, r in profile],
            ratio_shrinks=shrinks,
            tolerance=tolerance,
            passed=shrinks and remainder.max_abs_remainder <= tolerance,
        )
        state.outputs.append(
            write_charfun_csv(samples, remainder.abs_remainder, config.out_dir / "taylor.csv")
        )
        state.outputs.append(write_json(report, config.out_dir / "taylor.json"))
        state.expect(shrinks, "taylor: remainder ratio does not shrink with the grid")
        state.expect(
            remainder.max_abs_remainder <= tolerance,
            f"taylor: max remainder {remainder.max_abs_remainder:.3e} exceeds {tolerance}",
        )

    def _clt(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        claim = CLAIMS[config.experiment]
        with state.stage("clt"):
            grid = [n for n in config.grid if n >= 2]
            report = clt_report(table, grid, config.window, claim=claim)
        with state.stage("controls"):
            signs = random_sign_table(config.limit, config.seed)
            blocks = block_standardized_sums(signs, config.limit, config.block)
            block_entry = normality_report(
                blocks.values,
                1.0,
                label="control: independent signs, block replicates",
                n=config.limit,
                tolerance=config.tolerance,
            )
            path = standardized_partial_sums(signs, config.limit, Variant.PER_INDEX)
            path_entry = normality_report(
                path.values,
                config.window,
                label="control: independent signs, single path variant A",
                n=config.limit,
            )
            constant = build_table(
                FunctionKind.CONSTANT,
                config.limit,
                config.segment_size,
                constant=config.constant,
                threads=thread_budget(config.threads),
            )
            flat = standardized_partial_sums(constant, config.limit, Variant.PER_INDEX)
            constant_entry = normality_report(
                flat.values, config.window, label=f"control: {constant.label}", n=config.limit
            )
        passed = block_entry.verdict == VERDICT_NORMAL and constant_entry.degenerate
        report = report.model_copy(
            update={
                "entries": report.entries + [block_entry, path_entry, constant_entry],
                "notes": report.notes + [CONTROL_NOTE],
                "passed": passed,
            }
        )
        state.outputs.append(write_json(report, config.out_dir / "clt.json"))
        if config.z_csv:
            z = standardized_partial_sums(table, grid[-1], Variant.PER_INDEX)
            state.outputs.append(write_z_csv(z, config.out_dir / "clt_z.csv"))
        state.expect(
            block_entry.verdict == VERDICT_NORMAL,
            f"clt: block control KS {block_entry.ks:.3e} above tolerance",
        )
        state.expect(constant_entry.degenerate, "clt: constant control is not degenerate")

    def _alternating(self, config: ExperimentConfig, state: _RunState) -> None:
        spec = config.series_spec
        n = config.limit
        with state.stage("alternating"):
            table = alternating_series_table(spec, n)
            sums = running_prefix(table, n)
            checks = [
                PartialSumCheck(n=k, measured=float(sums[k - 1]), closed_form=spec.partial_sum(k))
                for k in config.grid
            ]
            max_error = max(abs(c.measured - c.closed_form) for c in checks)
            law_entry = normality_report(
                sums, config.window, label="S(k) over trailing window", n=n
            )
            entries = [law_entry]
            if n >= 2:
                z = standardized_partial_sums(table, n, Variant.PER_INDEX)
                entries.append(normality_report(z.values, config.window, label="variant A", n=n))
        report = AlternatingReport(
            series=spec.label,
            claim=CLAIMS[config.experiment],
            total=spec.total,
            n=n,
            partial_sums=checks,
            max_abs_error=max_error,
            entries=entries,
            notes=[ALTERNATING_NOTE, SIGMA_NOTE],
            passed=max_error <= CLOSED_FORM_TOLERANCE and law_entry.degenerate,
        )
        state.outputs.append(write_json(report, config.out_dir / "alternating.json"))
        state.expect(
            max_error <= CLOSED_FORM_TOLERANCE,
            f"alternating: partial sums differ from the closed form by {max_error:.3e}",
        )
        state.expect(law_entry.degenerate, "alternating: S(k) does not concentrate at 0")

    def _mertens_gap(self, config: ExperimentConfig, state: _RunState) -> None:
        table = self._table(config, state)
        with state.stage("mertens-gap"):
            report = mean_decay_report(table, config.grid, claim=CLAIMS[config.experiment])
        state.outputs.append(write_json(report, config.out_dir / "mertens_gap.json"))
        if report.reference_from_law:
            state.expect(
                not report.condition_holds,
                f"mertens-gap: {table.label} mean gap slope {report.slope:.4f} meets 1/n",
            )
        if table.kind is FunctionKind.MOEBIUS:
            low, high = MOEBIUS_GAP_SLOPE_BAND
            state.expect(
                low < report.slope < high,
                f"mertens-gap: mu mean gap slope {report.slope:.4f} outside ({low}, {high})",
            )


# Global service instance
experiment_service = ExperimentService()


def run_experiment(config: ExperimentConfig) -> RunManifest:
    """Run an experiment with the global service."""
    return experiment_service.run(config)
