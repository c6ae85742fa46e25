"""
Experiment drivers: coverage, pivot uniformity, residual bootstrap and interval shape
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from scipy import stats

from ..config import ExperimentConfig
from ..data import Dataset
from ..errors import NumericalError
from ..inference import (
    coefficient_truncation,
    estimate_sigma2,
    interval_from_truncation,
    pivot_from_truncation,
    population_target,
    z_interval,
)
from ..logging import BaseLogger, InferenceLogger, LogConfig
from ..numerics import QRFactor, normal_quantile
from ..polytope import SelectionEvent
from ..selectors import BaseSelector, SelectedModel, create_selector
from ..truncnorm import invert_pivot
from .io import load_csv
from .results import BootstrapRow, CoverageCounts, CoverageRow, PivotNullResult

T = TypeVar("T")

COVERAGE_RTOL = 1e-9
FIXED_DESIGN_STREAM = 104_729
SIGNAL_SIZE = 2
STANDIN_ROWS = 442
STANDIN_COLUMNS = 10
STANDIN_COEFFICIENT = 0.05


def default_logger() -> BaseLogger:
    return InferenceLogger("selection_inference.harness", LogConfig(level="WARNING", use_colors=False))


def covers(interval: Tuple[float, float], target: float) -> bool:
    """Interval membership with a relative tolerance of 1e-9"""
    tol = COVERAGE_RTOL * max(1.0, abs(target))
    return interval[0] - tol <= target <= interval[1] + tol


def gaussian_design(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    """Standard normal n x p design with columns scaled to unit norm"""
    X = rng.standard_normal((n, p))
    return X / np.linalg.norm(X, axis=0)


def sparse_signal(p: int, snr: float) -> np.ndarray:
    """beta0 = (snr, snr, 0, ..., 0)"""
    beta = np.zeros(p)
    beta[: min(SIGNAL_SIZE, p)] = snr
    return beta


def _run_all(
    tasks: Sequence[Callable[[], T]],
    workers: int,
    logger: BaseLogger,
    description: str,
) -> List[T]:
    """Run tasks, in a thread pool when workers > 1; results keep task order"""
    results: List[T] = []
    with logger.show_progress(len(tasks), description) as advance:
        if workers <= 1:
            for task in tasks:
                results.append(task())
                advance()
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(lambda task: task(), tasks):
                    results.append(result)
                    advance()
    return results


def _interval_counts(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    mu: np.ndarray,
    alpha_level: float,
) -> CoverageCounts:
    if not model.support:
        return CoverageCounts()
    targets = population_target(data, model, mu)
    adjusted = z_count = 0
    for position, j in enumerate(model.support):
        truncation = coefficient_truncation(data, model, event, j)
        adjusted += covers(interval_from_truncation(truncation, alpha_level), targets[position])
        z_count += covers(z_interval(data, model, j, alpha_level), targets[position])
    return CoverageCounts(intervals=model.size, adjusted_covered=adjusted, z_covered=z_count)


def coverage_trial(
    config: ExperimentConfig,
    selector: BaseSelector,
    snr: float,
    rng: np.random.Generator,
    design: Optional[np.ndarray] = None,
) -> CoverageCounts:
    """
    One simulated selection followed by inference on every selected coefficient

    Coverage is judged against beta*_S = X_S^+ mu for the selected S.
    """
    X = gaussian_design(rng, config.n, config.p) if design is None else design
    beta0 = sparse_signal(config.p, snr)
    mu = X @ beta0
    sigma2 = config.simulation_sigma2
    y = mu + np.sqrt(sigma2) * rng.standard_normal(config.n)
    data = Dataset(X=X, y=y, sigma2=sigma2)
    model, event = selector.run(data)
    counts = _interval_counts(data, model, event, mu, config.alpha_level)
    true_support = set(np.flatnonzero(beta0).tolist())
    screened = int(bool(model.support) and true_support.issubset(model.support))
    return counts + CoverageCounts(screened=screened)


def _guarded(task: Callable[[], CoverageCounts], logger: BaseLogger, **context) -> Callable[[], CoverageCounts]:
    def run() -> CoverageCounts:
        try:
            return task()
        except NumericalError as e:
            logger.warning(f"Trial failed: {e}", **context, **e.diagnostics)
            return CoverageCounts(failures=1)

    return run


def run_coverage_experiment(config: ExperimentConfig, logger: Optional[BaseLogger] = None) -> List[CoverageRow]:
    """
    Coverage of selective and z intervals over the SNR grid

    Every trial draws its own generator from (seed, snr index, trial), so
    the table depends only on the configuration and not on `workers`.

    Args:
        config: Experiment configuration
        logger: Optional logger for progress and per-trial failures

    Returns:
        One CoverageRow per SNR
    """
    logger = logger or default_logger()
    selector = create_selector(config.procedure, config.k, config.lam)
    design = None
    if config.fixed_design:
        design = gaussian_design(np.random.default_rng([config.seed, FIXED_DESIGN_STREAM]), config.n, config.p)

    rows = []
    for s, snr in enumerate(config.snr_grid):
        tasks = [
            _guarded(
                lambda trial=trial, snr=snr, s=s: coverage_trial(
                    config, selector, snr, np.random.default_rng([config.seed, s, trial]), design
                ),
                logger,
                snr=snr,
                trial=trial,
            )
            for trial in range(config.trials)
        ]
        results = _run_all(tasks, config.workers, logger, f"SNR {snr}")
        total = sum(results, CoverageCounts())
        row = CoverageRow.from_counts(snr, config.trials, total)
        logger.info(
            "Coverage at SNR",
            snr=snr,
            adjusted=row.adjusted_coverage,
            z=row.z_coverage,
            failures=row.failures,
        )
        rows.append(row)
    return rows


def pivot_trial(
    config: ExperimentConfig,
    selector: BaseSelector,
    snr: float,
    rng: np.random.Generator,
) -> Optional[float]:
    """
    Pivot at the true target for the lowest-index selected coefficient

    Returns None when nothing is selected.
    """
    X = gaussian_design(rng, config.n, config.p)
    mu = X @ sparse_signal(config.p, snr)
    sigma2 = config.simulation_sigma2
    data = Dataset(X=X, y=mu + np.sqrt(sigma2) * rng.standard_normal(config.n), sigma2=sigma2)
    model, event = selector.run(data)
    if not model.support:
        return None
    j = min(model.support)
    target = population_target(data, model, mu)[model.position(j)]
    return pivot_from_truncation(coefficient_truncation(data, model, event, j), float(target))


def run_pivot_null_experiment(config: ExperimentConfig, logger: Optional[BaseLogger] = None) -> PivotNullResult:
    """
    Sample the selective pivot under the true target and test it for uniformity

    Uses the first SNR of the grid and one pivot per trial.
    """
    logger = logger or default_logger()
    selector = create_selector(config.procedure, config.k, config.lam)
    snr = config.snr_grid[0]

    def trial_task(trial: int) -> Callable[[], Tuple[Optional[float], bool]]:
        def run() -> Tuple[Optional[float], bool]:
            try:
                return pivot_trial(config, selector, snr, np.random.default_rng([config.seed, trial])), False
            except NumericalError as e:
                logger.warning(f"Trial failed: {e}", trial=trial, **e.diagnostics)
                return None, True

        return run

    values = _run_all([trial_task(t) for t in range(config.trials)], config.workers, logger, "Pivots")
    failures = sum(failed for _, failed in values)
    pivots = np.array([v for v, _ in values if v is not None], dtype=float)
    if pivots.size:
        ks = stats.kstest(pivots, "uniform")
        statistic, pvalue = float(ks.statistic), float(ks.pvalue)
    else:
        statistic, pvalue = float("nan"), float("nan")
    logger.info("Pivot uniformity", pivots=int(pivots.size), ks_statistic=statistic, ks_pvalue=pvalue)
    return PivotNullResult(pivots=pivots, ks_statistic=statistic, ks_pvalue=pvalue, failures=failures)


def synthetic_standin(seed: int = 0) -> Dataset:
    """
    n = 442, p = 10 dataset with ten equal weak signals

    Selecting two of ten comparable predictors makes unadjusted intervals
    visibly optimistic, which is what the bootstrap comparison needs.
    """
    rng = np.random.default_rng([seed, STANDIN_ROWS])
    X = rng.standard_normal((STANDIN_ROWS, STANDIN_COLUMNS))
    y = X @ np.full(STANDIN_COLUMNS, STANDIN_COEFFICIENT) + rng.standard_normal(STANDIN_ROWS)
    X = X - X.mean(axis=0)
    return Dataset.from_arrays(
        X,
        y - y.mean(),
        column_names=[f"x{j}" for j in range(STANDIN_COLUMNS)],
    )


def bootstrap_replication(
    data: Dataset,
    fitted: np.ndarray,
    residuals: np.ndarray,
    selector: BaseSelector,
    nominal_grid: Sequence[float],
    rng: np.random.Generator,
) -> List[CoverageCounts]:
    """Resample residuals, reselect, and tally coverage at every nominal level"""
    y = fitted + rng.choice(residuals, size=residuals.size, replace=True)
    replicate = data.with_response(y)
    model, event = selector.run(replicate)
    if not model.support:
        return [CoverageCounts() for _ in nominal_grid]
    targets = population_target(replicate, model, fitted)
    truncations = [coefficient_truncation(replicate, model, event, j) for j in model.support]
    counts = []
    for level in nominal_grid:
        alpha_level = 1.0 - level
        adjusted = z_count = 0
        for position, (j, truncation) in enumerate(zip(model.support, truncations)):
            adjusted += covers(interval_from_truncation(truncation, alpha_level), targets[position])
            z_count += covers(z_interval(replicate, model, j, alpha_level), targets[position])
        counts.append(CoverageCounts(intervals=model.size, adjusted_covered=adjusted, z_covered=z_count))
    return counts


def run_residual_bootstrap(
    source: Union[str, Path, Dataset],
    config: ExperimentConfig,
    logger: Optional[BaseLogger] = None,
) -> List[BootstrapRow]:
    """
    Residual bootstrap coverage against the nominal grid

    The full least squares fit supplies mu = X beta_hat and the centered
    residuals; sigma^2 is estimated once from the full fit unless given.
    Each replication uses the generator seeded by (seed, replication).

    Args:
        source: CSV path (response column `config.response`) or a Dataset
        config: Experiment configuration; `trials` is the replication count

    Returns:
        One BootstrapRow per nominal level

    Raises:
        NotEstimable: If n <= p and sigma2 is not given
    """
    logger = logger or default_logger()
    data = source if isinstance(source, Dataset) else load_csv(source, config.response)
    sigma2 = config.sigma2 if config.sigma2 is not None else estimate_sigma2(data)
    data = data.with_sigma2(sigma2)
    fitted = data.X @ QRFactor.of(data.X).solve(data.y)
    residuals = data.y - fitted
    residuals = residuals - residuals.mean()
    selector = create_selector(config.procedure, config.k, config.lam)
    logger.info("Residual bootstrap", n=data.n, p=data.p, sigma2=sigma2, replications=config.trials)

    def replication_task(r: int) -> Callable[[], Optional[List[CoverageCounts]]]:
        def run() -> Optional[List[CoverageCounts]]:
            try:
                rng = np.random.default_rng([config.seed, r])
                return bootstrap_replication(data, fitted, residuals, selector, config.nominal_grid, rng)
            except NumericalError as e:
                logger.warning(f"Replication failed: {e}", replication=r, **e.diagnostics)
                return None

        return run

    results = _run_all([replication_task(r) for r in range(config.trials)], config.workers, logger, "Bootstrap")
    failures = sum(result is None for result in results)
    rows = []
    for i, level in enumerate(config.nominal_grid):
        total = sum((result[i] for result in results if result is not None), CoverageCounts())
        total = total + CoverageCounts(failures=failures)
        rows.append(BootstrapRow.from_counts(level, config.trials, total))
    return rows


def run_interval_shape(config: ExperimentConfig) -> List[dict]:
    """
    Selective and z intervals for eta^T y truncated to [-b sigma, b sigma]

    Observations are evenly spaced strictly inside the truncation range.
    """
    sigma2 = config.simulation_sigma2
    sd = float(np.sqrt(sigma2))
    lower, upper = -config.bound * sd, config.bound * sd
    observed = np.linspace(lower, upper, config.points + 2)[1:-1]
    half_width = sd * float(normal_quantile(1.0 - config.alpha_level / 2.0))
    rows = []
    for x in observed:
        rows.append(
            {
                "observed": float(x),
                "adjusted_lower": invert_pivot(x, sigma2, lower, upper, 1.0 - config.alpha_level / 2.0),
                "adjusted_upper": invert_pivot(x, sigma2, lower, upper, config.alpha_level / 2.0),
                "z_lower": float(x) - half_width,
                "z_upper": float(x) + half_width,
            }
        )
    return rows
