"""
Tests for data loading, result tables and the experiment drivers
"""

import json
from pathlib import Path
from unittest.mock import MagicMock

import numpy as np
import pandas as pd
import pytest

from selection_inference.config import ExperimentConfig
from selection_inference.data import Dataset
from selection_inference.errors import BracketFailure, ConstantColumn, DataParseError, ValidationError
from selection_inference.harness import experiments
from selection_inference.harness import (
    COVERAGE_COLUMNS,
    CoverageCounts,
    CoverageRow,
    InferenceRecord,
    ScreenRecord,
    covers,
    json_lines,
    load_csv,
    run_coverage_experiment,
    run_interval_shape,
    run_pivot_null_experiment,
    run_residual_bootstrap,
    synthetic_standin,
    write_table,
)
from selection_inference.inference import infer_selected
from selection_inference.selectors import MarginalScreening, Procedure


def test_load_csv_centers_and_normalizes(orthogonal_csv: Path):
    """Test predictors and response are centered and columns scaled to unit norm"""
    data = load_csv(orthogonal_csv)
    assert (data.n, data.p) == (4, 2)
    assert data.column_names == ["x1", "x2"]
    np.testing.assert_allclose(data.y, [2.0, -2.0, 1.0, -1.0])
    np.testing.assert_allclose(np.linalg.norm(data.X, axis=0), 1.0)
    np.testing.assert_allclose(data.column_scales, [2.0, 2.0])


def test_load_csv_constant_column(temp_dir: Path):
    """Test a constant predictor is named in the error"""
    path = temp_dir / "constant.csv"
    path.write_text("a,b,y\n1,5,1\n2,5,2\n3,5,4\n", encoding="utf-8")
    with pytest.raises(ConstantColumn, match="'b'"):
        load_csv(path)


def test_load_csv_non_numeric(temp_dir: Path):
    """Test the line and column of a non-numeric cell are reported"""
    path = temp_dir / "bad.csv"
    path.write_text("a,b,y\n1,2,3\n4,oops,6\n", encoding="utf-8")
    with pytest.raises(DataParseError) as e:
        load_csv(path)
    assert e.value.diagnostics == {"line": 3, "column": "b"}


def test_load_csv_missing_response(orthogonal_csv: Path):
    """Test an unknown response column"""
    with pytest.raises(ValidationError):
        load_csv(orthogonal_csv, response_column="target")


def test_load_csv_missing_file(temp_dir: Path):
    """Test a missing file"""
    with pytest.raises(FileNotFoundError):
        load_csv(temp_dir / "absent.csv")


def test_covers_tolerance():
    """Test interval membership with the relative tolerance"""
    assert covers((0.0, 1.0), 1.0 + 1e-12)
    assert not covers((0.0, 1.0), 1.0 + 1e-6)


def test_coverage_counts_add():
    """Test counts merge field by field"""
    total = CoverageCounts(intervals=2, adjusted_covered=1) + CoverageCounts(intervals=3, z_covered=2, failures=1)
    assert total == CoverageCounts(intervals=5, adjusted_covered=1, z_covered=2, failures=1)
    row = CoverageRow.from_counts(1.0, 4, total)
    assert row.adjusted_coverage == pytest.approx(0.2)


def test_write_table_column_order(temp_dir: Path):
    """Test tables keep the fixed column order"""
    rows = [CoverageRow.from_counts(0.5, 1, CoverageCounts(intervals=2, adjusted_covered=2, z_covered=1))]
    path = write_table(rows, COVERAGE_COLUMNS, temp_dir / "out" / "coverage.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == COVERAGE_COLUMNS
    assert frame.loc[0, "z_coverage"] == pytest.approx(0.5)


def test_inference_record_json(orthogonal_csv: Path):
    """Test the JSON line of a screened coefficient on the original scale"""
    data = load_csv(orthogonal_csv).with_sigma2(1.0)
    model, event = MarginalScreening(1).run(data)
    (record,) = [InferenceRecord.from_result(r) for r in infer_selected(data, model, event, 0.1)]
    payload = json.loads(json_lines([record])[0])
    assert payload["name"] == "x1"
    assert payload["beta_hat"] == pytest.approx(1.5)
    assert payload["eta_norm"] == pytest.approx(0.5)
    assert payload["v_plus"] == float("inf")
    assert payload["p_value"] == pytest.approx(2 * min(payload["pivot"], 1 - payload["pivot"]))


def test_screen_record(orthogonal_data: Dataset):
    """Test the selected model with column names"""
    record = ScreenRecord.from_model(orthogonal_data, MarginalScreening(2).select(orthogonal_data))
    assert record.names == ["x0", "x1"]
    assert record.signs == [1, -1]
    assert record.procedure == "ms"


def test_coverage_experiment_shape(small_config: ExperimentConfig, mock_logger: MagicMock):
    """Test one row per SNR with k intervals per trial"""
    rows = run_coverage_experiment(small_config, mock_logger)
    assert [row.snr for row in rows] == [1.0, 5.0]
    for row in rows:
        assert row.trials == 8
        assert row.intervals + 2 * row.failures == 16
        assert 0 <= row.adjusted_covered <= row.intervals
    assert mock_logger.info.call_count == 2


def test_coverage_experiment_independent_of_workers(small_config: ExperimentConfig, mock_logger: MagicMock):
    """Test thread count does not change the table"""
    serial = run_coverage_experiment(small_config, mock_logger)
    threaded = run_coverage_experiment(small_config.model_copy(update={"workers": 3}), mock_logger)
    assert serial == threaded


def test_coverage_experiment_fixed_design(small_config: ExperimentConfig, mock_logger: MagicMock):
    """Test the fixed-design variant runs for every procedure"""
    for procedure in (Procedure.MS, Procedure.OMP, Procedure.MS_LASSO):
        config = small_config.model_copy(update={"fixed_design": True, "procedure": procedure, "lam": 0.5})
        rows = run_coverage_experiment(config, mock_logger)
        assert len(rows) == 2


def test_coverage_experiment_counts_failures(small_config: ExperimentConfig, mock_logger: MagicMock, monkeypatch):
    """Test numerical failures are logged and counted, not raised"""

    def failing_trial(*args, **kwargs):
        raise BracketFailure("no sign change", diagnostics={"doublings": 60})

    monkeypatch.setattr(experiments, "coverage_trial", failing_trial)
    rows = run_coverage_experiment(small_config, mock_logger)
    assert all(row.failures == 8 and row.intervals == 0 for row in rows)
    assert mock_logger.warning.call_count == 16


def test_pivot_null_experiment(small_config: ExperimentConfig, mock_logger: MagicMock):
    """Test pivots lie in [0, 1] and the derived tables are consistent"""
    result = run_pivot_null_experiment(small_config.model_copy(update={"trials": 30}), mock_logger)
    assert result.pivots.size + result.failures == 30
    assert np.all((result.pivots >= 0) & (result.pivots <= 1))
    histogram = result.histogram(bins=10)
    assert sum(row["count"] for row in histogram) == result.pivots.size
    empirical = [row["empirical"] for row in result.qq()]
    assert empirical == sorted(empirical)
    assert 0.0 <= result.ks_pvalue <= 1.0


def test_residual_bootstrap_standin(mock_logger: MagicMock):
    """Test one row per nominal level on the synthetic stand-in"""
    config = ExperimentConfig(n=442, p=10, k=2, trials=20, nominal_grid=[0.5, 0.9], seed=3)
    rows = run_residual_bootstrap(synthetic_standin(3), config, mock_logger)
    assert [row.nominal for row in rows] == [0.5, 0.9]
    for row in rows:
        assert row.replications == 20
        assert row.intervals + 2 * row.failures == 40
    assert rows[0].adjusted_covered <= rows[1].adjusted_covered


def test_residual_bootstrap_exact_fit(rng: np.random.Generator, mock_logger: MagicMock):
    """Test zero residuals give zero noise and full coverage"""
    X = rng.standard_normal((40, 5))
    data = Dataset.from_arrays(X, X @ np.array([3.0, 2.0, 1.0, 0.5, 0.25]))
    config = ExperimentConfig(n=40, p=5, k=2, trials=5, nominal_grid=[0.5], seed=1)
    (row,) = run_residual_bootstrap(data, config, mock_logger)
    assert row.adjusted_coverage == 1.0
    assert row.z_coverage == 1.0


def test_residual_bootstrap_from_csv(temp_dir: Path, mock_logger: MagicMock):
    """Test the bootstrap reads the configured response column"""
    rng = np.random.default_rng(4)
    frame = pd.DataFrame(rng.standard_normal((30, 3)), columns=["a", "b", "c"])
    frame["target"] = frame["a"] + rng.standard_normal(30)
    path = temp_dir / "data.csv"
    frame.to_csv(path, index=False)
    config = ExperimentConfig(n=30, p=3, k=1, trials=5, nominal_grid=[0.9], response="target")
    (row,) = run_residual_bootstrap(path, config, mock_logger)
    assert row.intervals + row.failures == 5


def test_interval_shape(small_config: ExperimentConfig):
    """Test intervals hold their observation and move with it"""
    rows = run_interval_shape(small_config.model_copy(update={"points": 11}))
    assert len(rows) == 11
    assert all(-3.0 < row["observed"] < 3.0 for row in rows)
    for row in rows:
        assert row["adjusted_lower"] < row["observed"] < row["adjusted_upper"]
        assert row["z_upper"] - row["z_lower"] == pytest.approx(2 * 1.6448536269514722)
    lowers = [row["adjusted_lower"] for row in rows]
    uppers = [row["adjusted_upper"] for row in rows]
    assert lowers == sorted(lowers)
    assert uppers == sorted(uppers)
