"""
Data ingestion, experiment drivers and result emission
"""

from .experiments import (
    covers,
    gaussian_design,
    run_coverage_experiment,
    run_interval_shape,
    run_pivot_null_experiment,
    run_residual_bootstrap,
    sparse_signal,
    synthetic_standin,
)
from .io import json_lines, load_csv, table_frame, write_table
from .results import (
    BOOTSTRAP_COLUMNS,
    COVERAGE_COLUMNS,
    HISTOGRAM_COLUMNS,
    QQ_COLUMNS,
    SHAPE_COLUMNS,
    BootstrapRow,
    CoverageCounts,
    CoverageRow,
    InferenceRecord,
    PivotNullResult,
    ScreenRecord,
)

__all__ = [
    "load_csv",
    "write_table",
    "table_frame",
    "json_lines",
    "run_coverage_experiment",
    "run_pivot_null_experiment",
    "run_residual_bootstrap",
    "run_interval_shape",
    "synthetic_standin",
    "gaussian_design",
    "sparse_signal",
    "covers",
    "CoverageCounts",
    "CoverageRow",
    "BootstrapRow",
    "PivotNullResult",
    "InferenceRecord",
    "ScreenRecord",
    "COVERAGE_COLUMNS",
    "BOOTSTRAP_COLUMNS",
    "HISTOGRAM_COLUMNS",
    "QQ_COLUMNS",
    "SHAPE_COLUMNS",
]
