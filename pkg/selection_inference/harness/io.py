"""
CSV ingestion and result emission
"""

from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ..data import Dataset
from ..errors import DataParseError, ValidationError


def load_csv(path: Union[str, Path], response_column: str = "y") -> Dataset:
    """
    Load a numeric CSV with a header row into a Dataset

    The response is taken from `response_column`; every other column is a
    predictor. Both are centered, then predictor columns are scaled to unit
    norm with the original norms kept as column scales.

    Args:
        path: UTF-8, comma-delimited CSV file
        response_column: Name of the response column

    Returns:
        Dataset with unit-norm columns

    Raises:
        FileNotFoundError: If the file does not exist
        DataParseError: If the file cannot be parsed or holds a non-numeric cell
        ConstantColumn: If a predictor is constant
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Data file not found: {path}")
    try:
        frame = pd.read_csv(path, encoding="utf-8", dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataParseError(f"Could not parse CSV: {e}", diagnostics={"path": str(path)}) from e

    if response_column not in frame.columns:
        raise ValidationError(
            f"Response column '{response_column}' not found",
            diagnostics={"columns": list(frame.columns)},
        )
    if frame.shape[0] < 1 or frame.shape[1] < 2:
        raise DataParseError("CSV needs at least one row, one predictor and the response", diagnostics={"shape": frame.shape})

    numeric = frame.apply(lambda column: pd.to_numeric(column.str.strip(), errors="coerce"))
    bad = numeric.isna().to_numpy() | ~np.isfinite(numeric.to_numpy(dtype=float, na_value=np.nan))
    if bad.any():
        row, col = (int(i) for i in np.argwhere(bad)[0])
        column = str(frame.columns[col])
        raise DataParseError(
            f"Non-numeric cell at line {row + 2}, column '{column}': {frame.iat[row, col]!r}",
            diagnostics={"line": row + 2, "column": column},
        )

    predictors = [c for c in numeric.columns if c != response_column]
    X = numeric[predictors].to_numpy(dtype=float)
    y = numeric[response_column].to_numpy(dtype=float)
    return Dataset.from_arrays(
        X - X.mean(axis=0),
        y - y.mean(),
        column_names=[str(c) for c in predictors],
        response_name=response_column,
    )


def write_table(rows: Iterable[Union[BaseModel, dict]], columns: Sequence[str], path: Union[str, Path]) -> Path:
    """Write records as CSV with a fixed column order"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table_frame(rows, columns).to_csv(path, index=False)
    return path


def table_frame(rows: Iterable[Union[BaseModel, dict]], columns: Sequence[str]) -> pd.DataFrame:
    records = [row.model_dump() if isinstance(row, BaseModel) else row for row in rows]
    return pd.DataFrame(records, columns=list(columns))


def json_lines(records: Iterable[BaseModel]) -> List[str]:
    return [record.model_dump_json() for record in records]
