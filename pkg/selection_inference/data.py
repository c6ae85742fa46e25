"""
Dataset container: unit-norm design, response and noise variance
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConstantColumn, ValidationError

UNIT_NORM_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Design X (n x p, unit-norm columns), response y and noise variance

    `column_scales` holds the original column norms so coefficients can be
    reported on the pre-normalization scale: beta_original = beta / scale.
    `sigma2` may be None until it is supplied or estimated.
    """

    X: np.ndarray
    y: np.ndarray
    sigma2: Optional[float] = None
    column_scales: Optional[np.ndarray] = None
    column_names: Optional[List[str]] = None
    response_name: str = "y"

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValidationError("Design must be a nonempty 2-d matrix", diagnostics={"shape": X.shape})
        if y.shape[0] != X.shape[0]:
            raise ValidationError(
                "Response length does not match the design",
                diagnostics={"rows": X.shape[0], "response": y.shape[0]},
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValidationError("Design and response must be finite")
        norms = np.linalg.norm(X, axis=0)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValidationError(
                "Design columns must have unit norm; use Dataset.from_arrays to normalize",
                diagnostics={"worst_norm": float(norms[np.argmax(np.abs(norms - 1.0))])},
            )
        if self.sigma2 is not None and (not np.isfinite(self.sigma2) or self.sigma2 < 0):
            raise ValidationError("Noise variance must be nonnegative", diagnostics={"sigma2": self.sigma2})
        scales = np.ones(X.shape[1]) if self.column_scales is None else np.asarray(self.column_scales, dtype=float)
        if scales.shape != (X.shape[1],) or np.any(scales <= 0):
            raise ValidationError("Column scales must be positive, one per column")
        names = self.column_names or [f"x{j}" for j in range(X.shape[1])]
        if len(names) != X.shape[1]:
            raise ValidationError("Column names must match the number of columns")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_scales", scales)
        object.__setattr__(self, "column_names", list(names))

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        sigma2: Optional[float] = None,
        column_names: Optional[Sequence[str]] = None,
        response_name: str = "y",
    ) -> "Dataset":
        """
        Build a dataset, scaling design columns to unit norm

        Raises:
            ConstantColumn: If a column has zero norm
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise ValidationError("Design must be a 2-d matrix", diagnostics={"ndim": X.ndim})
        names = list(column_names) if column_names is not None else [f"x{j}" for j in range(X.shape[1])]
        norms = np.linalg.norm(X, axis=0)
        scale_floor = np.finfo(float).eps * max(1.0, float(np.abs(X).max(initial=0.0))) * np.sqrt(X.shape[0])
        zero = np.flatnonzero(norms <= scale_floor)
        if zero.size:
            j = int(zero[0])
            raise ConstantColumn(f"Column '{names[j]}' has zero norm", diagnostics={"column": names[j]})
        return cls(
            X=X / norms,
            y=y,
            sigma2=sigma2,
            column_scales=norms,
            column_names=names,
            response_name=response_name,
        )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def with_response(self, y: np.ndarray) -> "Dataset":
        return replace(self, y=np.asarray(y, dtype=float))

    def with_sigma2(self, sigma2: Optional[float]) -> "Dataset":
        return replace(self, sigma2=sigma2)

    def restrict(self, columns: Sequence[int]) -> "Dataset":
        """Dataset over a subset of columns, preserving order"""
        columns = list(columns)
        return replace(
            self,
            X=self.X[:, columns],
            column_scales=self.column_scales[columns],
            column_names=[self.column_names[j] for j in columns],
        )

    def require_sigma2(self) -> float:
        if self.sigma2 is None:
            raise ValidationError("Noise variance is required; supply sigma2 or estimate it (n > p)")
        return float(self.sigma2)
