"""
Base selector interface and the selected-model record
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from ..data import Dataset
from ..errors import ModelMismatch
from ..polytope import SelectionEvent


class Procedure(str, Enum):
    """Selection procedures with a polyhedral selection event"""

    MS = "ms"
    OMP = "omp"
    NNLS = "nnls"
    MS_LASSO = "ms-lasso"
    LASSO = "lasso"


class SelectedModel(BaseModel):
    """Outcome of a selection procedure

    `support` is ordered: by decreasing |x_j^T y| for marginal screening,
    by selection step for OMP, ascending for NNLS and the Lasso.
    """

    model_config = ConfigDict(frozen=True)

    procedure: Procedure
    support: List[int]
    signs: List[int]
    stage_supports: Optional[Dict[str, List[int]]] = None
    stage_signs: Optional[Dict[str, List[int]]] = None

    @model_validator(mode="after")
    def check_support(self) -> "SelectedModel":
        if len(set(self.support)) != len(self.support):
            raise ValueError("Support indices must be distinct")
        if any(j < 0 for j in self.support):
            raise ValueError("Support indices must be nonnegative")
        if len(self.signs) != len(self.support):
            raise ValueError("Signs must align with the support")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("Signs must be +1 or -1")
        return self

    @property
    def size(self) -> int:
        return len(self.support)

    def position(self, j: int) -> int:
        """Position of column j inside the support"""
        try:
            return self.support.index(j)
        except ValueError as e:
            raise ModelMismatch(
                f"Column {j} is not in the selected model",
                diagnostics={"column": j, "support": self.support},
            ) from e

    def check_against(self, data: Dataset, procedure: Procedure) -> None:
        """
        Verify the model was produced by `procedure` on a dataset shaped like `data`

        Raises:
            ModelMismatch: On procedure or index mismatch
        """
        if self.procedure != procedure:
            raise ModelMismatch(
                "Model was produced by a different procedure",
                diagnostics={"expected": procedure.value, "actual": self.procedure.value},
            )
        if any(j >= data.p for j in self.support):
            raise ModelMismatch(
                "Support index exceeds the number of columns",
                diagnostics={"p": data.p, "support": self.support},
            )


class BaseSelector(ABC):
    """Base class for selection procedures"""

    procedure: Procedure

    @abstractmethod
    def select(self, data: Dataset) -> SelectedModel:
        """
        Run the procedure on the dataset

        Args:
            data: Dataset with unit-norm columns

        Returns:
            SelectedModel for the observed response
        """
        pass

    @abstractmethod
    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        """
        Encode the selection event {y : Ay <= b} of a model

        Args:
            data: Dataset the model was selected on
            model: Selected model

        Returns:
            SelectionEvent containing every response that selects `model`
        """
        pass

    def run(self, data: Dataset) -> Tuple[SelectedModel, SelectionEvent]:
        """Select and encode in one call"""
        model = self.select(data)
        return model, self.encode(data, model)
