"""
Marginal screening: keep the k columns most correlated with y
"""

import numpy as np

from ..data import Dataset
from ..errors import ValidationError
from ..polytope import DominanceRows, SelectionEvent
from .base import BaseSelector, Procedure, SelectedModel


def check_model_size(data: Dataset, k: int) -> None:
    if not 1 <= k <= min(data.n, data.p):
        raise ValidationError(
            "Model size k must satisfy 1 <= k <= min(n, p)",
            diagnostics={"k": k, "n": data.n, "p": data.p},
        )


def _signs(values: np.ndarray) -> list:
    return [1 if v >= 0 else -1 for v in values]


def marginal_screen(data: Dataset, k: int) -> SelectedModel:
    """
    Select the k largest |x_j^T y|; ties go to the lowest index

    Raises:
        ValidationError: If k is out of range
    """
    check_model_size(data, k)
    scores = data.X.T @ data.y
    order = np.argsort(-np.abs(scores), kind="stable")[:k]
    support = [int(j) for j in order]
    return SelectedModel(procedure=Procedure.MS, support=support, signs=_signs(scores[order]))


def encode_ms_event(data: Dataset, model: SelectedModel) -> SelectionEvent:
    """
    Encode the marginal screening event

    For i in S and j not in S the rows are (-s_i x_i +/- x_j)^T y <= 0,
    plus -s_i x_i^T y <= 0 per selected column; k(2(p-k)+1) rows, b = 0.

    Raises:
        ModelMismatch: If the model does not belong to this dataset
    """
    model.check_against(data, Procedure.MS)
    others = np.setdiff1d(np.arange(data.p), model.support)
    block = DominanceRows(data.X, leaders=list(zip(model.support, model.signs)), others=others)
    return SelectionEvent.of(block)


class MarginalScreening(BaseSelector):
    """Marginal screening with model size k"""

    procedure = Procedure.MS

    def __init__(self, k: int):
        self.k = k

    def select(self, data: Dataset) -> SelectedModel:
        return marginal_screen(data, self.k)

    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        return encode_ms_event(data, model)
