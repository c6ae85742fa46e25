"""
Orthogonal matching pursuit and its ordered selection event
"""

from typing import List

import numpy as np

from ..data import Dataset
from ..numerics import QRFactor
from ..polytope import DominanceRows, SelectionEvent
from .base import BaseSelector, Procedure, SelectedModel
from .marginal import check_model_size


def omp_select(data: Dataset, k: int) -> SelectedModel:
    """
    Greedily add the column most correlated with the current residual

    The residual after step i is (I - X_S X_S^+) y for the columns chosen so
    far; already selected columns are never reconsidered. Ties go to the
    lowest index.

    Args:
        data: Dataset with unit-norm columns
        k: Number of steps

    Returns:
        SelectedModel with support in selection order

    Raises:
        ValidationError: If k is out of range
        RankDeficient: If the selected block loses rank mid-run
    """
    check_model_size(data, k)
    X, y = data.X, data.y
    support: List[int] = []
    signs: List[int] = []
    residual = y.copy()
    available = np.ones(data.p, dtype=bool)

    for _ in range(k):
        scores = X.T @ residual
        magnitude = np.where(available, np.abs(scores), -np.inf)
        j = int(np.argmax(magnitude))
        support.append(j)
        signs.append(1 if scores[j] >= 0 else -1)
        available[j] = False
        residual = QRFactor.of(X[:, support]).residual(y)

    return SelectedModel(procedure=Procedure.OMP, support=support, signs=signs)


def encode_omp_event(data: Dataset, model: SelectedModel) -> SelectionEvent:
    """
    Encode the OMP event, including the order of selection

    Step i contributes one dominance block on X^T (I - P_{i-1}) where P_{i-1}
    projects onto the columns chosen before step i. Rows for previously
    chosen columns vanish identically and are left out.

    Raises:
        ModelMismatch: If the model does not belong to this dataset
        RankDeficient: If a selected block is rank deficient
    """
    model.check_against(data, Procedure.OMP)
    blocks = []
    for step, (index, sign) in enumerate(zip(model.support, model.signs)):
        previous = model.support[:step]
        basis = QRFactor.of(data.X[:, previous]).q
        others = np.setdiff1d(np.arange(data.p), model.support[: step + 1])
        blocks.append(DominanceRows(data.X, leaders=[(index, sign)], others=others, basis=basis))
    return SelectionEvent.of(*blocks)


class OrthogonalMatchingPursuit(BaseSelector):
    """OMP run for k steps"""

    procedure = Procedure.OMP

    def __init__(self, k: int):
        self.k = k

    def select(self, data: Dataset) -> SelectedModel:
        return omp_select(data, self.k)

    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        return encode_omp_event(data, model)
