"""
Non-negative least squares (Lawson-Hanson active set) and its selection event
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..data import Dataset
from ..errors import SolverStalled
from ..numerics import QRFactor, least_squares
from ..polytope import ExplicitRows, SelectionEvent
from .base import BaseSelector, Procedure, SelectedModel

DUAL_RTOL = 1e-12


def nnls_solve(data: Dataset) -> Tuple[np.ndarray, SelectedModel]:
    """
    Solve min_{beta >= 0} 1/2 ||y - X beta||^2

    Variables enter the passive set by largest positive gradient
    x_j^T (y - X beta); the inner loop steps back along the segment to the
    unconstrained least squares solution whenever it leaves the orthant.
    The final passive coefficients are refit by least squares.

    Args:
        data: Dataset with unit-norm columns

    Returns:
        Tuple of (beta of length p, SelectedModel with ascending support)

    Raises:
        SolverStalled: If the active set does not settle within 3p outer iterations
        RankDeficient: If a passive block is rank deficient
    """
    X, y = data.X, data.y
    p = data.p
    beta = np.zeros(p)
    passive = np.zeros(p, dtype=bool)
    tol = DUAL_RTOL * max(1.0, float(np.max(np.abs(X.T @ y))))
    gradient = X.T @ y

    for _ in range(3 * p):
        candidates = ~passive & (gradient > tol)
        if not candidates.any():
            break
        passive[int(np.argmax(np.where(candidates, gradient, -np.inf)))] = True

        while True:
            idx = np.flatnonzero(passive)
            z = least_squares(X[:, idx], y)
            if np.all(z > 0):
                beta = np.zeros(p)
                beta[idx] = z
                break
            current = beta[idx]
            blocked = z <= 0
            gap = current[blocked] - z[blocked]
            ratios = np.divide(current[blocked], gap, out=np.zeros_like(gap), where=gap > 0)
            step = float(np.min(ratios))
            beta[idx] = current + step * (z - current)
            leaving = idx[blocked][int(np.argmin(ratios))]
            beta[leaving] = 0.0
            passive &= beta > 0
        gradient = X.T @ (y - X @ beta)
    else:
        if np.any(~passive & (gradient > tol)):
            raise SolverStalled(
                "NNLS active set did not settle",
                diagnostics={"outer_iterations": 3 * p, "max_gradient": float(gradient.max())},
            )

    support = [int(j) for j in np.flatnonzero(passive)]
    model = SelectedModel(procedure=Procedure.NNLS, support=support, signs=[1] * len(support))
    return beta, model


def encode_nnls_event(data: Dataset, model: SelectedModel) -> SelectionEvent:
    """
    Encode the NNLS event {y : Ay <= 0}

    Rows -X_S^+ y <= 0 keep the refit coefficients nonnegative; rows
    X_{-S}^T (I - X_S X_S^+) y <= 0 keep the dual variables
    -x_j^T (y - X beta) nonnegative. An empty support leaves X^T y <= 0.

    Raises:
        ModelMismatch: If the model does not belong to this dataset
        RankDeficient: If X_S is rank deficient
    """
    model.check_against(data, Procedure.NNLS)
    X = data.X
    if not model.support:
        return SelectionEvent.of(ExplicitRows(X.T))
    factor = QRFactor.of(X[:, model.support])
    pinv = linalg.solve_triangular(factor.r, factor.q.T, lower=False)
    inactive = np.setdiff1d(np.arange(data.p), model.support)
    x_rest = X[:, inactive]
    dual = x_rest.T - (x_rest.T @ factor.q) @ factor.q.T
    return SelectionEvent.of(ExplicitRows(np.vstack([-pinv, dual])))


class NonNegativeLeastSquares(BaseSelector):
    """NNLS; the support is the set of positive coefficients"""

    procedure = Procedure.NNLS

    def select(self, data: Dataset) -> SelectedModel:
        return nnls_solve(data)[1]

    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        return encode_nnls_event(data, model)
