"""
Lasso by coordinate descent, its sign-conditional event, and marginal screening + Lasso
"""

from typing import List, Tuple

import numpy as np
from scipy import linalg

from ..data import Dataset
from ..errors import SolverStalled, ValidationError
from ..numerics import QRFactor
from ..polytope import ExplicitRows, SelectionEvent, compose_events
from .base import BaseSelector, Procedure, SelectedModel
from .marginal import encode_ms_event, marginal_screen

GAP_RTOL = 1e-10
MAX_SWEEPS = 100_000
KKT_RTOL = 1e-12


def _check_lambda(lam: float) -> None:
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError("Lasso penalty must be positive", diagnostics={"lambda": lam})


def _soft_threshold(value: float, threshold: float) -> float:
    return float(np.sign(value) * max(abs(value) - threshold, 0.0))


def duality_gap(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    """Gap between the Lasso objective and the dual at the scaled residual"""
    residual = y - X @ beta
    primal = 0.5 * residual @ residual + lam * np.abs(beta).sum()
    correlation = float(np.max(np.abs(X.T @ residual), initial=0.0))
    theta = residual * (min(1.0, lam / correlation) if correlation > 0 else 1.0)
    dual = 0.5 * y @ y - 0.5 * (y - theta) @ (y - theta)
    return float(primal - dual)


def _coordinate_descent(X: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """Cyclic coordinate descent for unit-norm columns"""
    p = X.shape[1]
    beta = np.zeros(p)
    residual = y.copy()
    target = GAP_RTOL * max(1.0, 0.5 * float(y @ y))
    for sweep in range(MAX_SWEEPS):
        for j in range(p):
            old = beta[j]
            new = _soft_threshold(old + X[:, j] @ residual, lam)
            if new != old:
                residual -= (new - old) * X[:, j]
                beta[j] = new
        if sweep % 10 == 9 or p == 1:
            if duality_gap(X, y, beta, lam) <= target:
                return beta
    gap = duality_gap(X, y, beta, lam)
    if gap <= target:
        return beta
    raise SolverStalled("Lasso coordinate descent did not converge", diagnostics={"gap": gap, "sweeps": MAX_SWEEPS})


def _exact_active_solution(X: np.ndarray, y: np.ndarray, active: List[int], signs: List[int], lam: float) -> np.ndarray:
    """beta_E = (X_E^T X_E)^{-1} (X_E^T y - lam z)"""
    factor = QRFactor.of(X[:, active])
    rhs = X[:, active].T @ y - lam * np.asarray(signs, dtype=float)
    inner = linalg.solve_triangular(factor.r, rhs, trans="T", lower=False)
    return linalg.solve_triangular(factor.r, inner, lower=False)


def _polish(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> Tuple[List[int], List[int], np.ndarray]:
    """
    Replace the iterative solution by the closed form on its active set

    Coordinates whose closed-form sign disagrees are dropped and inactive
    coordinates violating |x_j^T r| <= lam are added until the KKT
    conditions hold exactly.
    """
    p = X.shape[1]
    active = [int(j) for j in np.flatnonzero(beta)]
    signs = [1 if beta[j] > 0 else -1 for j in active]
    slack = lam * (1.0 + KKT_RTOL)
    for _ in range(p + 1):
        coef = _exact_active_solution(X, y, active, signs, lam) if active else np.zeros(0)
        wrong = [i for i, (c, s) in enumerate(zip(coef, signs)) if c * s <= 0]
        if wrong:
            active = [j for i, j in enumerate(active) if i not in wrong]
            signs = [s for i, s in enumerate(signs) if i not in wrong]
            continue
        full = np.zeros(p)
        full[active] = coef
        correlation = X.T @ (y - X @ full)
        violators = [j for j in range(p) if j not in active and abs(correlation[j]) > slack]
        if not violators:
            return active, signs, full
        for j in violators:
            active.append(j)
            signs.append(1 if correlation[j] > 0 else -1)
        order = np.argsort(active)
        active = [active[i] for i in order]
        signs = [signs[i] for i in order]
    raise SolverStalled("Lasso active set did not satisfy the KKT conditions", diagnostics={"active": active})


def lasso_solve(data: Dataset, lam: float) -> Tuple[np.ndarray, SelectedModel]:
    """
    Solve min 1/2 ||y - X beta||^2 + lam ||beta||_1

    Args:
        data: Dataset with unit-norm columns
        lam: Penalty, > 0

    Returns:
        Tuple of (beta of length p, SelectedModel of the active set and signs)

    Raises:
        ValidationError: If lam is not positive
        SolverStalled: If the duality gap does not reach 1e-10 * max(1, ||y||^2 / 2)
    """
    _check_lambda(lam)
    X, y = data.X, data.y
    if float(np.max(np.abs(X.T @ y))) <= lam:
        return np.zeros(data.p), SelectedModel(procedure=Procedure.LASSO, support=[], signs=[])
    active, signs, beta = _polish(X, y, _coordinate_descent(X, y, lam), lam)
    return beta, SelectedModel(procedure=Procedure.LASSO, support=active, signs=signs)


def lasso_fit(data: Dataset, lam: float) -> SelectedModel:
    """Active set and signs of the Lasso solution"""
    return lasso_solve(data, lam)[1]


def encode_lasso_event(data: Dataset, model: SelectedModel, lam: float) -> SelectionEvent:
    """
    Encode {y : the Lasso selects active set E with signs z}

    With P_E the projection onto the span of X_E the rows are

        -diag(z) X_E^+ y                <= -lam diag(z) (X_E^T X_E)^{-1} z
         X_{-E}^T (I - P_E) y           <=  lam (1 - X_{-E}^T (X_E^T)^+ z)
        -X_{-E}^T (I - P_E) y           <=  lam (1 + X_{-E}^T (X_E^T)^+ z)

    An empty active set leaves -lam <= X^T y <= lam.

    Raises:
        ValidationError: If lam is not positive
        ModelMismatch: If the model does not belong to this dataset
        RankDeficient: If X_E is rank deficient
    """
    _check_lambda(lam)
    model.check_against(data, Procedure.LASSO)
    X = data.X
    if not model.support:
        return SelectionEvent.of(ExplicitRows(np.vstack([X.T, -X.T]), np.full(2 * data.p, lam)))

    z = np.asarray(model.signs, dtype=float)
    factor = QRFactor.of(X[:, model.support])
    pinv = linalg.solve_triangular(factor.r, factor.q.T, lower=False)
    dual_direction = factor.pseudoinverse_apply(z)
    gram_z = pinv @ dual_direction

    sign_rows = -z[:, None] * pinv
    sign_offsets = -lam * z * gram_z

    inactive = np.setdiff1d(np.arange(data.p), model.support)
    x_rest = X[:, inactive]
    projected = x_rest.T - (x_rest.T @ factor.q) @ factor.q.T
    leak = x_rest.T @ dual_direction

    a = np.vstack([sign_rows, projected, -projected])
    b = np.concatenate([sign_offsets, lam * (1.0 - leak), lam * (1.0 + leak)])
    return SelectionEvent.of(ExplicitRows(a, b))


def ms_plus_lasso(data: Dataset, k: int, lam: float) -> Tuple[SelectedModel, SelectionEvent]:
    """
    Marginal screening to k columns followed by the Lasso on the screened block

    The composed event conditions on the screened set and signs together
    with the Lasso active set and signs; the returned support is the Lasso
    active set in original column indices, ascending.

    Raises:
        ValidationError: If k or lam is out of range
    """
    _check_lambda(lam)
    screened = marginal_screen(data, k)
    restricted = data.restrict(screened.support)
    chosen = lasso_fit(restricted, lam)

    pairs = sorted((screened.support[i], s) for i, s in zip(chosen.support, chosen.signs))
    model = SelectedModel(
        procedure=Procedure.MS_LASSO,
        support=[j for j, _ in pairs],
        signs=[s for _, s in pairs],
        stage_supports={"screened": list(screened.support), "lasso": [j for j, _ in pairs]},
        stage_signs={"screened": list(screened.signs), "lasso": [s for _, s in pairs]},
    )
    event = compose_events(encode_ms_event(data, screened), encode_lasso_event(restricted, chosen, lam))
    return model, event


def encode_ms_lasso_event(data: Dataset, model: SelectedModel, lam: float) -> SelectionEvent:
    """
    Rebuild the composed event of a marginal screening + Lasso model from its stage records

    Raises:
        ModelMismatch: If the model lacks stage records or does not belong to this dataset
    """
    model.check_against(data, Procedure.MS_LASSO)
    if not model.stage_supports or not model.stage_signs or "screened" not in model.stage_supports:
        raise ValidationError("Model is missing its screening stage record")
    screened_support = model.stage_supports["screened"]
    screened = SelectedModel(
        procedure=Procedure.MS,
        support=screened_support,
        signs=model.stage_signs["screened"],
    )
    local = {j: i for i, j in enumerate(screened_support)}
    pairs = sorted((local[j], s) for j, s in zip(model.support, model.signs))
    chosen = SelectedModel(procedure=Procedure.LASSO, support=[i for i, _ in pairs], signs=[s for _, s in pairs])
    restricted = data.restrict(screened_support)
    return compose_events(encode_ms_event(data, screened), encode_lasso_event(restricted, chosen, lam))


class Lasso(BaseSelector):
    """Lasso at a fixed penalty"""

    procedure = Procedure.LASSO

    def __init__(self, lam: float):
        _check_lambda(lam)
        self.lam = lam

    def select(self, data: Dataset) -> SelectedModel:
        return lasso_fit(data, self.lam)

    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        return encode_lasso_event(data, model, self.lam)


class MarginalScreeningLasso(BaseSelector):
    """Marginal screening to k columns, then the Lasso at a fixed penalty"""

    procedure = Procedure.MS_LASSO

    def __init__(self, k: int, lam: float):
        _check_lambda(lam)
        self.k = k
        self.lam = lam

    def select(self, data: Dataset) -> SelectedModel:
        return ms_plus_lasso(data, self.k, self.lam)[0]

    def encode(self, data: Dataset, model: SelectedModel) -> SelectionEvent:
        return encode_ms_lasso_event(data, model, self.lam)

    def run(self, data: Dataset) -> Tuple[SelectedModel, SelectionEvent]:
        return ms_plus_lasso(data, self.k, self.lam)
