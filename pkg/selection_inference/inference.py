"""
Selective tests and confidence intervals for coefficients of a selected model
"""

from dataclasses import dataclass, replace
from typing import List, Literal, Optional, Tuple

import numpy as np

from .data import Dataset
from .errors import NotEstimable, ValidationError
from .numerics import QRFactor, normal_quantile
from .polytope import SelectionEvent, TruncationInterval, truncation_interval
from .selectors import SelectedModel
from .truncnorm import PivotSpec, invert_pivot, tn_cdf

Alternative = Literal["two-sided", "greater", "less"]


@dataclass(frozen=True)
class InferenceResult:
    """Selective inference for one selected coefficient

    Values are on the scale of the dataset's unit-norm columns unless the
    result came from `rescaled`.
    """

    coefficient_index: int
    name: str
    beta_hat: float
    pivot: float
    p_value: float
    interval: Tuple[float, float]
    z_interval: Tuple[float, float]
    alpha_level: float
    truncation: TruncationInterval
    sigma2: float

    def rescaled(self, scale: float) -> "InferenceResult":
        """Report coefficients for a column of norm `scale` (beta / scale)"""
        t = self.truncation
        return replace(
            self,
            beta_hat=self.beta_hat / scale,
            interval=(self.interval[0] / scale, self.interval[1] / scale),
            z_interval=(self.z_interval[0] / scale, self.z_interval[1] / scale),
            truncation=replace(
                t,
                v_minus=t.v_minus / scale,
                v_plus=t.v_plus / scale,
                eta=t.eta / scale,
                scale=t.scale / scale**2,
                observed=t.observed / scale,
            ),
        )


def _check_alpha(alpha_level: float) -> None:
    if not 0.0 < alpha_level < 1.0:
        raise ValidationError("Significance level must lie in (0, 1)", diagnostics={"alpha": alpha_level})


def _factor(data: Dataset, model: SelectedModel) -> QRFactor:
    return QRFactor.of(data.X[:, model.support])


def eta_for_coefficient(data: Dataset, model: SelectedModel, j: int) -> np.ndarray:
    """
    Contrast with eta^T mu = beta*_j, the j-th coefficient of the projection of mu onto X_S

    Args:
        data: Dataset the model was selected on
        model: Selected model
        j: Column index, must be in the support

    Returns:
        eta = (X_S^T)^+ e_j

    Raises:
        ModelMismatch: If j is not selected
        RankDeficient: If X_S is rank deficient
    """
    position = model.position(j)
    unit = np.zeros(model.size)
    unit[position] = 1.0
    return _factor(data, model).pseudoinverse_apply(unit)


def population_target(data: Dataset, model: SelectedModel, mu: np.ndarray) -> np.ndarray:
    """beta*_S = X_S^+ mu, the coefficients the selective intervals cover, in support order"""
    return _factor(data, model).solve(np.asarray(mu, dtype=float))


def coefficient_truncation(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
) -> TruncationInterval:
    """
    Truncation of eta_j^T y by the selection event

    A zero noise variance keeps the bounds and reports a zero scale.
    """
    sigma2 = data.require_sigma2()
    eta = eta_for_coefficient(data, model, j)
    if sigma2 == 0.0:
        return replace(truncation_interval(event, eta, 1.0, data.y), scale=0.0)
    return truncation_interval(event, eta, sigma2, data.y)


def pivot_from_truncation(truncation: TruncationInterval, hypothesized: float) -> float:
    """Truncated Gaussian CDF of the observed contrast under mean `hypothesized`"""
    if truncation.scale == 0.0:
        # limit of the CDF as the variance vanishes
        if truncation.observed == hypothesized:
            return 0.5
        return 1.0 if truncation.observed > hypothesized else 0.0
    spec = PivotSpec(
        observed=truncation.observed,
        mean=hypothesized,
        variance=truncation.scale,
        lower=truncation.v_minus,
        upper=truncation.v_plus,
    )
    return tn_cdf(spec)


def selective_pivot(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
    hypothesized: float = 0.0,
) -> float:
    """
    F^{[V-, V+]}_{hypothesized, sigma^2 ||eta_j||^2}(eta_j^T y)

    Uniform on (0, 1) conditional on the selection event when
    `hypothesized` is the true beta*_j.
    """
    return pivot_from_truncation(coefficient_truncation(data, model, event, j), hypothesized)


def p_value_from_pivot(pivot: float, alternative: Alternative = "two-sided") -> float:
    if alternative == "two-sided":
        return float(min(1.0, 2.0 * min(pivot, 1.0 - pivot)))
    if alternative == "greater":
        return float(1.0 - pivot)
    if alternative == "less":
        return float(pivot)
    raise ValidationError(f"Unknown alternative: {alternative}")


def selective_p_value(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
    hypothesized: float = 0.0,
    alternative: Alternative = "two-sided",
) -> float:
    """
    Selective p-value for H0: beta*_j = hypothesized

    Args:
        alternative: "two-sided" (2 min(F, 1 - F)), "greater" (1 - F) or "less" (F)
    """
    return p_value_from_pivot(selective_pivot(data, model, event, j, hypothesized), alternative)


def hypothesis_test(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
    beta_j: float,
    alpha_level: float,
) -> bool:
    """
    Level-alpha selective test of H0: beta*_j = beta_j

    Returns:
        True if H0 is accepted, i.e. alpha/2 < pivot < 1 - alpha/2
    """
    _check_alpha(alpha_level)
    pivot = selective_pivot(data, model, event, j, beta_j)
    return alpha_level / 2.0 < pivot < 1.0 - alpha_level / 2.0


def interval_from_truncation(truncation: TruncationInterval, alpha_level: float) -> Tuple[float, float]:
    """
    Equal-tailed interval [L, U] with F_L = 1 - alpha/2 and F_U = alpha/2

    When eta^T y ties V- or V+ the pivot is 0 or 1 for every mean, so no
    endpoint exists; the whole line is returned and `truncation.tie`
    names the limit.
    """
    _check_alpha(alpha_level)
    if truncation.scale == 0.0:
        return truncation.observed, truncation.observed
    if truncation.tie is not None:
        return -np.inf, np.inf
    args = (truncation.observed, truncation.scale, truncation.v_minus, truncation.v_plus)
    lower = invert_pivot(*args, target=1.0 - alpha_level / 2.0)
    upper = invert_pivot(*args, target=alpha_level / 2.0)
    return lower, upper


def confidence_interval(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
    alpha_level: float,
) -> Tuple[float, float]:
    """
    Selective (1 - alpha) confidence interval for beta*_j

    Raises:
        BracketFailure: If the pivot cannot be inverted
    """
    return interval_from_truncation(coefficient_truncation(data, model, event, j), alpha_level)


def z_interval(data: Dataset, model: SelectedModel, j: int, alpha_level: float) -> Tuple[float, float]:
    """
    Unadjusted interval beta_hat_j +/- sigma z_{1-alpha/2} sqrt((X_S^T X_S)^{-1}_jj)

    Ignores selection; used as the comparison baseline.
    """
    _check_alpha(alpha_level)
    sigma2 = data.require_sigma2()
    factor = _factor(data, model)
    position = model.position(j)
    beta_hat = float(factor.solve(data.y)[position])
    half_width = np.sqrt(sigma2 * factor.gram_inverse_diagonal()[position]) * normal_quantile(1.0 - alpha_level / 2.0)
    return beta_hat - float(half_width), beta_hat + float(half_width)


def estimate_sigma2(data: Dataset) -> float:
    """
    ||y - X beta_hat||^2 / (n - p) from the full least squares fit

    Raises:
        NotEstimable: If n <= p
        RankDeficient: If X is rank deficient
    """
    if data.n <= data.p:
        raise NotEstimable(
            "Noise variance needs n > p; supply sigma2 instead",
            diagnostics={"n": data.n, "p": data.p},
        )
    residual = QRFactor.of(data.X).residual(data.y)
    rss = float(residual @ residual)
    floor = (data.n * np.finfo(float).eps * max(1.0, float(np.linalg.norm(data.y)))) ** 2
    if rss <= floor:
        return 0.0
    return rss / (data.n - data.p)


def infer_coefficient(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    j: int,
    alpha_level: float,
    hypothesized: float = 0.0,
) -> InferenceResult:
    """Pivot, p-value, selective interval and z-interval for one coefficient"""
    _check_alpha(alpha_level)
    truncation = coefficient_truncation(data, model, event, j)
    pivot = pivot_from_truncation(truncation, hypothesized)
    return InferenceResult(
        coefficient_index=j,
        name=data.column_names[j],
        beta_hat=truncation.observed,
        pivot=pivot,
        p_value=p_value_from_pivot(pivot),
        interval=interval_from_truncation(truncation, alpha_level),
        z_interval=z_interval(data, model, j, alpha_level),
        alpha_level=alpha_level,
        truncation=truncation,
        sigma2=data.require_sigma2(),
    )


def infer_selected(
    data: Dataset,
    model: SelectedModel,
    event: SelectionEvent,
    alpha_level: float,
    original_scale: bool = True,
    columns: Optional[List[int]] = None,
) -> List[InferenceResult]:
    """
    Inference for every selected coefficient (or the given subset)

    Args:
        original_scale: Report beta on the pre-normalization column scale

    Returns:
        One InferenceResult per coefficient, in support order
    """
    results = []
    for j in columns if columns is not None else model.support:
        result = infer_coefficient(data, model, event, j, alpha_level)
        if original_scale:
            result = result.rescaled(float(data.column_scales[j]))
        results.append(result)
    return results
