"""
One-dimensional truncation of a contrast eta^T y by a polyhedral event
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import EventViolated, ValidationError, ZeroContrast
from ..truncnorm import tie_side
from .event import SelectionEvent

ALPHA_ZERO_RTOL = 1e-12
DEFAULT_EVENT_TOL = 1e-8


@dataclass(frozen=True)
class TruncationInterval:
    """Range [v_minus, v_plus] of eta^T y compatible with the event

    `scale` is the variance sigma^2 ||eta||^2 of eta^T y and `observed`
    the value eta^T y for the response that generated the event.
    """

    v_minus: float
    v_plus: float
    v_zero: float
    eta: np.ndarray
    scale: float
    observed: float

    @property
    def eta_norm(self) -> float:
        return float(np.linalg.norm(self.eta))

    @property
    def width(self) -> float:
        return self.v_plus - self.v_minus

    @property
    def tie(self) -> Optional[str]:
        """Limit ("lower" or "upper") that eta^T y ties within 1e-8 sd, if any"""
        return tie_side(self.observed, self.scale, self.v_minus, self.v_plus)


def truncation_interval(
    event: SelectionEvent,
    eta: np.ndarray,
    sigma2: float,
    y: np.ndarray,
    tol: float = DEFAULT_EVENT_TOL,
) -> TruncationInterval:
    """
    Compute (V-, V+, V0) for the contrast eta under the event

    With alpha_j = (A eta)_j / ||eta||^2 (Sigma = sigma^2 I), the event
    reduces to bounds on eta^T y:
        V- = max_{alpha_j < 0} (b_j - (Ay)_j + alpha_j eta^T y) / alpha_j
        V+ = min_{alpha_j > 0} (b_j - (Ay)_j + alpha_j eta^T y) / alpha_j
        V0 = min_{alpha_j = 0} (b_j - (Ay)_j)
    Empty max/min give -inf/+inf. Rows are never materialized: only the
    products A y and A eta are formed.

    Args:
        event: Selection event {Ay <= b}
        eta: Contrast vector
        sigma2: Noise variance
        y: Response that generated the event
        tol: Relative tolerance for the event check

    Returns:
        TruncationInterval for eta

    Raises:
        ZeroContrast: If ||eta|| = 0
        EventViolated: If y violates the event beyond tolerance
    """
    eta = np.asarray(eta, dtype=float)
    y = np.asarray(y, dtype=float)
    if sigma2 <= 0:
        raise ValidationError("Noise variance must be positive", diagnostics={"sigma2": sigma2})
    eta_sq = float(eta @ eta)
    if eta_sq == 0.0:
        raise ZeroContrast("Contrast vector has zero norm")
    observed = float(eta @ y)
    scale = sigma2 * eta_sq

    if event.row_count == 0:
        return TruncationInterval(-np.inf, np.inf, np.inf, eta, scale, observed)

    slack = event.offsets() - event.apply(y)
    threshold = -tol * (1.0 + np.linalg.norm(y))
    worst = float(slack.min())
    if worst < threshold:
        raise EventViolated(
            "Response violates its selection event",
            diagnostics={"worst_slack": worst, "threshold": float(threshold), "row": int(slack.argmin())},
        )

    v_minus, v_plus, v_zero = _limits(event, eta, eta_sq, slack, observed)
    # ties within tolerance can leave eta^T y a hair outside its own interval
    v_minus = min(v_minus, observed)
    v_plus = max(v_plus, observed)
    return TruncationInterval(v_minus, v_plus, v_zero, eta, scale, observed)


def truncation_limits(event: SelectionEvent, eta: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """
    (V-, V+, V0) as functions of any response y, inside the event or not

    They depend on y only through its component orthogonal to eta.

    Raises:
        ZeroContrast: If ||eta|| = 0
    """
    eta = np.asarray(eta, dtype=float)
    y = np.asarray(y, dtype=float)
    eta_sq = float(eta @ eta)
    if eta_sq == 0.0:
        raise ZeroContrast("Contrast vector has zero norm")
    if event.row_count == 0:
        return -np.inf, np.inf, np.inf
    return _limits(event, eta, eta_sq, event.offsets() - event.apply(y), float(eta @ y))


def _limits(
    event: SelectionEvent,
    eta: np.ndarray,
    eta_sq: float,
    slack: np.ndarray,
    observed: float,
) -> Tuple[float, float, float]:
    alpha = event.apply(eta) / eta_sq
    cutoff = ALPHA_ZERO_RTOL * np.max(np.abs(alpha))
    zero = np.abs(alpha) <= cutoff
    negative = (alpha < 0) & ~zero
    positive = (alpha > 0) & ~zero

    bounds = np.empty_like(alpha)
    active = ~zero
    bounds[active] = (slack[active] + alpha[active] * observed) / alpha[active]

    v_minus = float(bounds[negative].max()) if negative.any() else -np.inf
    v_plus = float(bounds[positive].min()) if positive.any() else np.inf
    v_zero = float(slack[zero].min()) if zero.any() else np.inf
    return v_minus, v_plus, v_zero
