"""
Truncated Gaussian CDF pivot and its inversion in the mean
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import BracketFailure, DegenerateInterval, ValidationError
from .numerics import normal_cdf, normal_quantile, normal_sf, scaled_normal_sf

# standardized distance beyond which CDF differences are taken in log space
TAIL_SWITCH = 6.0
DEGENERATE_RTOL = 1e-14
OBSERVED_RTOL = 1e-8
TIE_RTOL = 1e-8
INITIAL_BRACKET_SDS = 10.0
MAX_DOUBLINGS = 60
BISECTION_RTOL = 1e-8


@dataclass(frozen=True)
class PivotSpec:
    """Arguments of F^{[lower, upper]}_{mean, variance}(observed)"""

    observed: float
    mean: float
    variance: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.variance > 0:
            raise ValidationError("Pivot variance must be positive", diagnostics={"variance": self.variance})
        if not self.lower < self.upper:
            raise DegenerateInterval(
                "Truncation interval is empty",
                diagnostics={"lower": self.lower, "upper": self.upper},
            )
        if not math.isfinite(self.mean) or not math.isfinite(self.observed):
            raise ValidationError("Pivot mean and observation must be finite")
        slack = OBSERVED_RTOL * math.sqrt(self.variance)
        if self.observed < self.lower - slack or self.observed > self.upper + slack:
            raise ValidationError(
                "Observation lies outside the truncation interval",
                diagnostics={"observed": self.observed, "lower": self.lower, "upper": self.upper},
            )

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


def _log_diff_ratio(log_z: float, log_a: float, log_b: float) -> float:
    """(e^{log_z} - e^{log_a}) / (e^{log_b} - e^{log_a}) without leaving log space"""
    denominator = np.expm1(log_a - log_b)
    if denominator == 0:
        raise DegenerateInterval("Truncated mass vanished in log space")
    return float(np.exp(log_z - log_b) * np.expm1(log_a - log_z) / denominator)


def _log_sf_ratio(x: float, x0: float, dx: float) -> float:
    """
    log Q(x) - log Q(x0) for x = x0 + dx >= x0 > 0

    `dx` must come from unstandardized differences: far from the mean x and
    x0 agree in most of their digits, so x - x0 would be mostly rounding.
    """
    if math.isinf(x):
        return -math.inf
    return float(np.log(scaled_normal_sf(x) / scaled_normal_sf(x0)) - dx * (x + x0) / 2.0)


def tie_side(observed: float, variance: float, lower: float, upper: float) -> Optional[str]:
    """Limit that observed sits on within TIE_RTOL sd: "lower", "upper" or None"""
    if not variance > 0:
        return None
    slack = TIE_RTOL * math.sqrt(variance)
    if observed - lower <= slack:
        return "lower"
    if upper - observed <= slack:
        return "upper"
    return None


def tn_cdf(spec: PivotSpec) -> float:
    """
    CDF of N(mean, variance) truncated to [lower, upper], evaluated at observed

    Both-tails-far cases are computed from Mills-ratio (erfcx) log
    differences anchored at the near limit, so screened contrasts many
    standard deviations from the truncation boundary neither underflow
    nor lose the width of a narrow interval to rounding.

    Args:
        spec: Pivot arguments

    Returns:
        F in [0, 1]

    Raises:
        DegenerateInterval: If upper - lower < 1e-14 * sd or the truncated mass underflows
    """
    sd = spec.sd
    if spec.upper - spec.lower < DEGENERATE_RTOL * sd:
        raise DegenerateInterval(
            "Truncation interval is numerically empty",
            diagnostics={"lower": spec.lower, "upper": spec.upper, "sd": sd},
        )
    if spec.observed <= spec.lower:
        return 0.0
    if spec.observed >= spec.upper:
        return 1.0
    a = (spec.lower - spec.mean) / sd
    b = (spec.upper - spec.mean) / sd
    z = (spec.observed - spec.mean) / sd

    if a > TAIL_SWITCH:
        value = _right_tail(a, z, b, (spec.observed - spec.lower) / sd, (spec.upper - spec.lower) / sd)
    elif b < -TAIL_SWITCH:
        value = _left_tail(a, z, b, (spec.upper - spec.observed) / sd, (spec.upper - spec.lower) / sd)
    elif a > 0:
        value = (normal_sf(a) - normal_sf(z)) / (normal_sf(a) - normal_sf(b))
    else:
        value = (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a))

    if not math.isfinite(value):
        raise DegenerateInterval(
            "Truncated Gaussian CDF is not finite",
            diagnostics={"a": a, "b": b, "z": z},
        )
    return float(min(max(value, 0.0), 1.0))


def _right_tail(a: float, z: float, b: float, za: float, ba: float) -> float:
    """(Q(a) - Q(z)) / (Q(a) - Q(b)) with z - a = za and b - a = ba"""
    denominator = -np.expm1(_log_sf_ratio(b, a, ba))
    if denominator == 0:
        raise DegenerateInterval("Truncated mass vanished in log space", diagnostics={"a": a, "b": b})
    return float(-np.expm1(_log_sf_ratio(z, a, za)) / denominator)


def _left_tail(a: float, z: float, b: float, bz: float, ba: float) -> float:
    """(Phi(z) - Phi(a)) / (Phi(b) - Phi(a)) with b - z = bz and b - a = ba, via Phi(x) = Q(-x)"""
    log_z = _log_sf_ratio(-z, -b, bz)
    log_a = _log_sf_ratio(-a, -b, ba)
    return _log_diff_ratio(log_z, log_a, 0.0)


def invert_pivot(
    observed: float,
    variance: float,
    lower: float,
    upper: float,
    target: float,
) -> float:
    """
    Solve F^{[lower, upper]}_{x, variance}(observed) = target for x

    F is strictly decreasing in x, so a bracket is grown from
    observed +/- 10 sd by doubling the offset (at most 60 times) and the
    root is refined by bisection to 1e-8 sd. Without truncation the root
    has the closed form observed - sd * Phi^{-1}(target).

    Raises:
        ValidationError: If target is not in (0, 1)
        DegenerateInterval: If observed ties a truncation limit, where F is
            constant in x and has no root
        BracketFailure: If no sign change is found within the doubling cap
    """
    if not 0.0 < target < 1.0:
        raise ValidationError("Pivot target must lie in (0, 1)", diagnostics={"target": target})
    if not variance > 0:
        raise ValidationError("Pivot variance must be positive", diagnostics={"variance": variance})
    sd = math.sqrt(variance)
    if math.isinf(lower) and math.isinf(upper):
        return float(observed - sd * normal_quantile(target))
    tie = tie_side(observed, variance, lower, upper)
    if tie is not None:
        raise DegenerateInterval(
            f"Observation ties the {tie} truncation limit",
            diagnostics={"tie": tie, "observed": observed, "lower": lower, "upper": upper},
        )

    def gap(x: float) -> float:
        return tn_cdf(PivotSpec(observed, x, variance, lower, upper)) - target

    lo = _expand(gap, observed, -INITIAL_BRACKET_SDS * sd, want_positive=True)
    hi = _expand(gap, observed, INITIAL_BRACKET_SDS * sd, want_positive=False)
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    return float(optimize.bisect(gap, lo, hi, xtol=BISECTION_RTOL * sd, maxiter=500))


def _expand(gap: Callable[[float], float], observed: float, offset: float, want_positive: bool) -> float:
    x = observed + offset
    for _ in range(MAX_DOUBLINGS + 1):
        value = gap(x)
        if (value >= 0.0) if want_positive else (value <= 0.0):
            return x
        offset *= 2.0
        x = observed + offset
    raise BracketFailure(
        "No sign change while bracketing the pivot root",
        diagnostics={"observed": observed, "last_point": x, "last_gap": value, "doublings": MAX_DOUBLINGS},
    )
