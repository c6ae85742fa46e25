"""
Quadrature reference for the truncated Gaussian CDF
"""

import math
from typing import Sequence, Tuple

import numpy as np
from scipy import integrate

from ..errors import ValidationError

QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200
SUPPORT_SDS = 40.0


def _mass(lo: float, hi: float, peak: float) -> float:
    """Integral of exp(-(t^2 - peak^2) / 2) over [lo, hi], split at the peak"""
    # beyond 40 sd of the peak the integrand is below exp(-800)
    lo = max(lo, peak - SUPPORT_SDS)
    hi = min(hi, peak + SUPPORT_SDS)
    if hi <= lo:
        return 0.0

    def density(t: float) -> float:
        return math.exp(-0.5 * (t - peak) * (t + peak))

    if lo < peak < hi:
        pieces = [(lo, peak), (peak, hi)]
    else:
        pieces = [(lo, hi)]
    total = 0.0
    for a, b in pieces:
        value, _ = integrate.quad(density, a, b, epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
        total += value
    return total


def quadrature_tn_cdf(mean: float, variance: float, lower: float, upper: float, x: float) -> float:
    """
    CDF at x of N(mean, variance) truncated to [lower, upper], by adaptive quadrature

    The density is rescaled by its maximum on the interval so tail
    intervals do not underflow.

    Raises:
        ValidationError: If lower >= upper or variance <= 0
    """
    if not lower < upper:
        raise ValidationError("Quadrature needs lower < upper", diagnostics={"lower": lower, "upper": upper})
    if not variance > 0:
        raise ValidationError("Quadrature needs a positive variance", diagnostics={"variance": variance})
    sd = math.sqrt(variance)
    a, b, z = (lower - mean) / sd, (upper - mean) / sd, (x - mean) / sd
    if z <= a:
        return 0.0
    if z >= b:
        return 1.0
    peak = min(max(0.0, a), b)
    below = _mass(a, z, peak)
    above = _mass(z, b, peak)
    return below / (below + above)


def grid_interval(
    observed: float,
    variance: float,
    lower: float,
    upper: float,
    alpha_level: float,
    grid: Sequence[float],
) -> Tuple[float, float]:
    """
    Selective interval by dense grid search over the mean

    Returns the grid points where the quadrature pivot first drops to
    1 - alpha/2 and alpha/2, linearly interpolated between neighbours.
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    values = np.array([quadrature_tn_cdf(m, variance, lower, upper, observed) for m in grid])

    def crossing(target: float) -> float:
        # pivot decreases along the grid
        above = np.flatnonzero(values >= target)
        if above.size == 0 or above[-1] + 1 >= grid.size:
            raise ValidationError("Grid does not bracket the pivot target", diagnostics={"target": target})
        i = int(above[-1])
        x0, x1, f0, f1 = grid[i], grid[i + 1], values[i], values[i + 1]
        return float(x0 + (target - f0) * (x1 - x0) / (f1 - f0))

    return crossing(1.0 - alpha_level / 2.0), crossing(alpha_level / 2.0)
