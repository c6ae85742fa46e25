"""
Standard normal distribution functions, accurate in the far tails
"""

from typing import Union

import numpy as np
from scipy import special

ArrayLike = Union[float, np.ndarray]


def normal_cdf(x: ArrayLike) -> ArrayLike:
    """Phi(x), evaluated through erfc so the lower tail keeps full relative precision"""
    return special.ndtr(x)


def normal_sf(x: ArrayLike) -> ArrayLike:
    """1 - Phi(x) = Phi(-x)"""
    return special.ndtr(np.negative(x))


def log_normal_cdf(x: ArrayLike) -> ArrayLike:
    """log Phi(x); asymptotic expansion below x = -20"""
    return special.log_ndtr(x)


def log_normal_sf(x: ArrayLike) -> ArrayLike:
    """log(1 - Phi(x))"""
    return special.log_ndtr(np.negative(x))


def normal_quantile(q: ArrayLike) -> ArrayLike:
    """Inverse of Phi"""
    return special.ndtri(q)


def scaled_normal_sf(x: ArrayLike) -> ArrayLike:
    """(1 - Phi(x)) exp(x^2 / 2), finite and smooth for large x"""
    return 0.5 * special.erfcx(np.divide(x, np.sqrt(2.0)))
