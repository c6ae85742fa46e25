"""
Dense linear algebra and Gaussian special functions
"""

from .gaussian import log_normal_cdf, log_normal_sf, normal_cdf, normal_quantile, normal_sf, scaled_normal_sf
from .linalg import QRFactor, least_squares, pseudoinverse_apply

__all__ = [
    "QRFactor",
    "least_squares",
    "pseudoinverse_apply",
    "normal_cdf",
    "normal_sf",
    "log_normal_cdf",
    "log_normal_sf",
    "normal_quantile",
    "scaled_normal_sf",
]
