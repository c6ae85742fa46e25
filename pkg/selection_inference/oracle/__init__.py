"""
Independent brute-force references used to validate the inference pipeline
"""

from .enumeration import PartitionReport, brute_force_nnls, enumerate_partition, replay_omp
from .quadrature import grid_interval, quadrature_tn_cdf
from .sampler import RejectionSampler, rejection_sample_conditional

__all__ = [
    "RejectionSampler",
    "rejection_sample_conditional",
    "quadrature_tn_cdf",
    "grid_interval",
    "PartitionReport",
    "enumerate_partition",
    "brute_force_nnls",
    "replay_omp",
]
