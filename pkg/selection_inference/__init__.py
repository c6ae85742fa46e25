"""
Exact post-selection inference for linear regression under polyhedral selection events
"""

from .config import AppConfig, ExperimentConfig
from .data import Dataset
from .errors import (
    NumericalError,
    SelectionInferenceError,
    ValidationError,
    exit_code_for,
)
from .inference import (
    InferenceResult,
    confidence_interval,
    estimate_sigma2,
    eta_for_coefficient,
    hypothesis_test,
    infer_selected,
    selective_p_value,
    selective_pivot,
    z_interval,
)
from .polytope import SelectionEvent, compose_events, contains, truncation_interval
from .selectors import Procedure, SelectedModel, create_selector
from .truncnorm import PivotSpec, invert_pivot, tn_cdf

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "ExperimentConfig",
    "Dataset",
    "SelectionInferenceError",
    "ValidationError",
    "NumericalError",
    "exit_code_for",
    "InferenceResult",
    "eta_for_coefficient",
    "selective_pivot",
    "selective_p_value",
    "hypothesis_test",
    "confidence_interval",
    "z_interval",
    "estimate_sigma2",
    "infer_selected",
    "SelectionEvent",
    "compose_events",
    "contains",
    "truncation_interval",
    "Procedure",
    "SelectedModel",
    "create_selector",
    "PivotSpec",
    "tn_cdf",
    "invert_pivot",
]
