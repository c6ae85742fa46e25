"""
Selection procedures with polyhedral selection events
"""

from typing import Optional, Union

from ..errors import ValidationError
from .base import BaseSelector, Procedure, SelectedModel
from .lasso import (
    Lasso,
    MarginalScreeningLasso,
    encode_lasso_event,
    encode_ms_lasso_event,
    lasso_fit,
    lasso_solve,
    ms_plus_lasso,
)
from .marginal import MarginalScreening, encode_ms_event, marginal_screen
from .nnls import NonNegativeLeastSquares, encode_nnls_event, nnls_solve
from .omp import OrthogonalMatchingPursuit, encode_omp_event, omp_select


def create_selector(
    procedure: Union[Procedure, str],
    k: Optional[int] = None,
    lam: Optional[float] = None,
) -> BaseSelector:
    """
    Create a selector for the given procedure

    Args:
        procedure: Procedure tag ("ms", "omp", "nnls", "ms-lasso" or "lasso")
        k: Model size for marginal screening, OMP and the screening stage
        lam: Lasso penalty

    Returns:
        BaseSelector instance

    Raises:
        ValidationError: If the procedure is unknown or a required parameter is missing
    """
    try:
        procedure = Procedure(procedure)
    except ValueError as e:
        raise ValidationError(f"Unknown procedure: {procedure}") from e

    if procedure in (Procedure.MS, Procedure.OMP, Procedure.MS_LASSO) and k is None:
        raise ValidationError(f"Procedure '{procedure.value}' requires k")
    if procedure in (Procedure.LASSO, Procedure.MS_LASSO) and lam is None:
        raise ValidationError(f"Procedure '{procedure.value}' requires lambda")

    if procedure == Procedure.MS:
        return MarginalScreening(k)
    if procedure == Procedure.OMP:
        return OrthogonalMatchingPursuit(k)
    if procedure == Procedure.NNLS:
        return NonNegativeLeastSquares()
    if procedure == Procedure.LASSO:
        return Lasso(lam)
    return MarginalScreeningLasso(k, lam)


__all__ = [
    "Procedure",
    "SelectedModel",
    "BaseSelector",
    "create_selector",
    "MarginalScreening",
    "OrthogonalMatchingPursuit",
    "NonNegativeLeastSquares",
    "Lasso",
    "MarginalScreeningLasso",
    "marginal_screen",
    "encode_ms_event",
    "omp_select",
    "encode_omp_event",
    "nnls_solve",
    "encode_nnls_event",
    "lasso_fit",
    "lasso_solve",
    "encode_lasso_event",
    "ms_plus_lasso",
    "encode_ms_lasso_event",
]
