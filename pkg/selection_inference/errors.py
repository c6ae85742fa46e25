"""
Exception hierarchy for selection inference
"""

from typing import Any, Dict, Optional

import pydantic


class SelectionInferenceError(Exception):
    """Base error; carries structured diagnostics for logging"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = diagnostics or {}


class ValidationError(SelectionInferenceError, ValueError):
    """Invalid input: bad arguments, data or configuration"""


class ModelMismatch(ValidationError):
    """Selected model does not belong to the dataset or procedure"""


class ConstantColumn(ValidationError):
    """A design column has zero norm after centering"""


class NotEstimable(ValidationError):
    """Noise variance cannot be estimated (n <= p)"""


class DataParseError(ValidationError):
    """CSV input could not be parsed into a numeric table"""


class NumericalError(SelectionInferenceError, ArithmeticError):
    """A numerical routine failed on otherwise valid input"""


class RankDeficient(NumericalError):
    """Design submatrix is numerically rank deficient"""


class EventViolated(NumericalError):
    """Response does not satisfy the selection event it should generate"""


class ZeroContrast(NumericalError):
    """Contrast vector has zero norm"""


class DegenerateInterval(NumericalError):
    """Truncation interval is numerically empty"""


class BracketFailure(NumericalError):
    """Pivot inversion found no sign change within the doubling cap"""


class SolverStalled(NumericalError):
    """Iterative solver hit its iteration cap before convergence"""


class AcceptanceTooLow(NumericalError):
    """Rejection sampler could not collect enough accepted draws"""


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def exit_code_for(error: Optional[BaseException]) -> int:
    """
    Map an exception to the CLI exit code

    Args:
        error: Exception raised by a command, or None on success

    Returns:
        0 on success, 2 for validation errors, 3 for numerical failures
    """
    if error is None:
        return EXIT_OK
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(error, (ValidationError, pydantic.ValidationError, ValueError, FileNotFoundError)):
        return EXIT_VALIDATION
    return EXIT_NUMERICAL
