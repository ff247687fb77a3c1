"""
Error handling utilities.
"""
from typing import Dict, Any, Optional, Callable
import logging
import functools
import traceback

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
EXIT_CONFIG = 4


class AnalysisError(Exception):
    """Base class for analysis errors."""

    exit_code = EXIT_ERROR

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        Initialize the analysis error.

        Args:
            message (str): Error message
            details (Optional[Dict[str, Any]]): Additional error details
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form used in reports."""
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


# Symbol evaluation

class PoleHit(AnalysisError):
    """Evaluation point lies on a pole of the symbol."""


class DomainViolation(AnalysisError):
    """Evaluation point lies outside the claimed analyticity radius."""


class NonConvergence(AnalysisError):
    """Fourier coefficient doubling test failed."""


class LambdaInRange(AnalysisError):
    """Spectral parameter is attained (or nearly attained) by the symbol."""


class SchemaError(AnalysisError):
    """Symbol JSON or run configuration is malformed."""

    exit_code = EXIT_CONFIG


# Conformal maps and examples

class AspectOverflow(AnalysisError):
    """Rectangle aspect ratio outside the supported range."""


class PeelFailure(AnalysisError):
    """Principal-part extraction left a singular tail."""


class ParamInvalid(AnalysisError):
    """Example or map parameters are invalid."""

    exit_code = EXIT_CONFIG


class ZeroOutsideDisk(AnalysisError):
    """Blaschke zero or unimodular factor is invalid."""


# Valence geometry

class TooCloseToCurve(AnalysisError):
    """Query point is within the ambiguity band of the boundary curve."""


class PhaseUnresolved(AnalysisError):
    """Adaptive phase bisection exceeded its depth."""


class MeshOverflow(AnalysisError):
    """Boundary curve sampling exceeded the sample cap."""


class GridTooCoarse(AnalysisError):
    """A region component is too small for the grid."""


# Conditions

class LambdaNotInHole(AnalysisError):
    """Supplied witness is not inside a zero-valence component."""


# Operators

class CancellationFailure(AnalysisError):
    """Leading series terms did not cancel during eigenvector division."""


class PreimageSearchFailed(AnalysisError):
    """Not enough preimages were found."""


class MultiplePreimagesCollide(AnalysisError):
    """Two preimages coincide (multiple root)."""


class Overflow(AnalysisError):
    """Orbit growth exceeded the per-step cap."""


def handle_analysis_error(error: AnalysisError) -> int:
    """
    Handle an analysis error.

    Args:
        error (AnalysisError): The analysis error to handle

    Returns:
        int: Process exit code
    """
    logger.error(f"Analysis Error ({type(error).__name__}): {error.message}")
    if error.details:
        logger.error(f"Error details: {error.details}")
    return error.exit_code


def cli_error_handler(func: Callable[..., int]) -> Callable[..., int]:
    """
    Decorator converting errors raised by a CLI command into exit codes.

    Args:
        func (Callable): Command function to decorate

    Returns:
        Callable: Decorated function
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AnalysisError as e:
            return handle_analysis_error(e)
        except Exception as e:
            logger.error(f"Unhandled exception: {str(e)}")
            logger.error(traceback.format_exc())
            return EXIT_ERROR

    return wrapper
