"""
Exception hierarchy and CLI error rendering.
"""

import json
import sys
from typing import Any

from loguru import logger


class AdjlabException(Exception):
    """Base exception for adjlab."""

    def __init__(self, message: str, code: str = "INTERNAL_ERROR"):
        """Initialize exception."""
        self.message = message
        self.code = code
        super().__init__(message)


# Polynomial layer


class PolynomialSyntaxError(AdjlabException):
    """Raised when a polynomial expression cannot be parsed."""

    def __init__(self, message: str, position: int):
        """Initialize exception."""
        self.position = position
        super().__init__(f"{message} at position {position}", "POLY_SYNTAX")


class UnknownVariableError(AdjlabException):
    """Raised when an expression names a variable outside the declared list."""

    def __init__(self, name: str, position: int):
        """Initialize exception."""
        self.name = name
        self.position = position
        super().__init__(f"Unknown variable '{name}' at position {position}", "UNKNOWN_VARIABLE")


class NegativeExponentError(AdjlabException):
    """Raised when a power has a negative exponent."""

    def __init__(self, position: int):
        """Initialize exception."""
        self.position = position
        super().__init__(f"Negative exponent at position {position}", "NEGATIVE_EXPONENT")


class ArityMismatchError(AdjlabException):
    """Raised when a substitution or evaluation has the wrong number of components."""

    def __init__(self, expected: int, got: int):
        """Initialize exception."""
        super().__init__(f"Expected {expected} components, got {got}", "ARITY_MISMATCH")


class VariableMismatchError(AdjlabException):
    """Raised when two polynomials are combined over different variable lists."""

    def __init__(self, left: tuple[str, ...], right: tuple[str, ...]):
        """Initialize exception."""
        super().__init__(
            f"Variable lists differ: ({', '.join(left)}) vs ({', '.join(right)})", "VARIABLE_MISMATCH"
        )


class ZeroPolynomialError(AdjlabException):
    """Raised when an operation needs a nonzero polynomial."""

    def __init__(self, operation: str):
        """Initialize exception."""
        super().__init__(f"{operation} is undefined for the zero polynomial", "ZERO_POLYNOMIAL")


class NotDivisibleError(AdjlabException):
    """Raised when an exact division has a remainder."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "NOT_DIVISIBLE")


# Blow-ups and resolution


class CenterNotInChartError(AdjlabException):
    """Raised when a blow-up center does not belong to the chart it names."""

    def __init__(self, chart_id: str, reason: str):
        """Initialize exception."""
        self.chart_id = chart_id
        super().__init__(f"Invalid center for chart '{chart_id}': {reason}", "CENTER_NOT_IN_CHART")


class IrrationalCenterError(AdjlabException):
    """Raised when a required blow-up center has non-rational coordinates."""

    def __init__(self, chart_id: str, witness: str):
        """Initialize exception."""
        self.chart_id = chart_id
        self.witness = witness
        super().__init__(
            f"Chart '{chart_id}' needs a blow-up at a non-rational point; locus witness: {witness}",
            "IRRATIONAL_CENTER",
        )


class MaxStepsExceededError(AdjlabException):
    """Raised when the blow-up loop does not terminate within its budget."""

    def __init__(self, max_steps: int):
        """Initialize exception."""
        super().__init__(f"No normal-crossing resolution within {max_steps} blow-ups", "MAX_STEPS_EXCEEDED")


class NonSquarefreeError(AdjlabException):
    """Raised when the defining polynomial has a repeated factor."""

    def __init__(self, common_factor: str):
        """Initialize exception."""
        super().__init__(f"Input is not squarefree; gcd(f, df) = {common_factor}", "NON_SQUAREFREE")


class UnverifiedSncError(AdjlabException):
    """Raised when an operation needs a verified or asserted normal-crossing tree."""

    def __init__(self, status: str):
        """Initialize exception."""
        super().__init__(
            f"Resolution tree has snc_status '{status}'; verify it or assert normal crossings", "UNVERIFIED_SNC"
        )


# Multiplier ideals


class NoWitnessError(AdjlabException):
    """Raised when no E_f witness set exists within the degree bound."""

    def __init__(self, degree_bound: int):
        """Initialize exception."""
        super().__init__(f"No E_f witness set within degree bound {degree_bound}; raise the bound", "NO_WITNESS")


class DimensionMismatchError(AdjlabException):
    """Raised when monomials and ideals live in different ambient dimensions."""

    def __init__(self, expected: int, got: int):
        """Initialize exception."""
        super().__init__(f"Dimension mismatch: expected {expected}, got {got}", "DIMENSION_MISMATCH")


class NotMonomialError(AdjlabException):
    """Raised when an ideal generator is not a single monomial."""

    def __init__(self, text: str):
        """Initialize exception."""
        super().__init__(f"'{text}' is not a monomial", "NOT_MONOMIAL")


class InvalidCoefficientError(AdjlabException):
    """Raised when a multiplier coefficient is not positive."""

    def __init__(self, value: str):
        """Initialize exception."""
        super().__init__(f"Coefficient must be positive, got {value}", "INVALID_COEFFICIENT")


# Adjunction and L2 checks


class ZeroPartialDerivativeError(AdjlabException):
    """Raised when the chosen residue index has an identically vanishing partial."""

    def __init__(self, mu: int):
        """Initialize exception."""
        super().__init__(f"df/dz_{mu} vanishes identically; choose another index", "ZERO_PARTIAL")


class FormMismatchError(AdjlabException):
    """Raised when a form and a resolution tree refer to different hypersurfaces."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "FORM_MISMATCH")


class SamplingError(AdjlabException):
    """Raised when not enough regular sample points can be found."""

    def __init__(self, wanted: int, found: int):
        """Initialize exception."""
        super().__init__(f"Found {found} regular sample points, wanted {wanted}", "SAMPLING_FAILED")


class InvalidBranchError(AdjlabException):
    """Raised when a branch parameterization does not lie on V."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "INVALID_BRANCH")


class InvalidGraphError(AdjlabException):
    """Raised when a graph chart does not describe V."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "INVALID_GRAPH")


class EmptyRegionError(AdjlabException):
    """Raised when a graph-chart region is empty or unbounded."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "EMPTY_REGION")


class NotQuasiHomogeneousError(AdjlabException):
    """Raised when a polynomial is not homogeneous for the given weights."""

    def __init__(self, weights: tuple[int, ...]):
        """Initialize exception."""
        super().__init__(f"Polynomial is not quasi-homogeneous for weights {list(weights)}", "NOT_QUASI_HOMOGENEOUS")


class TooFewShellsError(AdjlabException):
    """Raised when a verdict is requested on fewer than four shells."""

    def __init__(self, count: int):
        """Initialize exception."""
        super().__init__(f"Verdict needs at least 4 shells, got {count}", "TOO_FEW_SHELLS")


# Problems, configuration and pipeline


class ProblemValidationError(AdjlabException):
    """Raised when a problem file is unreadable or inconsistent."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(message, "INVALID_PROBLEM")


class ConfigurationError(AdjlabException):
    """Raised when configuration is invalid."""

    def __init__(self, message: str):
        """Initialize exception."""
        super().__init__(f"Configuration error: {message}", "CONFIGURATION_ERROR")


class PipelineStageError(AdjlabException):
    """Wraps a failure with the pipeline stage it happened in."""

    def __init__(self, stage: str, error: AdjlabException):
        """Initialize exception."""
        self.stage = stage
        self.error = error
        super().__init__(f"[{stage}] {error.message}", error.code)


def error_payload(exc: AdjlabException) -> dict[str, Any]:
    """Build the JSON error object for an adjlab exception."""
    inner = exc.error if isinstance(exc, PipelineStageError) else exc
    payload: dict[str, Any] = {
        "code": exc.code,
        "message": exc.message,
        "type": type(inner).__name__,
    }
    if isinstance(exc, PipelineStageError):
        payload["stage"] = exc.stage
    return {"error": payload}


def report_cli_error(exc: AdjlabException) -> int:
    """
    Log an adjlab exception and write its JSON payload to stderr.

    Args:
        exc: The exception raised by a command

    Returns:
        Process exit code for errors
    """
    logger.error("adjlab exception", error=exc.message, code=exc.code)
    sys.stderr.write(json.dumps(error_payload(exc)) + "\n")
    return 2
