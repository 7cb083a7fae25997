"""
Error handling system for atomkit
Provides canonical error classes and the error document rendered by the CLI
"""

import logging
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from .config import settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CERTIFICATE_FAILED = 1
EXIT_ATOMKIT_ERROR = 2
EXIT_UNEXPECTED = 3


class AtomkitError(Exception):
    """Base toolkit error class"""

    def __init__(
        self,
        code: str = "atomkit_error",
        message: str = "Something went wrong.",
        details: Optional[Dict[str, Any]] = None,
        exit_code: int = EXIT_ATOMKIT_ERROR,
    ):
        self.code = code
        self.message = message
        self.details = details or {}
        self.exit_code = exit_code
        super().__init__(message)


class ValidationAtomkitError(AtomkitError):
    """Malformed input"""

    def __init__(
        self,
        message: str = "Invalid input provided.",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(code="validation_error", message=message, details=details)


class DimensionMismatchError(ValidationAtomkitError):
    """Vector, matrix or family shapes do not conform"""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(message=message, details={"expected": expected, "actual": actual})
        self.code = "dimension_mismatch"


class ComplementMismatchError(AtomkitError):
    """Projection pair does not match the kernel/range of the operator"""

    def __init__(self, identity: str, residual: float, message: Optional[str] = None):
        super().__init__(
            code="complement_mismatch",
            message=message or f"Complement pair violates {identity}",
            details={"identity": identity, "residual": residual},
        )


class InclusionFailureError(AtomkitError):
    """A required range inclusion does not hold"""

    def __init__(self, message: str, residual: float, tol: float):
        super().__init__(
            code="inclusion_failure",
            message=message,
            details={"residual": residual, "tol": tol},
        )


class RangeEqualityError(AtomkitError):
    """Range of K* and span of the functionals differ"""

    def __init__(self, message: str, forward_residual: float, backward_residual: float, tol: float):
        super().__init__(
            code="range_equality_failure",
            message=message,
            details={
                "forward_residual": forward_residual,
                "backward_residual": backward_residual,
                "tol": tol,
            },
        )


class DecompositionFailureError(AtomkitError):
    """Two subspaces are numerically not complementary"""

    def __init__(self, message: str, min_angle: float, condition: float):
        super().__init__(
            code="decomposition_failure",
            message=message,
            details={"min_angle": min_angle, "condition": condition},
        )


class UnverifiedCandidateError(AtomkitError):
    """An operation needs a verified atomic system and got a failing one"""

    def __init__(self, message: str, residual: float):
        super().__init__(
            code="unverified_candidate", message=message, details={"residual": residual}
        )


class SchemaError(AtomkitError):
    """Serialized document does not match the schema"""

    def __init__(self, message: str, field_errors: List[Dict[str, Any]], path: Optional[str] = None):
        super().__init__(
            code="schema_error",
            message=message,
            details={"path": path, "field_errors": field_errors},
        )

    @classmethod
    def from_validation_error(cls, exc: ValidationError, path: Optional[str] = None) -> "SchemaError":
        field_errors = []
        for error in exc.errors():
            field_path = " -> ".join(str(loc) for loc in error["loc"])
            field_errors.append(
                {"field": field_path, "message": error["msg"], "type": error["type"]}
            )
        message = f"Document validation failed: {len(field_errors)} field(s) have errors"
        if field_errors:
            message += f" (first: {field_errors[0]['field']}: {field_errors[0]['message']})"
        return cls(message=message, field_errors=field_errors, path=path)


class InfeasibleSpecError(AtomkitError):
    """Instance spec asks for something that cannot be generated"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(code="infeasible_spec", message=message, details=details)


class ConfigError(AtomkitError):
    """Suite configuration file is malformed"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(code="config_error", message=message, details=details)


def error_payload(error: Exception) -> Dict[str, Any]:
    """
    Render the error document printed by the CLI

    Args:
        error: The exception that occurred

    Returns:
        JSON-ready dictionary
    """
    if isinstance(error, AtomkitError):
        code, message, details = error.code, error.message, error.details
    else:
        code = "internal_error"
        message = "An unexpected error occurred" if settings.is_production else str(error)
        details = {}

    payload: Dict[str, Any] = {"success": False, "error": {"code": code, "message": message}}
    if details and not settings.is_production:
        payload["error"]["details"] = details

    logger.error(
        f"Error occurred: {code}",
        extra={
            "error_code": code,
            "error_message": message,
            "exception_type": type(error).__name__,
        },
    )
    return payload


def raise_validation_error(message: str, details: Optional[Dict[str, Any]] = None) -> None:
    """Raise a validation error"""
    raise ValidationAtomkitError(message=message, details=details)


def raise_dimension_mismatch(message: str, expected: Any = None, actual: Any = None) -> None:
    """Raise a dimension mismatch error"""
    raise DimensionMismatchError(message, expected=expected, actual=actual)
