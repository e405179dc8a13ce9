"""
Exception hierarchy for the Lagrangian configuration toolkit

Validation errors map to CLI exit code 1, numerical failures to exit code 2.
"""

from typing import Any, Dict, Optional


class LagconfError(Exception):
    """Base exception carrying a message and structured details"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message: str = message
        self.details: Dict[str, Any] = details or {}
        super().__init__(self.message)


class ValidationError(LagconfError):
    """A precondition or invariant of an operation was violated"""


class NotInvertibleError(ValidationError):
    """Inversion of the zero Novikov scalar"""


class NotInLambdaZeroError(ValidationError):
    """Exponential of a series with negative valuation"""


class NumericalError(LagconfError):
    """A numerical procedure failed to reach its guarantee"""


class OracleDivergenceError(NumericalError):
    """Damped Newton iteration did not converge"""


class SingularSystemError(NumericalError):
    """A linear system that must be invertible was singular"""


class RefinementError(NumericalError):
    """Order-by-order refinement stalled at a gap level"""
    def __init__(self, message: str, level: Any = None, details: Optional[Dict[str, Any]] = None):
        self.level = level
        merged = dict(details or {})
        if level is not None:
            merged.setdefault("level", str(level))
        super().__init__(message, merged)


class UsageError(LagconfError):
    """Unknown or missing CLI subcommand"""
