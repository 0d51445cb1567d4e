"""
Exception hierarchy shared by every module of the package.

All errors raised on purpose derive from RefinedEulerError so that the CLI
can map them onto exit codes: instance problems exit with 1, contract
violations (failed cross-checks, solver failures, bit cap) exit with 2.
"""

from typing import Any, Dict, Optional


class RefinedEulerError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in sorted(self.context.items()))
        return f"{self.message} ({details})"


class DimensionMismatchError(RefinedEulerError):
    """Raised when matrix or module shapes are incompatible."""


class InvalidHomomorphismError(RefinedEulerError):
    """Raised when block data does not define a homomorphism of mixed modules."""


class OutsideModuleClassError(RefinedEulerError):
    """Raised when a construction leaves the rationally representable class."""


class PreconditionError(RefinedEulerError):
    """Raised when an operation's precondition fails."""


class DiagramError(RefinedEulerError):
    """Raised when an input diagram does not commute or is not exact."""


class ContractViolation(RefinedEulerError):
    """Raised when an internal postcondition or cross-check fails."""


class BitCapExceeded(ContractViolation):
    """Raised when an integer grows beyond the configured bit cap."""


class InstanceParseError(RefinedEulerError):
    """Raised when an instance or trivialization file is malformed."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        **context: Any,
    ):
        super().__init__(message, **context)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        base = super().__str__()
        if self.line is None:
            return base
        return f"line {self.line}, column {self.column}: {base}"
