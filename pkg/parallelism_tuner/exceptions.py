"""Exceptions raised by the parallelism tuner."""

from typing import Any, Optional


class TunerError(Exception):
    """Base exception for tuner errors."""

    def __init__(
        self,
        message: str,
        details: Optional[dict[str, Any]] = None,
    ):
        """Initialize TunerError.

        Args:
            message: Error message
            details: Structured context (offending node, edge, sizes, ...)
        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """Return string representation."""
        return self.message


class InputError(TunerError):
    """Raised when user-supplied input is rejected (CLI exit code 1)."""


class GraphSyntaxError(InputError):
    """Raised when graph or hardware text is malformed."""

    def __init__(
        self,
        message: str = "Malformed input",
        location: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        """Initialize GraphSyntaxError."""
        super().__init__(message, details)
        self.location = location

    def __str__(self) -> str:
        """Return string representation with the offending location."""
        if self.location:
            return f"{self.message} (at {self.location})"
        return self.message


class GraphValidationError(InputError):
    """Raised when a graph violates one or more invariants."""

    def __init__(
        self,
        errors: list[str],
        message: str = "Graph validation failed",
        details: Optional[dict[str, Any]] = None,
    ):
        """Initialize GraphValidationError.

        Args:
            errors: One message per violated invariant, naming the node or edge
            message: Summary message
            details: Structured context
        """
        super().__init__(message, details)
        self.errors = list(errors)

    def __str__(self) -> str:
        """Return string representation with one line per violation."""
        if self.errors:
            errors_str = "\n".join(f"  {error}" for error in self.errors)
            return f"{self.message}\n{errors_str}"
        return self.message


class OversubscriptionError(InputError):
    """Raised when software threads exceed the hardware thread slots."""

    def __init__(
        self,
        software_threads: int,
        slots: int,
        message: Optional[str] = None,
    ):
        """Initialize OversubscriptionError."""
        super().__init__(
            message
            or f"Over-threading: {software_threads} software threads exceed "
            f"{slots} hardware thread slots",
            {"software_threads": software_threads, "slots": slots},
        )
        self.software_threads = software_threads
        self.slots = slots


class DimensionMismatchError(InputError):
    """Raised when matrix operands have incompatible shapes."""


class FitError(InputError):
    """Raised when a measured speedup cannot be fitted to Amdahl's law."""


class PoolShutdownError(TunerError):
    """Raised when work is submitted to a pool that has been shut down."""

    def __init__(self, message: str = "Pool has been shut down"):
        """Initialize PoolShutdownError."""
        super().__init__(message)
