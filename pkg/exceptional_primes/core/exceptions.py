"""Top-level exceptions for the exceptional-primes tool."""

from typing import Optional

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3


class ExceptionalPrimesError(Exception):
    """Base exception carrying the process exit code it maps to."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_INVARIANT_VIOLATION,
        detail: Optional[str] = None,
        module: str = "cli-reporting",
    ):
        self.message = message
        self.exit_code = exit_code
        self.detail = detail
        self.module = module
        super().__init__(self.message)


class InputError(ExceptionalPrimesError):
    """Exception raised for malformed user input (files, flags, JSON)."""

    def __init__(self, message: str = "Invalid input", **kwargs):
        super().__init__(message, exit_code=EXIT_INPUT_ERROR, **kwargs)


class InvariantViolation(ExceptionalPrimesError):
    """Exception raised when an internal mathematical invariant breaks."""

    def __init__(self, message: str = "Internal invariant violated", **kwargs):
        super().__init__(message, exit_code=EXIT_INVARIANT_VIOLATION, **kwargs)
