"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class to an exit status, so library code raises the most
specific one that applies.
"""


class ModelError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


class ValidationError(ModelError, ValueError):
    """Malformed input: bad window, bad cover, unknown knot, wrong fiber length."""

    exit_code = 1

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class PreconditionError(ModelError, ValueError):
    """Well-formed input that violates a mathematical precondition."""

    exit_code = 2

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class InvariantViolation(ModelError, RuntimeError):
    """An identity that must hold by construction did not."""

    exit_code = 3
