"""Exception hierarchy. Each class carries the exit code the CLI maps it to."""

from __future__ import annotations


class IndMstError(Exception):
    exit_code = 1


class ParseError(IndMstError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleInstance(IndMstError):
    """The existing elements do not span the matroid."""

    exit_code = 3

    def __init__(self, message: str, components: int | None = None):
        self.components = components
        super().__init__(message)


class CapExceeded(IndMstError):
    exit_code = 4

    def __init__(self, horizon: int, cap: int):
        self.horizon = horizon
        self.cap = cap
        super().__init__(f"horizon T={horizon} exceeds the enumeration cap {cap}")


class OverflowRisk(IndMstError):
    exit_code = 5


class InvalidParams(IndMstError):
    exit_code = 6


class PreconditionViolated(IndMstError, ValueError):
    pass


class InternalInvariantBroken(IndMstError, RuntimeError):
    """Raised when an oracle behaves in a way no matroid can."""
