"""Exception hierarchy shared by every scaler module."""

from __future__ import annotations


class ScalerError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(ScalerError, ValueError):
    """An input violates a documented precondition."""


class NotFound(ScalerError, LookupError):
    """A referenced node count, parameter id or case does not exist."""


class ParseError(InvalidArgument):
    """Text input (CSV, CPV string, command output) could not be parsed.

    ``line`` is the 1-based line number when the input is a file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RunFailure(ScalerError, RuntimeError):
    """The system under tuning failed to produce a response time."""


class HarnessTimeout(RunFailure):
    """A harness command exceeded its timeout."""


class AdaptationAborted(RunFailure):
    """An executor failure stopped an adaptation run part-way.

    ``trials`` holds every trial completed before the failure.
    """

    def __init__(self, message: str, trials, default_score: float | None = None):
        super().__init__(message)
        self.trials = list(trials)
        self.default_score = default_score
