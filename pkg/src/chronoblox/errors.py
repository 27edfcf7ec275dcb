"""Exception types shared across the pipeline."""

from __future__ import annotations


class ChronobloxError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ChronobloxError):
    """Malformed input data; carries the offending row number when known."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ValidationError(ChronobloxError):
    """A domain invariant or precondition was violated."""


class PipelineStageError(ChronobloxError):
    """A pipeline stage failed; names the stage and chains the cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
