"""Errors raised by the fine-tuning harness."""

from __future__ import annotations


class PairtuneError(Exception):
    """Base class for harness errors."""


class SchemaError(PairtuneError):
    """A corpus record is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PairtuneError):
    """An argument or dataset violates a precondition."""


class OOMGuidanceError(PairtuneError):
    """Training ran out of memory; carries a concrete mitigation."""

    def __init__(self, max_sequence_length: int):
        self.suggested_max_sequence_length = max(8, max_sequence_length // 2)
        super().__init__(
            "training ran out of memory; retry with "
            f"max_sequence_length={self.suggested_max_sequence_length} "
            f"(currently {max_sequence_length}) or a smaller batch size"
        )
