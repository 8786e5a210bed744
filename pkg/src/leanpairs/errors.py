"""Exception types shared across the pipeline stages."""

from __future__ import annotations


class LeanpairsError(Exception):
    """Base class for all errors raised by this package."""


class UnbalancedDeclaration(LeanpairsError):
    """A declaration header has no `:=` terminator before its extent ends."""


class MissingSlot(LeanpairsError):
    """A template references a slot the tactic match did not capture."""

    def __init__(self, slot_name: str, kind: str):
        self.slot_name = slot_name
        self.kind = kind
        super().__init__(f"template for {kind!r} needs slot {slot_name!r}")


class ShotCountError(LeanpairsError):
    """Full-proof prompts require exactly six shot pairs."""


class ValidationError(LeanpairsError):
    """An input value violates an operation precondition."""


class TeacherFormatError(LeanpairsError):
    """The teacher completion contains no parseable two-element tuple."""


class EndpointError(LeanpairsError):
    """The teacher endpoint kept failing after all retries."""


class AuthError(LeanpairsError):
    """The teacher endpoint rejected our credentials (or none were found)."""


class SchemaError(LeanpairsError):
    """A structured input record is missing a field or has a wrong type."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInformalError(LeanpairsError):
    """An informal proof has no sentences to align tactics against."""


class TokenizerLoadError(LeanpairsError):
    """Vocab or merges files are missing, unreadable, or malformed."""


class RatioError(LeanpairsError):
    """Split ratios do not sum to one."""


class TranslatorError(LeanpairsError):
    """A translator call failed inside the training loop."""

    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"step {step}: {message}")
