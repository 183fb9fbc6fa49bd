"""Exception types shared across the toolkit.

Kept in one module so callers (CLI, service) can map them to exit codes
and HTTP statuses without importing every subsystem.
"""


class PolyG2PError(Exception):
    """Base class for all toolkit errors."""


class MalformedPinyin(PolyG2PError):
    """Text does not match the canonical toned form ``[a-z]+[1-5]``."""


class SchemaError(PolyG2PError):
    """A dictionary record violates the file schema."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class FormatError(PolyG2PError):
    """A dataset row violates the expected layout."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownCharacter(PolyG2PError):
    """The requested character has no dictionary entry."""


class EmptyCandidateList(PolyG2PError):
    """Correction was asked to project onto an empty candidate list."""


class EmptyDataset(PolyG2PError):
    """An operation that needs at least one sample got none."""


class IndexOutOfRange(PolyG2PError):
    """Target index does not address a character of the sentence."""


class InvalidIndex(PolyG2PError):
    """Position-encoding arguments are inconsistent."""


class SequenceTooLong(PolyG2PError):
    """Token sequence exceeds the model's maximum length."""


class AnswerTooLong(PolyG2PError):
    """A training answer does not fit the model's sequence budget."""


class BackendUnavailable(PolyG2PError):
    """The generation backend failed to produce a usable reply."""
