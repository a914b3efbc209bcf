"""Exception types shared across the pipeline."""

import enum


class ErrorKind(str, enum.Enum):
    MALFORMED_XML = "malformed-xml"
    UNKNOWN_ELEMENT = "unknown-element"
    MISSING_ATTRIBUTE = "missing-attribute"
    DUPLICATE_ID = "duplicate-id"
    UNRESOLVED_REFERENCE = "unresolved-reference"
    TYPE_MISMATCH = "type-mismatch"
    UNSUPPORTED_CONSTRUCT = "unsupported-construct"


class HLUnfoldError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HLUnfoldError):
    """A located problem in a PNML input.

    ``position`` is a 1-based ``(line, column)`` pair.
    """

    def __init__(self, kind, position, message):
        self.kind = ErrorKind(kind)
        self.position = position
        self.message = message
        super().__init__(str(self))

    @property
    def line(self):
        return self.position[0]

    @property
    def column(self):
        return self.position[1]

    def __str__(self):
        line, col = self.position
        return f"{line}:{col}: {self.kind.value}: {self.message}"


class EvaluationError(HLUnfoldError):
    """A partial operation failed while evaluating an expression."""


class UndefinedSuccessor(EvaluationError):
    pass


class NegativeMultiset(EvaluationError):
    pass


class MarkingError(HLUnfoldError):
    """A ground initial marking could not be evaluated."""


class ResourceLimitError(HLUnfoldError):
    pass


class BoundExceeded(HLUnfoldError):
    pass


class InvalidIdentifier(HLUnfoldError):
    pass
