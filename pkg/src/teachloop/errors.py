"""Domain errors shared across modules and mapped to API status codes."""


class TeachloopError(Exception):
    """Base class for all domain errors."""


class CorpusFormatError(TeachloopError):
    """A corpus / lexicon / labels line could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class DuplicateIdError(TeachloopError):
    """Two records share an id that must be unique."""


class NotFoundError(TeachloopError):
    """A sentence id, label key or counterfactual id does not exist."""


class StaleRevisionError(TeachloopError):
    """A write carried an expected revision that is no longer current."""


class PatternSyntaxError(TeachloopError):
    """Pattern string rejected by the parser; carries the column offset."""

    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"{message} (column {column})")


class NoMatchingRuleError(TeachloopError):
    """No learned rule of the requested label matches the sentence."""


class ClientError(TeachloopError):
    """Completion client failed after exhausting its retry budget."""


class IntegrityError(TeachloopError):
    """Stored state violates a structural invariant."""


class PreconditionError(TeachloopError):
    """An operation was called with arguments outside its contract."""
