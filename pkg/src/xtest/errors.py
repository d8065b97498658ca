"""Exception hierarchy shared by all xtest components.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can map failures without string matching.
"""

from __future__ import annotations


class XTestError(Exception):
    """Base class for all errors raised by this package."""

    code = "E-INTERNAL"

    def __init__(self, message: str, *, question_id: str | None = None):
        super().__init__(message)
        self.message = message
        self.question_id = question_id

    def __str__(self) -> str:
        if self.question_id:
            return f"{self.code} [{self.question_id}]: {self.message}"
        return f"{self.code}: {self.message}"


class ParseError(XTestError):
    """The XML document could not be turned into a test definition."""

    code = "E-XML"

    def __init__(self, message: str, *, code: str | None = None, question_id: str | None = None):
        super().__init__(message, question_id=question_id)
        if code is not None:
            self.code = code


class InvalidDefinitionError(XTestError):
    """A session was requested over a definition with error diagnostics."""

    code = "E-INVALID-DEF"


class ConfigError(XTestError):
    """A session configuration violates its invariants."""

    code = "E-INVALID-CONFIG"


class FormatMismatchError(XTestError):
    """The submitted answer variant does not match the question format."""

    code = "E-FORMAT-MISMATCH"


class WrongQuestionError(XTestError):
    """An answer was submitted for a question that is not in flight."""

    code = "E-WRONG-QUESTION"


class SessionFinishedError(XTestError):
    """The session already reached a terminal state."""

    code = "E-SESSION-FINISHED"


class NotFinishedError(XTestError):
    """A report was requested before the session finished."""

    code = "E-NOT-FINISHED"


class StepGapError(XTestError):
    """An event was appended with a non-contiguous step number."""

    code = "E-STEP-GAP"


class AfterFinishedError(XTestError):
    """An event was appended after the terminal event."""

    code = "E-AFTER-FINISHED"


class BadEventError(XTestError):
    """An event violates the log structure (misplaced or malformed)."""

    code = "E-BAD-EVENT"


class DivergenceError(XTestError):
    """Replay produced a different event stream than the recorded log."""

    code = "E-DIVERGENCE"

    def __init__(self, message: str, *, step: int | None = None):
        super().__init__(message)
        self.step = step
