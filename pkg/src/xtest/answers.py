"""Answer evaluation for the four question formats.

Evaluation is pure: identical (question, answer) pairs always produce
identical outcomes. Exactly one of the forward/backward reference lists can
fire per answer, never both.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatMismatchError
from .model import (
    AnswerOption,
    Completion,
    Correctness,
    MultipleChoice,
    Numeric,
    Question,
    TrueFalse,
)


@dataclass(frozen=True)
class ChoiceSelection:
    indices: frozenset[int]

    def to_payload(self) -> dict:
        return {"kind": "choice", "indices": sorted(self.indices)}


@dataclass(frozen=True)
class BooleanAnswer:
    value: bool

    def to_payload(self) -> dict:
        return {"kind": "boolean", "value": self.value}


@dataclass(frozen=True)
class TextAnswer:
    value: str

    def to_payload(self) -> dict:
        return {"kind": "text", "value": self.value}


@dataclass(frozen=True)
class NumericAnswer:
    value: float

    def to_payload(self) -> dict:
        return {"kind": "numeric", "value": self.value}


SubmittedAnswer = ChoiceSelection | BooleanAnswer | TextAnswer | NumericAnswer


def answer_from_payload(payload: dict) -> SubmittedAnswer:
    """Inverse of ``to_payload``; used by the HTTP API and the session log."""
    if not isinstance(payload, dict) or "kind" not in payload:
        raise FormatMismatchError("answer payload must be an object with a 'kind' field")
    kind = payload["kind"]
    try:
        if kind == "choice":
            return ChoiceSelection(indices=frozenset(int(i) for i in payload["indices"]))
        if kind == "boolean":
            if not isinstance(payload["value"], bool):
                raise FormatMismatchError("boolean answer requires a true/false value")
            return BooleanAnswer(value=payload["value"])
        if kind == "text":
            return TextAnswer(value=str(payload["value"]))
        if kind == "numeric":
            return NumericAnswer(value=float(payload["value"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatMismatchError(f"malformed {kind!r} answer payload: {exc}")
    raise FormatMismatchError(f"unknown answer kind {kind!r}")


@dataclass(frozen=True)
class AnswerOutcome:
    correct: bool
    matched_option: AnswerOption | None
    detail: str


@dataclass(frozen=True)
class FiredRefs:
    """References that fire for an outcome plus the non-fired ones kept for the log."""

    forward_refs: tuple[str, ...]
    backward_refs: tuple[str, ...]
    unused_refs: tuple[str, ...]

    @property
    def fired(self) -> tuple[str, ...]:
        return self.forward_refs or self.backward_refs


def evaluate_answer(question: Question, answer: SubmittedAnswer) -> AnswerOutcome:
    """Decide correctness and bind the matching Right/Wrong option.

    Raises :class:`FormatMismatchError` when the answer variant does not
    match the question format.
    """
    fmt = question.format
    if isinstance(fmt, MultipleChoice):
        if not isinstance(answer, ChoiceSelection):
            raise _mismatch(question, answer)
        correct = answer.indices == fmt.correct_indices
        detail = "selection matches" if correct else "selection differs from the correct set"
    elif isinstance(fmt, TrueFalse):
        if not isinstance(answer, BooleanAnswer):
            raise _mismatch(question, answer)
        correct = answer.value == fmt.correct
        detail = "boolean matches" if correct else "boolean differs"
    elif isinstance(fmt, Completion):
        if not isinstance(answer, TextAnswer):
            raise _mismatch(question, answer)
        submitted = answer.value.strip()
        if fmt.case_sensitive:
            correct = any(submitted == accepted for accepted in fmt.accepted)
        else:
            folded = submitted.casefold()
            correct = any(folded == accepted.casefold() for accepted in fmt.accepted)
        detail = "text accepted" if correct else "text not among accepted strings"
    elif isinstance(fmt, Numeric):
        if not isinstance(answer, NumericAnswer):
            raise _mismatch(question, answer)
        correct = abs(answer.value - fmt.expected) <= fmt.tolerance
        detail = "within tolerance" if correct else "outside tolerance"
    else:
        raise FormatMismatchError(f"unhandled question format {fmt!r}", question_id=question.id)

    matched = question.option_for(Correctness.RIGHT if correct else Correctness.WRONG)
    return AnswerOutcome(correct=correct, matched_option=matched, detail=detail)


def select_fired_option(question: Question, outcome: AnswerOutcome) -> FiredRefs:
    """Causal references fired by the outcome.

    A right answer fires the matched right option's forward references; a
    wrong answer fires the matched wrong option's backward references. The
    matched option's opposite-direction references never fire and are
    returned as ``unused_refs`` for inspection.
    """
    option = outcome.matched_option
    if option is None:
        return FiredRefs(forward_refs=(), backward_refs=(), unused_refs=())
    if outcome.correct:
        return FiredRefs(
            forward_refs=option.forward_refs,
            backward_refs=(),
            unused_refs=option.backward_refs,
        )
    return FiredRefs(
        forward_refs=(),
        backward_refs=option.backward_refs,
        unused_refs=option.forward_refs,
    )


def _mismatch(question: Question, answer: SubmittedAnswer) -> FormatMismatchError:
    return FormatMismatchError(
        f"answer variant {type(answer).__name__} does not match "
        f"{type(question.format).__name__} question",
        question_id=question.id,
    )
