"""Domain model for XML test definitions.

Key classes:
- TestDefinition: one parsed test file (root config + questions + reference graph)
- Question: one question node with ordering attributes and answer options
- AnswerOption: a right/wrong option carrying causal forward/backward references
- MultipleChoice / TrueFalse / Completion / Numeric: the format payloads
- BalancedConfig: the root-level "repeat the last n questions" rule
- Diagnostic: a validation finding (errors block sessions, warnings do not)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union


class OrderType(str, Enum):
    NORMAL = "normal"
    ALTERNATIVE = "alternative"


class QuestionKind(str, Enum):
    NORMAL = "normal"
    FORCED = "forced"


class Correctness(str, Enum):
    RIGHT = "right"
    WRONG = "wrong"


class RefKind(str, Enum):
    ORDER = "order"
    FORWARD = "forward"
    BACKWARD = "backward"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class MultipleChoice:
    """Pick one or several choices; correct iff the selected index set matches exactly."""

    choices: tuple[str, ...]
    correct_indices: frozenset[int]
    multi_select: bool = False

    type_name = "choice"


@dataclass(frozen=True)
class TrueFalse:
    correct: bool

    type_name = "true_false"


@dataclass(frozen=True)
class Completion:
    """Free-text answer matched against accepted strings (trimmed, case-folded by default)."""

    accepted: tuple[str, ...]
    case_sensitive: bool = False

    type_name = "completion"


@dataclass(frozen=True)
class Numeric:
    """Numeric answer correct within an absolute tolerance of the expected value."""

    expected: float
    tolerance: float = 0.0

    type_name = "numeric"


QuestionFormat = Union[MultipleChoice, TrueFalse, Completion, Numeric]


@dataclass(frozen=True)
class AnswerOption:
    """One Right/Wrong option.

    ``forward_refs`` fire when the answer is right, ``backward_refs`` when it
    is wrong; the non-matching list on the matched option is never fired but
    is preserved for inspection.
    """

    correctness: Correctness
    body: str = ""
    forward_refs: tuple[str, ...] = ()
    backward_refs: tuple[str, ...] = ()


@dataclass(frozen=True)
class Question:
    id: str
    prompt: str
    format: QuestionFormat
    options: tuple[AnswerOption, ...] = ()
    order_refs: tuple[str, ...] = ()
    order_type: OrderType = OrderType.NORMAL
    kind: QuestionKind = QuestionKind.NORMAL

    def option_for(self, correctness: Correctness) -> AnswerOption | None:
        """First option of the given correctness; the causal-link carrier."""
        for option in self.options:
            if option.correctness is correctness:
                return option
        return None

    def outgoing_refs(self) -> list[RefEdge]:
        edges = [RefEdge(target, RefKind.ORDER) for target in self.order_refs]
        for option in self.options:
            edges.extend(RefEdge(t, RefKind.FORWARD) for t in option.forward_refs)
            edges.extend(RefEdge(t, RefKind.BACKWARD) for t in option.backward_refs)
        return edges


@dataclass(frozen=True)
class RefEdge:
    target: str
    kind: RefKind


@dataclass(frozen=True)
class BalancedConfig:
    """Root-level rule ``balanced="n p"``.

    window_n: how many trailing answers form the window (>= 1).
    threshold_p: percent-correct floor in [0, 100]; the session continues only
    while the window average stays strictly above it.
    """

    window_n: int
    threshold_p: float

    def __post_init__(self) -> None:
        if self.window_n < 1:
            raise ValueError("window_n must be >= 1")
        if not 0.0 <= self.threshold_p <= 100.0:
            raise ValueError("threshold_p must be within [0, 100]")


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    question_id: str | None = None

    def line(self) -> str:
        """Line-oriented form: SEVERITY CODE question_id message."""
        qid = self.question_id if self.question_id else "-"
        return f"{self.severity.value.upper()} {self.code} {qid} {self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "question_id": self.question_id,
            "message": self.message,
        }


@dataclass
class TestDefinition:
    """Validated in-memory model of one XML test file.

    ``questions`` preserves document order exactly; ``ref_graph`` maps each
    question id to its outgoing references with their edge kind. Diagnostics
    collected while parsing are attached but excluded from equality, so a
    serialize/re-parse round trip compares structurally.
    """

    test_id: str = ""
    balanced: BalancedConfig | None = None
    questions: tuple[Question, ...] = ()
    ref_graph: dict[str, tuple[RefEdge, ...]] = field(default_factory=dict)
    parse_diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.ref_graph:
            self.ref_graph = {q.id: tuple(q.outgoing_refs()) for q in self.questions}
        self._by_id = {q.id: q for q in self.questions}

    def question(self, question_id: str) -> Question:
        return self._by_id[question_id]

    def has_question(self, question_id: str) -> bool:
        return question_id in self._by_id

    @property
    def question_ids(self) -> list[str]:
        return [q.id for q in self.questions]
