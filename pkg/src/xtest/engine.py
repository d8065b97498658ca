"""Adaptive session engine: two-set scheduler, selection modes, termination.

A session runs over two sets. The priority queue holds referenced questions,
with ordering-constraint references always outranking causal-link references;
the free set holds the initially callable questions in document order and is
consulted only when the queue is empty. The session ends when both sets are
drained or when the configured termination mode is satisfied earlier.

Within the ordering class the queue preserves the context-sensitive logical
order of nested constraint lines: each answer's ordering batch is scheduled
ahead of batches still pending from earlier answers (depth-first), except for
balanced-repeat batches, which queue behind all pending ordering references.
Causal references dequeue in insertion order under the fifo eventing policy,
or by descending reference count under by_reference_count.

All mutating operations on one SessionState must be externally serialized;
distinct sessions are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .answers import AnswerOutcome, SubmittedAnswer, evaluate_answer, select_fired_option
from .errors import (
    ConfigError,
    InvalidDefinitionError,
    NotFinishedError,
    SessionFinishedError,
    WrongQuestionError,
)
from .model import OrderType, Question, TestDefinition
from .rng import Xorshift64
from .validation import classify_questions, error_diagnostics


class TerminationMode(str, Enum):
    ALL_ANSWERED = "all_answered"
    FINALS_REACHED = "finals_reached"
    ALL_CORRECT = "all_correct"


class EventingPolicy(str, Enum):
    FIFO = "fifo"
    BY_REFERENCE_COUNT = "by_reference_count"


class PriorityClass(str, Enum):
    ORDERING = "ordering"
    CAUSAL = "causal"


@dataclass(frozen=True)
class SessionConfig:
    seed: int
    termination_mode: TerminationMode = TerminationMode.ALL_ANSWERED
    max_visits_per_question: int = 3
    max_balanced_repeats: int = 2
    eventing_policy: EventingPolicy = EventingPolicy.FIFO

    def validate(self) -> None:
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.max_visits_per_question < 1:
            raise ConfigError("max_visits_per_question must be >= 1")
        if self.max_balanced_repeats < 0:
            raise ConfigError("max_balanced_repeats must be >= 0")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "termination_mode": self.termination_mode.value,
            "max_visits_per_question": self.max_visits_per_question,
            "max_balanced_repeats": self.max_balanced_repeats,
            "eventing_policy": self.eventing_policy.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionConfig":
        try:
            return cls(
                seed=int(data["seed"]),
                termination_mode=TerminationMode(data.get("termination_mode", "all_answered")),
                max_visits_per_question=int(data.get("max_visits_per_question", 3)),
                max_balanced_repeats=int(data.get("max_balanced_repeats", 2)),
                eventing_policy=EventingPolicy(data.get("eventing_policy", "fifo")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid session config: {exc}")


@dataclass(frozen=True)
class QueuedRef:
    question_id: str
    priority_class: PriorityClass
    seq: int


@dataclass(frozen=True)
class HistoryEntry:
    question_id: str
    correct: bool
    step: int


@dataclass
class SessionState:
    definition: TestDefinition
    config: SessionConfig
    free_set: list[str]
    final_ids: frozenset[str]
    rng: Xorshift64
    queue_ordering: list[QueuedRef] = field(default_factory=list)
    queue_causal: list[QueuedRef] = field(default_factory=list)
    history: list[HistoryEntry] = field(default_factory=list)
    balanced_window: list[bool] = field(default_factory=list)
    ref_counts: dict[str, int] = field(default_factory=dict)
    visit_counts: dict[str, int] = field(default_factory=dict)
    repeat_count: int = 0
    balance_floor_reached: bool = False
    pending_id: str | None = None
    last_source: str | None = None
    last_priority_class: PriorityClass | None = None
    last_balanced_average: float | None = None
    finished: bool = False
    mode_satisfied: bool = False
    seq_counter: int = 0

    def take_seq(self) -> int:
        self.seq_counter += 1
        return self.seq_counter

    def queued_in_class(self, question_id: str, priority_class: PriorityClass) -> bool:
        segment = (
            self.queue_ordering
            if priority_class is PriorityClass.ORDERING
            else self.queue_causal
        )
        return any(ref.question_id == question_id for ref in segment)

    def snapshot(self) -> dict:
        """Full observable state; equal snapshots mean interchangeable sessions."""
        return {
            "queue_ordering": [[r.question_id, r.seq] for r in self.queue_ordering],
            "queue_causal": [[r.question_id, r.seq] for r in self.queue_causal],
            "free_set": list(self.free_set),
            "history": [[e.question_id, e.correct, e.step] for e in self.history],
            "balanced_window": list(self.balanced_window),
            "ref_counts": dict(sorted(self.ref_counts.items())),
            "visit_counts": dict(sorted(self.visit_counts.items())),
            "repeat_count": self.repeat_count,
            "balance_floor_reached": self.balance_floor_reached,
            "rng": self.rng.snapshot(),
            "pending_id": self.pending_id,
            "finished": self.finished,
            "mode_satisfied": self.mode_satisfied,
            "seq_counter": self.seq_counter,
        }


@dataclass(frozen=True)
class SubmitResult:
    """Outcome of one answer plus everything it enqueued (for the event log)."""

    outcome: AnswerOutcome
    ordering_enqueued: tuple[str, ...]
    causal_enqueued: tuple[str, ...]
    unused_refs: tuple[str, ...]
    repeat_ids: tuple[str, ...] | None
    balanced_average: float | None
    finished: bool


@dataclass(frozen=True)
class SessionReport:
    total_selections: int
    distinct_questions: int
    answered_count: int
    correct_count: int
    correct_ratio: float
    attempts: dict[str, list[bool]]
    balanced_repeats: int
    balance_floor_reached: bool
    termination_mode: str
    mode_satisfied: bool

    def to_dict(self) -> dict:
        return {
            "total_selections": self.total_selections,
            "distinct_questions": self.distinct_questions,
            "answered_count": self.answered_count,
            "correct_count": self.correct_count,
            "correct_ratio": self.correct_ratio,
            "attempts": {qid: list(flags) for qid, flags in self.attempts.items()},
            "balanced_repeats": self.balanced_repeats,
            "balance_floor_reached": self.balance_floor_reached,
            "termination_mode": self.termination_mode,
            "mode_satisfied": self.mode_satisfied,
        }


def start_session(definition: TestDefinition, config: SessionConfig) -> SessionState:
    """Fresh session: free set in document order, empty queue, seeded RNG."""
    config.validate()
    errors = error_diagnostics(definition)
    if errors:
        raise InvalidDefinitionError(
            "definition has blocking diagnostics: " + "; ".join(d.line() for d in errors)
        )
    classes = classify_questions(definition)
    state = SessionState(
        definition=definition,
        config=config,
        free_set=list(classes.free_ids),
        final_ids=classes.final_ids,
        rng=Xorshift64(config.seed),
    )
    is_finished(state)
    return state


def _dequeue(state: SessionState) -> QueuedRef | None:
    """Next queued reference, ordering class strictly before causal."""
    for segment in (state.queue_ordering, state.queue_causal):
        if not segment:
            continue
        if state.config.eventing_policy is EventingPolicy.BY_REFERENCE_COUNT:
            best = max(
                range(len(segment)),
                key=lambda i: (state.ref_counts.get(segment[i].question_id, 0), -i),
            )
            return segment.pop(best)
        return segment.pop(0)
    return None


def next_question(state: SessionState) -> str | None:
    """Select the next question id, or None when the session just finished.

    Idempotent while an answer is outstanding: repeated calls return the
    in-flight question without consuming anything. Questions that reached
    the visit cap are dropped from whichever set yields them.
    """
    if state.finished:
        raise SessionFinishedError("session is finished; no further questions")
    if state.pending_id is not None:
        return state.pending_id
    while True:
        ref = _dequeue(state)
        if ref is not None:
            qid = ref.question_id
            source = "queue"
            priority_class = ref.priority_class
        elif state.free_set:
            qid = state.free_set.pop(0)
            source = "free"
            priority_class = None
        else:
            is_finished(state)  # both sets drained
            return None
        if state.visit_counts.get(qid, 0) >= state.config.max_visits_per_question:
            continue  # at the visit cap: dropped from its source set
        break
    if source == "queue" and qid in state.free_set:
        # A queued selection consumes the free-set entry as well, otherwise
        # the same question would be re-presented from the free set later.
        state.free_set.remove(qid)
    state.visit_counts[qid] = state.visit_counts.get(qid, 0) + 1
    state.pending_id = qid
    state.last_source = source
    state.last_priority_class = priority_class
    return qid


def submit_answer(state: SessionState, question_id: str, answer: SubmittedAnswer) -> SubmitResult:
    """Evaluate the in-flight question and run the post-answer pipeline.

    Pipeline order: record history, ordering constraints, causal links,
    balanced constraint, termination check. Raises without mutating state
    when the id does not match or the answer variant is wrong.
    """
    if state.finished:
        raise SessionFinishedError("session is finished; answers are no longer accepted")
    if state.pending_id is None or question_id != state.pending_id:
        raise WrongQuestionError(
            f"expected answer for {state.pending_id!r}, got {question_id!r}",
            question_id=question_id,
        )
    question = state.definition.question(question_id)
    outcome = evaluate_answer(question, answer)

    state.history.append(HistoryEntry(question_id, outcome.correct, len(state.history)))
    if state.definition.balanced is not None:
        state.balanced_window.append(outcome.correct)
        if len(state.balanced_window) > state.definition.balanced.window_n:
            state.balanced_window.pop(0)
    state.pending_id = None

    ordering_ids = apply_ordering_constraints(state, question)
    fired = select_fired_option(question, outcome)
    causal_ids = apply_causal_links(state, question, outcome)
    repeat_ids = apply_balanced_constraint(state)
    is_finished(state)

    return SubmitResult(
        outcome=outcome,
        ordering_enqueued=tuple(ordering_ids),
        causal_enqueued=tuple(causal_ids),
        unused_refs=fired.unused_refs,
        repeat_ids=tuple(repeat_ids) if repeat_ids is not None else None,
        balanced_average=state.last_balanced_average if repeat_ids is not None else None,
        finished=state.finished,
    )


def enqueue_ordering_batch(
    state: SessionState, ids: list[str], *, at_front: bool = True
) -> list[str]:
    """Insert one batch of ordering-class references.

    Constraint batches go to the front of the class segment so a nested
    dependency line runs to completion before older pending references;
    balanced-repeat batches pass ``at_front=False`` to queue behind them.
    Ids already queued in the class are suppressed (reference counts still
    increment).
    """
    batch: list[QueuedRef] = []
    batch_ids: set[str] = set()
    for qid in ids:
        state.ref_counts[qid] = state.ref_counts.get(qid, 0) + 1
        if qid in batch_ids or state.queued_in_class(qid, PriorityClass.ORDERING):
            continue
        batch.append(QueuedRef(qid, PriorityClass.ORDERING, state.take_seq()))
        batch_ids.add(qid)
    if at_front:
        state.queue_ordering[0:0] = batch
    else:
        state.queue_ordering.extend(batch)
    return [ref.question_id for ref in batch]


def enqueue_causal(state: SessionState, ids: tuple[str, ...] | list[str]) -> list[str]:
    """Append causal-class references, severing cycles at the visit cap."""
    enqueued: list[str] = []
    for qid in ids:
        state.ref_counts[qid] = state.ref_counts.get(qid, 0) + 1
        if state.visit_counts.get(qid, 0) >= state.config.max_visits_per_question:
            continue  # cycle bound: capped targets are not enqueued
        if state.queued_in_class(qid, PriorityClass.CAUSAL):
            continue
        state.queue_causal.append(QueuedRef(qid, PriorityClass.CAUSAL, state.take_seq()))
        enqueued.append(qid)
    return enqueued


def apply_ordering_constraints(state: SessionState, question: Question) -> list[str]:
    """Enqueue the answered question's order references.

    ``orderType="normal"`` enqueues the whole list in listed order;
    ``orderType="alternative"`` draws exactly one reference uniformly with
    the session RNG.
    """
    refs = question.order_refs
    if not refs:
        return []
    if question.order_type is OrderType.ALTERNATIVE:
        chosen = [refs[state.rng.randbelow(len(refs))]]
    else:
        chosen = list(refs)
    return enqueue_ordering_batch(state, chosen, at_front=True)


def apply_causal_links(
    state: SessionState, question: Question, outcome: AnswerOutcome
) -> list[str]:
    fired = select_fired_option(question, outcome)
    return enqueue_causal(state, fired.fired)


def apply_balanced_constraint(state: SessionState) -> list[str] | None:
    """Evaluate the balanced window; None means continue.

    Only a full window is evaluated (the window is cleared after a repeat and
    must refill). The average is strictly compared: a repeat triggers when
    ``a <= p``. Once the repeat budget is spent the session continues but the
    report is flagged balance-floor reached.
    """
    balanced = state.definition.balanced
    if balanced is None or len(state.balanced_window) < balanced.window_n:
        return None
    average = 100.0 * sum(state.balanced_window) / balanced.window_n
    state.last_balanced_average = average
    if average > balanced.threshold_p:
        return None
    if state.repeat_count >= state.config.max_balanced_repeats:
        state.balance_floor_reached = True
        return None
    repeat_ids = [entry.question_id for entry in state.history[-balanced.window_n:]]
    enqueue_ordering_batch(state, repeat_ids, at_front=False)
    state.balanced_window.clear()
    state.repeat_count += 1
    return repeat_ids


def is_finished(state: SessionState) -> bool:
    """Re-evaluate termination; sets the finished flag when reached.

    Exhaustion of both sets always terminates; the configured mode may
    terminate earlier (all finals answered, or every question answered
    correctly at least once).
    """
    if state.finished:
        return True
    exhausted = (
        not state.queue_ordering
        and not state.queue_causal
        and not state.free_set
        and state.pending_id is None
    )
    mode = state.config.termination_mode
    if mode is TerminationMode.ALL_ANSWERED:
        mode_condition = exhausted
    elif mode is TerminationMode.FINALS_REACHED:
        answered = {entry.question_id for entry in state.history}
        mode_condition = state.final_ids <= answered
    else:
        correct = {entry.question_id for entry in state.history if entry.correct}
        mode_condition = all(qid in correct for qid in state.definition.question_ids)
    if exhausted or mode_condition:
        state.finished = True
        state.mode_satisfied = bool(mode_condition)
    return state.finished


def score_session(state: SessionState) -> SessionReport:
    if not state.finished:
        raise NotFinishedError("session report requested before termination")
    attempts: dict[str, list[bool]] = {}
    for entry in state.history:
        attempts.setdefault(entry.question_id, []).append(entry.correct)
    answered = len(state.history)
    correct_count = sum(1 for entry in state.history if entry.correct)
    return SessionReport(
        total_selections=answered,
        distinct_questions=len(attempts),
        answered_count=answered,
        correct_count=correct_count,
        correct_ratio=correct_count / answered if answered else 0.0,
        attempts=attempts,
        balanced_repeats=state.repeat_count,
        balance_floor_reached=state.balance_floor_reached,
        termination_mode=state.config.termination_mode.value,
        mode_satisfied=state.mode_satisfied,
    )
