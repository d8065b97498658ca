"""Append-only session event log and bit-exact replay.

Each session produces one log: a ``started`` record pinning the engine
version, the definition content hash and the full config, followed by
``question_selected`` / ``answer_submitted`` / ``refs_enqueued`` /
``balanced_repeat`` records, and a single terminal ``finished`` record.
Events serialize to one canonical JSON line each (sorted keys, compact
separators, ASCII), so two runs with the same seed produce byte-identical
logs and replays can be compared line by line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .answers import SubmittedAnswer, answer_from_payload
from .engine import (
    SessionConfig,
    SessionState,
    SubmitResult,
    next_question,
    score_session,
    start_session,
    submit_answer,
)
from .errors import (
    AfterFinishedError,
    BadEventError,
    DivergenceError,
    StepGapError,
    XTestError,
)
from .model import TestDefinition
from .parser import definition_hash

EVENT_KINDS = (
    "started",
    "question_selected",
    "answer_submitted",
    "refs_enqueued",
    "balanced_repeat",
    "finished",
)


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


@dataclass(frozen=True)
class SessionEvent:
    session_id: str
    step: int
    kind: str
    payload: dict

    def line(self) -> str:
        return canonical_json(
            {
                "session_id": self.session_id,
                "step": self.step,
                "kind": self.kind,
                "payload": self.payload,
            }
        )

    @classmethod
    def from_line(cls, line: str) -> "SessionEvent":
        try:
            data = json.loads(line)
            return cls(
                session_id=data["session_id"],
                step=int(data["step"]),
                kind=data["kind"],
                payload=data["payload"],
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise BadEventError(f"malformed event line: {exc}")


class EventLog:
    """Base append-only log enforcing the session-log structure."""

    def __init__(self) -> None:
        self._events: list[SessionEvent] = []

    def _check(self, event: SessionEvent) -> None:
        if event.kind not in EVENT_KINDS:
            raise BadEventError(f"unknown event kind {event.kind!r}")
        if event.step != len(self._events):
            raise StepGapError(
                f"expected step {len(self._events)}, got {event.step}"
            )
        if self._events and self._events[-1].kind == "finished":
            raise AfterFinishedError("log already holds a finished event")
        if event.step == 0 and event.kind != "started":
            raise BadEventError("a session log must begin with a started event")
        if event.step > 0 and event.kind == "started":
            raise BadEventError("started is only valid at step 0")

    def append(self, event: SessionEvent) -> None:
        self._check(event)
        self._events.append(event)

    def events(self) -> list[SessionEvent]:
        return list(self._events)

    def lines(self) -> list[str]:
        return [event.line() for event in self._events]

    def __len__(self) -> int:
        return len(self._events)


class InMemoryEventLog(EventLog):
    pass


class FileEventLog(EventLog):
    """One log file per session; an append is one flushed line."""

    def __init__(self, path: str | Path):
        super().__init__()
        self.path = Path(path)
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line:
                    self._events.append(SessionEvent.from_line(line))

    def append(self, event: SessionEvent) -> None:
        self._check(event)
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(event.line() + "\n")
            handle.flush()
        self._events.append(event)


class RecordedSession:
    """Engine wrapper that emits the canonical event stream while running.

    All front ends (HTTP service, CLI simulator, replay) drive sessions
    through this class so the recorded stream is identical regardless of
    entry point.
    """

    def __init__(
        self,
        definition: TestDefinition,
        config: SessionConfig,
        log: EventLog | None = None,
        *,
        session_id: str = "session",
        test_id: str = "",
    ):
        self.definition = definition
        self.log = log if log is not None else InMemoryEventLog()
        self.session_id = session_id
        self.test_id = test_id
        self.state: SessionState = start_session(definition, config)
        self._append(
            "started",
            {
                "config": config.to_dict(),
                "definition_hash": definition_hash(definition),
                "engine_version": __version__,
                "test_id": test_id,
            },
        )
        if self.state.finished:
            self._finish()

    def _append(self, kind: str, payload: dict) -> None:
        self.log.append(SessionEvent(self.session_id, len(self.log), kind, payload))

    def _finish(self) -> None:
        self._append("finished", {"report": score_session(self.state).to_dict()})

    def next_question(self) -> str | None:
        """Select (or re-serve) the current question; None once finished."""
        if self.state.finished:
            return None
        if self.state.pending_id is not None:
            return self.state.pending_id
        qid = next_question(self.state)
        if qid is None:
            self._finish()
            return None
        self._append("question_selected", {"question_id": qid, "source": self.state.last_source})
        return qid

    def submit(self, question_id: str, answer: SubmittedAnswer) -> SubmitResult:
        result = submit_answer(self.state, question_id, answer)
        self._append(
            "answer_submitted",
            {
                "question_id": question_id,
                "answer": answer.to_payload(),
                "correct": result.outcome.correct,
                "detail": result.outcome.detail,
            },
        )
        self._append(
            "refs_enqueued",
            {
                "question_id": question_id,
                "ordering": list(result.ordering_enqueued),
                "causal": list(result.causal_enqueued),
                "unused": list(result.unused_refs),
            },
        )
        if result.repeat_ids is not None:
            self._append(
                "balanced_repeat",
                {"repeat": list(result.repeat_ids), "average": result.balanced_average},
            )
        if self.state.finished:
            self._finish()
        return result

    def report(self) -> dict:
        return score_session(self.state).to_dict()

    @classmethod
    def replay(
        cls,
        definition: TestDefinition,
        recorded: list[SessionEvent],
        log: EventLog | None = None,
    ) -> "RecordedSession":
        """Re-run the engine from a recorded log and verify it bit-exactly.

        The recorded stream must be a line-for-line prefix of the
        regenerated one; any difference raises :class:`DivergenceError`.
        """
        if not recorded:
            raise DivergenceError("empty session log", step=0)
        started = recorded[0]
        if started.kind != "started":
            raise DivergenceError("log does not begin with a started event", step=0)
        payload = started.payload
        expected_hash = definition_hash(definition)
        if payload.get("definition_hash") != expected_hash:
            raise DivergenceError(
                "definition content hash mismatch; the log was recorded over a "
                "different definition",
                step=0,
            )
        if payload.get("engine_version") != __version__:
            raise DivergenceError(
                f"engine version mismatch: log has {payload.get('engine_version')!r}, "
                f"running {__version__!r}",
                step=0,
            )
        config = SessionConfig.from_dict(payload.get("config", {}))
        runner = cls(
            definition,
            config,
            log,
            session_id=started.session_id,
            test_id=payload.get("test_id", ""),
        )
        try:
            for event in recorded[1:]:
                if event.kind == "question_selected":
                    runner.next_question()
                elif event.kind == "answer_submitted":
                    answer = answer_from_payload(event.payload.get("answer", {}))
                    runner.submit(event.payload.get("question_id", ""), answer)
                elif event.kind == "finished" and not runner.state.finished:
                    # the live session finished by draining dead queue entries
                    # on its final selection attempt; replay that attempt
                    runner.next_question()
                # refs_enqueued / balanced_repeat are regenerated by submit
        except XTestError as exc:
            raise DivergenceError(f"replay rejected a recorded operation: {exc}")
        regenerated = runner.log.lines()
        for index, event in enumerate(recorded):
            if index >= len(regenerated) or regenerated[index] != event.line():
                actual = regenerated[index] if index < len(regenerated) else "<missing>"
                raise DivergenceError(
                    f"replay diverged at step {index}: recorded {event.line()!r}, "
                    f"regenerated {actual!r}",
                    step=index,
                )
        return runner


def append_event(log: EventLog, event: SessionEvent) -> None:
    """Validated append (module-level convenience over ``EventLog.append``)."""
    log.append(event)


def replay_session(definition: TestDefinition, events: list[SessionEvent]) -> SessionState:
    """Reconstructed session state after replaying a recorded log prefix."""
    return RecordedSession.replay(definition, events).state


def read_log_file(path: str | Path) -> list[SessionEvent]:
    events = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line:
            events.append(SessionEvent.from_line(line))
    return events
