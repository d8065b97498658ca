"""Scripted answer policies and the end-to-end session simulator.

Policies decide whether each selected question is answered correctly; the
concrete submitted answer is constructed from the question format so that it
is genuinely right or genuinely wrong under the grading rules. The Bernoulli
policy draws from the engine's documented generator family with an
independent sub-seed, keeping full runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .answers import (
    BooleanAnswer,
    ChoiceSelection,
    NumericAnswer,
    SubmittedAnswer,
    TextAnswer,
)
from .engine import SessionConfig
from .events import EventLog, RecordedSession, canonical_json
from .model import Completion, MultipleChoice, Numeric, Question, TestDefinition, TrueFalse
from .rng import policy_rng


def answer_for(question: Question, correct: bool) -> SubmittedAnswer:
    """A deterministic answer that grades as requested for this question."""
    fmt = question.format
    if isinstance(fmt, MultipleChoice):
        if correct:
            return ChoiceSelection(indices=frozenset(fmt.correct_indices))
        # The empty selection can never equal the correct set (>= 1 correct).
        return ChoiceSelection(indices=frozenset())
    if isinstance(fmt, TrueFalse):
        return BooleanAnswer(value=fmt.correct if correct else not fmt.correct)
    if isinstance(fmt, Completion):
        if correct:
            return TextAnswer(value=fmt.accepted[0])
        wrong = "!wrong!"
        while any(wrong.casefold() == accepted.casefold() for accepted in fmt.accepted):
            wrong += "!"
        return TextAnswer(value=wrong)
    if isinstance(fmt, Numeric):
        if correct:
            return NumericAnswer(value=fmt.expected)
        return NumericAnswer(value=fmt.expected + fmt.tolerance + 1.0)
    raise TypeError(f"unknown question format {fmt!r}")


class AnswerPolicy:
    name = "policy"

    def decide(self, question: Question) -> bool:
        raise NotImplementedError

    def answer(self, question: Question) -> tuple[SubmittedAnswer, bool]:
        correct = self.decide(question)
        return answer_for(question, correct), correct


class AlwaysCorrect(AnswerPolicy):
    name = "always-correct"

    def decide(self, question: Question) -> bool:
        return True


class AlwaysWrong(AnswerPolicy):
    name = "always-wrong"

    def decide(self, question: Question) -> bool:
        return False


class Bernoulli(AnswerPolicy):
    """Answers correctly with probability p, on an independent seeded stream."""

    def __init__(self, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise ValueError("bernoulli probability must be in [0, 1]")
        self.p = p
        self.name = f"bernoulli:{p:g}"
        self._rng = policy_rng(seed)

    def decide(self, question: Question) -> bool:
        return self._rng.unit() < self.p


class Scripted(AnswerPolicy):
    """Replays a fixed right/wrong sequence; fails when the script runs out."""

    name = "script"

    def __init__(self, flags: list[bool]):
        self.flags = list(flags)
        self._index = 0

    def decide(self, question: Question) -> bool:
        if self._index >= len(self.flags):
            raise ValueError("answer script exhausted before the session finished")
        flag = self.flags[self._index]
        self._index += 1
        return flag


_SCRIPT_TOKENS = {
    "t": True,
    "true": True,
    "right": True,
    "1": True,
    "f": False,
    "false": False,
    "wrong": False,
    "0": False,
}


def parse_script(text: str) -> list[bool]:
    flags: list[bool] = []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        for token in line.replace(",", " ").split():
            key = token.lower()
            if key not in _SCRIPT_TOKENS:
                raise ValueError(f"unknown script token {token!r}")
            flags.append(_SCRIPT_TOKENS[key])
    return flags


def make_policy(spec: str, seed: int) -> AnswerPolicy:
    """Parse a policy spec: always-correct | always-wrong | bernoulli:<p> | script:<file>."""
    if spec == "always-correct":
        return AlwaysCorrect()
    if spec == "always-wrong":
        return AlwaysWrong()
    if spec.startswith("bernoulli:"):
        return Bernoulli(float(spec.split(":", 1)[1]), seed)
    if spec.startswith("script:"):
        path = Path(spec.split(":", 1)[1])
        return Scripted(parse_script(path.read_text(encoding="utf-8")))
    raise ValueError(f"unknown policy {spec!r}")


@dataclass
class SimulationResult:
    selected: list[str]
    correctness: list[bool]
    repeats: list[list[str]]
    report: dict
    runner: RecordedSession


def run_session(
    definition: TestDefinition,
    config: SessionConfig,
    policy: AnswerPolicy,
    log: EventLog | None = None,
    *,
    session_id: str = "sim",
    test_id: str = "",
) -> SimulationResult:
    """Drive a full session to termination under the given policy."""
    runner = RecordedSession(
        definition, config, log, session_id=session_id, test_id=test_id
    )
    selected: list[str] = []
    correctness: list[bool] = []
    repeats: list[list[str]] = []
    while True:
        qid = runner.next_question()
        if qid is None:
            break
        selected.append(qid)
        answer, _ = policy.answer(definition.question(qid))
        result = runner.submit(qid, answer)
        correctness.append(result.outcome.correct)
        if result.repeat_ids is not None:
            repeats.append(list(result.repeat_ids))
    return SimulationResult(
        selected=selected,
        correctness=correctness,
        repeats=repeats,
        report=runner.report(),
        runner=runner,
    )


def transcript(result: SimulationResult) -> str:
    """Deterministic textual transcript of one simulated session."""
    lines = []
    repeat_steps: dict[int, list[str]] = {}
    # Re-derive at which step each repeat fired from the event log, so the
    # transcript interleaves selections and repeats in true order.
    step = -1
    for event in result.runner.log.events():
        if event.kind == "answer_submitted":
            step += 1
        elif event.kind == "balanced_repeat":
            repeat_steps[step] = event.payload["repeat"]
    for index, (qid, correct) in enumerate(zip(result.selected, result.correctness)):
        lines.append(f"select {qid}")
        lines.append(f"answer {qid} {'correct' if correct else 'wrong'}")
        if index in repeat_steps:
            lines.append("repeat " + " ".join(repeat_steps[index]))
    lines.append("finished")
    lines.append("report " + canonical_json(result.report))
    return "\n".join(lines) + "\n"
