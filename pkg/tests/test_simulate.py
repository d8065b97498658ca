from __future__ import annotations

import random

import pytest

from xtest import evaluate_answer
from xtest.engine import SessionConfig
from xtest.simulate import (
    AlwaysCorrect,
    AlwaysWrong,
    Bernoulli,
    Scripted,
    answer_for,
    make_policy,
    parse_script,
    run_session,
    transcript,
)

from helpers import random_definition


class TestAnswerConstruction:
    def test_constructed_answers_grade_as_requested_for_every_format(self):
        rng = random.Random(99)
        for _ in range(50):
            definition = random_definition(rng, with_refs=False, allow_balanced=False)
            for question in definition.questions:
                for wanted in (True, False):
                    answer = answer_for(question, wanted)
                    assert evaluate_answer(question, answer).correct is wanted


class TestPolicies:
    def test_make_policy_variants(self, tmp_path):
        assert isinstance(make_policy("always-correct", 1), AlwaysCorrect)
        assert isinstance(make_policy("always-wrong", 1), AlwaysWrong)
        bern = make_policy("bernoulli:0.25", 1)
        assert isinstance(bern, Bernoulli) and bern.p == 0.25
        script = tmp_path / "answers.txt"
        script.write_text("t f\n# comment\nright wrong\n", encoding="utf-8")
        policy = make_policy(f"script:{script}", 1)
        assert isinstance(policy, Scripted)
        assert policy.flags == [True, False, True, False]

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            make_policy("sometimes", 1)

    def test_bernoulli_is_seed_deterministic(self, os_test):
        first = run_session(os_test, SessionConfig(seed=7), Bernoulli(0.5, 7))
        second = run_session(os_test, SessionConfig(seed=7), Bernoulli(0.5, 7))
        assert first.selected == second.selected
        assert first.correctness == second.correctness
        assert first.report == second.report

    def test_script_exhaustion_raises(self, causal_links):
        with pytest.raises(ValueError):
            run_session(causal_links, SessionConfig(seed=1), Scripted([True]))

    def test_parse_script_rejects_unknown_tokens(self):
        with pytest.raises(ValueError):
            parse_script("t maybe f")


class TestTranscript:
    def test_transcript_shape(self, causal_links):
        result = run_session(causal_links, SessionConfig(seed=1), AlwaysCorrect())
        text = transcript(result)
        lines = text.splitlines()
        assert lines[0] == "select A"
        assert lines[1] == "answer A correct"
        assert lines[-2] == "finished"
        assert lines[-1].startswith("report {")

    def test_transcript_marks_repeats(self, balanced_window):
        result = run_session(
            balanced_window, SessionConfig(seed=1), Scripted([True, True, False, True, True, True])
        )
        assert "repeat Q1 Q2 Q3" in transcript(result).splitlines()
