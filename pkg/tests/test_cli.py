from __future__ import annotations

import pytest

from xtest.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_clean_fixture_exits_zero(self, capsys, os_test_path):
        code, out, _ = run_cli(capsys, "validate", str(os_test_path))
        assert code == 0
        assert "E-" not in out

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "validate", "missing.xml")
        assert code == 2
        assert "error" in err

    def test_duplicate_ids_exit_one(self, capsys, tmp_path):
        bad = tmp_path / "dup.xml"
        bad.write_text('<Test><xTest id="A"/><xTest id="A"/></Test>', encoding="utf-8")
        code, out, _ = run_cli(capsys, "validate", str(bad))
        assert code == 1
        assert "E-DUP-ID" in out

    def test_dangling_ref_exit_one_with_line_format(self, capsys, tmp_path):
        bad = tmp_path / "dangling.xml"
        bad.write_text('<Test><xTest id="A" order="X"/></Test>', encoding="utf-8")
        code, out, _ = run_cli(capsys, "validate", str(bad))
        assert code == 1
        assert any(line.startswith("ERROR E-DANGLING-REF A ") for line in out.splitlines())

    def test_malformed_xml_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "broken.xml"
        bad.write_text("<Test><xTest", encoding="utf-8")
        code, _, err = run_cli(capsys, "validate", str(bad))
        assert code == 2


class TestSimulate:
    def test_causal_chain_always_correct_sequence(self, capsys, causal_links_path):
        code, out, _ = run_cli(
            capsys, "simulate", str(causal_links_path), "--policy", "always-correct", "--seed", "1"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[:6] == [
            "select A",
            "answer A correct",
            "select B",
            "answer B correct",
            "select C",
            "answer C correct",
        ]
        assert '"correct_ratio":1.0' in lines[-1]

    def test_os_test_semaphore_branch_with_seed_zero(self, capsys, os_test_path):
        code, out, _ = run_cli(
            capsys, "simulate", str(os_test_path), "--policy", "always-correct", "--seed", "0"
        )
        assert code == 0
        selected = [line.split()[1] for line in out.splitlines() if line.startswith("select ")]
        assert selected == [
            "CriticalSection",
            "Realization",
            "Semaphore",
            "ProdConsSemaphor",
            "FinalQuestion",
        ]

    def test_bernoulli_runs_are_byte_identical(self, capsys, os_test_path):
        code1, out1, _ = run_cli(
            capsys, "simulate", str(os_test_path), "--policy", "bernoulli:0.5", "--seed", "7"
        )
        code2, out2, _ = run_cli(
            capsys, "simulate", str(os_test_path), "--policy", "bernoulli:0.5", "--seed", "7"
        )
        assert code1 == code2 == 0
        assert out1 == out2

    def test_validation_failure_exits_one(self, capsys, tmp_path):
        bad = tmp_path / "dangling.xml"
        bad.write_text('<Test><xTest id="A" order="X"/></Test>', encoding="utf-8")
        code, _, err = run_cli(
            capsys, "simulate", str(bad), "--policy", "always-correct", "--seed", "1"
        )
        assert code == 1
        assert "E-DANGLING-REF" in err

    def test_unknown_policy_exits_two(self, capsys, causal_links_path):
        code, _, err = run_cli(
            capsys, "simulate", str(causal_links_path), "--policy", "sometimes", "--seed", "1"
        )
        assert code == 2

    def test_bad_flag_exits_two(self, causal_links_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", str(causal_links_path), "--policy", "always-correct", "--bogus"])
        assert exc.value.code == 2

    def test_script_policy(self, capsys, balanced_window_path, tmp_path):
        script = tmp_path / "script.txt"
        script.write_text("t t f t t t\n", encoding="utf-8")
        code, out, _ = run_cli(
            capsys,
            "simulate",
            str(balanced_window_path),
            "--policy",
            f"script:{script}",
            "--seed",
            "1",
        )
        assert code == 0
        assert "repeat Q1 Q2 Q3" in out


class TestReplay:
    def test_record_then_replay(self, capsys, os_test_path, tmp_path):
        log = tmp_path / "run.log"
        code, _, _ = run_cli(
            capsys,
            "simulate",
            str(os_test_path),
            "--policy",
            "always-correct",
            "--seed",
            "0",
            "--record",
            str(log),
        )
        assert code == 0
        code, out, _ = run_cli(capsys, "replay", str(log), "--test", str(os_test_path))
        assert code == 0
        assert out.startswith("replay ok")
        assert "report {" in out

    def test_replay_divergence_exits_one(self, capsys, os_test_path, tmp_path):
        log = tmp_path / "run.log"
        run_cli(
            capsys,
            "simulate",
            str(os_test_path),
            "--policy",
            "always-correct",
            "--seed",
            "0",
            "--record",
            str(log),
        )
        modified = tmp_path / "modified.xml"
        modified.write_text(
            os_test_path.read_text(encoding="utf-8").replace(
                'order="Semaphore BKA Monitor"', 'order="BKA Semaphore Monitor"'
            ),
            encoding="utf-8",
        )
        code, _, err = run_cli(capsys, "replay", str(log), "--test", str(modified))
        assert code == 1
        assert "divergence" in err

    def test_missing_log_exits_two(self, capsys):
        code, _, _ = run_cli(capsys, "replay", "missing.log")
        assert code == 2

    def test_xtest_data_env_overrides_data_flag(
        self, capsys, monkeypatch, tmp_path, causal_links_path
    ):
        # produce a service-layout data dir with one finished session log
        from fastapi.testclient import TestClient

        from xtest.service import create_app

        data_dir = tmp_path / "served"
        with TestClient(create_app(data_dir)) as client:
            test_id = client.post("/tests", content=causal_links_path.read_bytes()).json()["test_id"]
            session_id = client.post(
                f"/tests/{test_id}/sessions", json={"seed": 4}
            ).json()["session_id"]
            client.get(f"/sessions/{session_id}/next")
            client.post(
                f"/sessions/{session_id}/answer",
                json={"question_id": "A", "answer": {"kind": "boolean", "value": True}},
            )
        log_path = data_dir / "sessions" / f"{session_id}.log"
        monkeypatch.setenv("XTEST_DATA", str(data_dir))
        # --data points at a bogus dir; the env var must win
        code, out, _ = run_cli(capsys, "replay", str(log_path), "--data", "/nonexistent")
        assert code == 0
        assert out.startswith("replay ok")
