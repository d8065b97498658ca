"""Command-line front door: validate, simulate, serve, replay."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .engine import EventingPolicy, SessionConfig, TerminationMode
from .errors import DivergenceError, ParseError, XTestError
from .events import FileEventLog, RecordedSession, canonical_json, read_log_file
from .model import Severity
from .parser import parse_test_definition
from .simulate import make_policy, run_session, transcript
from .validation import validate_references


def _read_definition(path: str):
    text = Path(path).read_text(encoding="utf-8")
    return parse_test_definition(text)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        definition = _read_definition(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        if exc.code == "E-XML":
            print(f"error: {exc}", file=sys.stderr)
            return 2
        qid = exc.question_id if exc.question_id else "-"
        print(f"ERROR {exc.code} {qid} {exc.message}")
        return 1
    diagnostics = validate_references(definition)
    for diagnostic in diagnostics:
        print(diagnostic.line())
    if any(d.severity is Severity.ERROR for d in diagnostics):
        return 1
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        policy = make_policy(args.policy, args.seed)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        definition = _read_definition(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    diagnostics = validate_references(definition)
    if any(d.severity is Severity.ERROR for d in diagnostics):
        for diagnostic in diagnostics:
            print(diagnostic.line(), file=sys.stderr)
        return 1
    config = SessionConfig(
        seed=args.seed,
        termination_mode=TerminationMode(args.termination),
        max_visits_per_question=args.max_visits,
        max_balanced_repeats=args.max_repeats,
        eventing_policy=EventingPolicy(args.eventing),
    )
    log = FileEventLog(args.record) if args.record else None
    try:
        result = run_session(definition, config, policy, log)
    except ValueError as exc:
        # e.g. an answer script shorter than the session
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(transcript(result))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    data_dir = os.environ.get("XTEST_DATA", args.data)
    ui_dir = args.ui if args.ui and Path(args.ui).is_dir() else None
    app = create_app(data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        events = read_log_file(args.logfile)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not events:
        print("error: empty log file", file=sys.stderr)
        return 2
    try:
        if args.test:
            definition = _read_definition(args.test)
        else:
            data_dir = Path(os.environ.get("XTEST_DATA", args.data))
            test_id = events[0].payload.get("test_id", "")
            test_path = data_dir / "tests" / f"{test_id}.xml"
            if not test_path.is_file():
                print(f"error: definition {test_path} not found; pass --test", file=sys.stderr)
                return 2
            definition = _read_definition(str(test_path))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        runner = RecordedSession.replay(definition, events)
    except DivergenceError as exc:
        print(f"divergence: {exc.message}", file=sys.stderr)
        return 1
    except XTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"replay ok: {len(events)} events")
    if runner.state.finished:
        print("report " + canonical_json(runner.report()))
    else:
        print(f"session unfinished at step {len(runner.log)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xtest",
        description="Adaptive test engine over XML test definitions",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="validate a test file and print diagnostics")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="run a full session under an answer policy")
    p.add_argument("file")
    p.add_argument("--policy", required=True,
                   help="always-correct | always-wrong | bernoulli:<p> | script:<file>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--termination", default="all_answered",
                   choices=[m.value for m in TerminationMode])
    p.add_argument("--max-visits", type=int, default=3)
    p.add_argument("--max-repeats", type=int, default=2)
    p.add_argument("--eventing", default="fifo",
                   choices=[e.value for e in EventingPolicy])
    p.add_argument("--record", help="also write the session event log to this file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", default="./data",
                   help="data directory (overridden by XTEST_DATA)")
    p.add_argument("--ui", help="directory with the built web client")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="verify a recorded session log")
    p.add_argument("logfile")
    p.add_argument("--test", help="definition XML (otherwise resolved from the data dir)")
    p.add_argument("--data", default="./data")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
