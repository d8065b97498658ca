"""HTTP session service.

Endpoints (JSON over HTTP, documented in docs/api.md):

    POST /tests                      upload + validate an XML test file
    POST /tests/{test_id}/sessions   start a session
    GET  /sessions/{sid}/next        current question (idempotent) or report
    POST /sessions/{sid}/answer      submit an answer, learn only correctness
    GET  /sessions/{sid}/report      final report once finished
    GET  /healthz                    liveness

Sessions are server-authoritative: question renderings never contain
correct indices, accepted strings, expected values, tolerances or causal
references. Every session appends to ``sessions/<id>.log`` under the data
directory and is restored by replay on restart.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .answers import answer_from_payload
from .engine import SessionConfig
from .errors import (
    ConfigError,
    FormatMismatchError,
    NotFinishedError,
    ParseError,
    SessionFinishedError,
    WrongQuestionError,
    XTestError,
)
from .events import FileEventLog, RecordedSession, read_log_file
from .model import (
    Completion,
    Diagnostic,
    MultipleChoice,
    Numeric,
    Question,
    Severity,
    TestDefinition,
    TrueFalse,
)
from .parser import parse_test_definition
from .validation import validate_references


def render_question(question: Question) -> dict:
    """Client-safe rendering: prompt and input shape only, never the key."""
    fmt = question.format
    if isinstance(fmt, MultipleChoice):
        payload = {
            "type": "choice",
            "choices": list(fmt.choices),
            "multi_select": fmt.multi_select,
        }
    elif isinstance(fmt, TrueFalse):
        payload = {"type": "true_false"}
    elif isinstance(fmt, Completion):
        payload = {"type": "completion"}
    elif isinstance(fmt, Numeric):
        payload = {"type": "numeric"}
    else:
        payload = {"type": "unknown"}
    return {"id": question.id, "prompt": question.prompt, "format": payload}


@dataclass
class ServerSession:
    session_id: str
    test_id: str
    runner: RecordedSession
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class DataStore:
    """Definitions and sessions persisted under one data directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.tests_dir = self.root / "tests"
        self.sessions_dir = self.root / "sessions"
        self.tests_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.definitions: dict[str, TestDefinition] = {}
        self.diagnostics: dict[str, list[Diagnostic]] = {}
        self.sessions: dict[str, ServerSession] = {}
        self._restore()

    def _restore(self) -> None:
        for path in sorted(self.tests_dir.glob("*.xml")):
            try:
                definition = parse_test_definition(path.read_text(encoding="utf-8"))
            except ParseError:
                continue  # a foreign file in the store; uploads were validated
            test_id = path.stem
            self.definitions[test_id] = definition
            self.diagnostics[test_id] = validate_references(definition)
        for path in sorted(self.sessions_dir.glob("*.log")):
            recorded = read_log_file(path)
            if not recorded:
                continue
            test_id = recorded[0].payload.get("test_id", "")
            definition = self.definitions.get(test_id)
            if definition is None:
                continue
            runner = RecordedSession.replay(definition, recorded)
            regenerated = runner.log.events()
            file_log = FileEventLog(path)
            # A crash may have truncated the log inside an answer's event
            # group; repair by appending the regenerated tail.
            for event in regenerated[len(recorded):]:
                file_log.append(event)
            runner.log = file_log
            session_id = path.stem
            self.sessions[session_id] = ServerSession(
                session_id=session_id, test_id=test_id, runner=runner
            )

    def upload(self, xml_text: str) -> tuple[str, TestDefinition, list[Diagnostic]]:
        definition = parse_test_definition(xml_text)
        diagnostics = validate_references(definition)
        test_id = hashlib.sha256(xml_text.encode("utf-8")).hexdigest()[:16]
        if not any(d.severity is Severity.ERROR for d in diagnostics):
            (self.tests_dir / f"{test_id}.xml").write_text(xml_text, encoding="utf-8")
            self.definitions[test_id] = definition
            self.diagnostics[test_id] = diagnostics
        return test_id, definition, diagnostics

    def create_session(self, test_id: str, config: SessionConfig) -> ServerSession:
        definition = self.definitions[test_id]
        session_id = secrets.token_hex(16)
        log = FileEventLog(self.sessions_dir / f"{session_id}.log")
        runner = RecordedSession(
            definition, config, log, session_id=session_id, test_id=test_id
        )
        session = ServerSession(session_id=session_id, test_id=test_id, runner=runner)
        self.sessions[session_id] = session
        return session


def _error(status: int, code: str, message: str, diagnostics: list[dict] | None = None):
    body: dict = {"error": code, "message": message}
    if diagnostics is not None:
        body["diagnostics"] = diagnostics
    return JSONResponse(status_code=status, content=body)


def create_app(data_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="xtest session service", version="0.1.0")
    store = DataStore(data_dir)
    app.state.store = store

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/tests")
    async def upload_test(request: Request):
        raw = await request.body()
        if not raw:
            return _error(400, "E-XML", "empty request body")
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            return _error(400, "E-XML", "body is not valid UTF-8")
        try:
            test_id, _, diagnostics = store.upload(text)
        except ParseError as exc:
            if exc.code == "E-XML":
                return _error(400, exc.code, exc.message)
            diagnostic = Diagnostic(
                Severity.ERROR, exc.code, exc.message, question_id=exc.question_id
            )
            return _error(422, exc.code, exc.message, diagnostics=[diagnostic.to_dict()])
        payload = [d.to_dict() for d in diagnostics]
        if any(d.severity is Severity.ERROR for d in diagnostics):
            return JSONResponse(
                status_code=422,
                content={"status": "rejected", "test_id": test_id, "diagnostics": payload},
            )
        return {"status": "accepted", "test_id": test_id, "diagnostics": payload}

    @app.post("/tests/{test_id}/sessions")
    async def create_session(test_id: str, request: Request):
        if test_id not in store.definitions:
            return _error(404, "E-UNKNOWN-TEST", f"no test with id {test_id!r}")
        try:
            body = await request.json()
        except Exception:
            body = {}
        if not isinstance(body, dict):
            return _error(422, "E-INVALID-CONFIG", "config body must be a JSON object")
        data = dict(body)
        data.setdefault("seed", secrets.randbits(64))
        try:
            config = SessionConfig.from_dict(data)
            config.validate()
            session = store.create_session(test_id, config)
        except (ConfigError, XTestError) as exc:
            return _error(422, getattr(exc, "code", "E-INVALID-CONFIG"), str(exc))
        return {"session_id": session.session_id}

    def _session_or_none(session_id: str) -> ServerSession | None:
        return store.sessions.get(session_id)

    @app.get("/sessions/{session_id}/next")
    async def next_question(session_id: str):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "E-UNKNOWN-SESSION", f"no session {session_id!r}")
        if not session.lock.acquire(blocking=False):
            return _error(409, "E-BUSY", "an answer is still being processed")
        try:
            qid = session.runner.next_question()
            if qid is None:
                return {"finished": True, "report": session.runner.report()}
            question = session.runner.definition.question(qid)
            return {"finished": False, "question": render_question(question)}
        finally:
            session.lock.release()

    @app.post("/sessions/{session_id}/answer")
    async def submit_answer(session_id: str, request: Request):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "E-UNKNOWN-SESSION", f"no session {session_id!r}")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "E-BAD-REQUEST", "body must be JSON")
        if not isinstance(body, dict) or "answer" not in body:
            return _error(422, "E-FORMAT-MISMATCH", "body must hold question_id and answer")
        if not session.lock.acquire(blocking=False):
            return _error(409, "E-BUSY", "an answer is still being processed")
        try:
            answer = answer_from_payload(body["answer"])
            result = session.runner.submit(str(body.get("question_id", "")), answer)
            return {
                "correct": result.outcome.correct,
                "next_available": not result.finished,
            }
        except (WrongQuestionError, SessionFinishedError) as exc:
            return _error(409, exc.code, exc.message)
        except FormatMismatchError as exc:
            return _error(422, exc.code, exc.message)
        finally:
            session.lock.release()

    @app.get("/sessions/{session_id}/report")
    async def report(session_id: str):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "E-UNKNOWN-SESSION", f"no session {session_id!r}")
        try:
            return {"report": session.runner.report()}
        except NotFinishedError as exc:
            return _error(409, exc.code, exc.message)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
