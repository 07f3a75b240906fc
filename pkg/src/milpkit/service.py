"""HTTP/JSON service for classification, elicitation, and export.

All endpoints are versioned under /v1.  The service is stateless except
for the in-memory SessionStore; transcripts are exportable, so losing a
session to expiry or restart loses nothing that cannot be replayed.
Errors use one envelope: {"code", "message"} plus "step" where relevant.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from .lpformat import LpParseError, write_lp
from .lpformat import parse_lp as _parse_lp
from .model import validate
from .omt import (
    AnswerError,
    ElicitationSession,
    OmtTree,
    SessionComplete,
    SessionError,
    answer,
    current_question,
    emit_model,
    load_tree,
    start_session,
    tree_to_json,
)
from .owl import default_descriptor, write_owl
from .reporting import classification_payload

DEFAULT_TTL_SECONDS = 24 * 3600


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse({"code": code, "message": message, **extra}, status_code=status)


@dataclass
class _Stored:
    session: ElicitationSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    touched: float = field(default_factory=time.monotonic)


class SessionStore:
    """In-memory sessions with idle expiry and per-session write locks."""

    def __init__(self, ttl_seconds: float):
        self.ttl = ttl_seconds
        self._sessions: dict = {}
        self._lock = threading.Lock()

    def _purge(self) -> None:
        now = time.monotonic()
        dead = [k for k, s in self._sessions.items() if now - s.touched > self.ttl]
        for k in dead:
            del self._sessions[k]

    def create(self, tree: OmtTree) -> ElicitationSession:
        session = start_session(tree)
        with self._lock:
            self._purge()
            self._sessions[session.id] = _Stored(session)
        return session

    def get(self, session_id: str) -> _Stored:
        with self._lock:
            self._purge()
            stored = self._sessions.get(session_id)
            if stored is None:
                raise KeyError(session_id)
            stored.touched = time.monotonic()
            return stored


def _question_or_none(session: ElicitationSession) -> Optional[dict]:
    if session.finished:
        return None
    return current_question(session)


def _session_state(session: ElicitationSession) -> dict:
    return {
        "id": session.id,
        "finished": session.finished,
        "question": _question_or_none(session),
        "transcript": session.transcript,
        "variables": [v.key for v in session.variables],
        "constraints": [str(c) for _, block in session.built for c in block.constraints],
        "pending": len(session.pending),
    }


def create_app(tree: Optional[OmtTree] = None,
               ttl_seconds: Optional[float] = None) -> FastAPI:
    if tree is None:
        tree = load_tree()
    if ttl_seconds is None:
        ttl_seconds = float(os.environ.get("OMT_SESSION_TTL_SECONDS", DEFAULT_TTL_SECONDS))
    app = FastAPI(title="milpkit", version="1")
    store = SessionStore(ttl_seconds)
    app.state.store = store
    tree_doc = json.loads(tree_to_json(tree))

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/omt")
    def get_tree():
        return tree_doc

    @app.post("/v1/sessions", status_code=201)
    def create_session():
        session = store.create(tree)
        return {"id": session.id, **_session_state(session)}

    def _with_session(session_id: str, fn):
        try:
            stored = store.get(session_id)
        except KeyError:
            return _error(404, "unknown-session", f"no session {session_id!r}")
        with stored.lock:
            return fn(stored.session)

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return _with_session(session_id, _session_state)

    @app.post("/v1/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: dict):
        def step(session):
            try:
                answer(session, body)
            except SessionComplete:
                return _error(409, "session-complete", "session is complete")
            except AnswerError as e:
                return _error(400, "invalid-answer", str(e),
                              step=len(session.transcript))
            return _session_state(session)
        return _with_session(session_id, step)

    @app.post("/v1/sessions/{session_id}/back")
    def post_back(session_id: str):
        def step(session):
            try:
                answer(session, {"navigation": "BACK"})
            except AnswerError as e:
                return _error(400, "invalid-answer", str(e),
                              step=len(session.transcript))
            return _session_state(session)
        return _with_session(session_id, step)

    @app.get("/v1/sessions/{session_id}/model.lp")
    def get_model(session_id: str):
        def render(session):
            try:
                model = emit_model(session)
            except SessionError as e:
                return _error(409, "session-error", str(e))
            return PlainTextResponse(write_lp(model))
        return _with_session(session_id, render)

    @app.post("/v1/classify")
    async def classify_text(request: Request):
        body = (await request.body()).decode("utf-8", errors="replace")
        if not body.strip():
            return _error(400, "parse-error", "empty request body")
        try:
            model = _parse_lp(body)
        except LpParseError as e:
            return _error(400, "parse-error", str(e))
        report = validate(model)
        if not report.ok:
            return _error(400, "validation-error",
                          "; ".join(v.message for v in report.violations))
        return classification_payload(model)

    @app.get("/v1/ontology.owl")
    def ontology():
        return Response(write_owl(default_descriptor()), media_type="application/xml")

    return app
