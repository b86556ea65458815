"""HTTP session API: one dialog engine, many concurrent sessions.

Per-session request ordering is enforced with a per-session lock; idle
sessions expire after a configurable timeout. All error bodies are
structured ``{"error": ..., "detail": ...}``.
"""

from __future__ import annotations

import threading
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dialog import DialogEngine, Response, Session, SessionError

DEFAULT_SESSION_TIMEOUT_S = 30 * 60


class _Holder:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()
        self.last_access = time.monotonic()


class CreateSessionBody(BaseModel):
    seed: str


class UtteranceBody(BaseModel):
    utterance: str


def _envelope(session: Session, response: Response) -> dict:
    return {
        "text": response.text,
        "items": [{"n": n, "label": label} for n, label in response.items],
        "kind": response.kind,
        "session_id": session.session_id,
    }


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def create_app(engine: DialogEngine,
               session_timeout_s: float = DEFAULT_SESSION_TIMEOUT_S) -> FastAPI:
    app = FastAPI(title="convbrowse session API")
    sessions: dict[str, _Holder] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc.errors()))

    @app.exception_handler(Exception)
    async def unexpected(request: Request, exc: Exception):
        return _error(500, "internal_error", str(exc))

    def get_holder(session_id: str) -> _Holder | None:
        with registry_lock:
            holder = sessions.get(session_id)
            if holder is None:
                return None
            if time.monotonic() - holder.last_access > session_timeout_s:
                del sessions[session_id]
                return None
            holder.last_access = time.monotonic()
            return holder

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            session = engine.open_session(body.seed)
        except SessionError as exc:
            return _error(400, "open_failed", str(exc))
        with registry_lock:
            sessions[session.session_id] = _Holder(session)
        return {"session_id": session.session_id}

    @app.post("/sessions/{session_id}/utterances")
    def post_utterance(session_id: str, body: UtteranceBody):
        holder = get_holder(session_id)
        if holder is None:
            return _error(404, "not_found", f"no live session {session_id}")
        with holder.lock:  # serialize utterances per session
            response = holder.session.handle(body.utterance)
        return _envelope(holder.session, response)

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        holder = get_holder(session_id)
        if holder is None:
            return _error(404, "not_found", f"no live session {session_id}")
        session = holder.session
        return {
            "session_id": session.session_id,
            "seed": session.seed,
            "current_url": session.current_url,
            "current_title": session.current_title,
            "history_titles": [session.title_of(u) for u in session.nav_history],
            "bookmarks": [{"label": label, "url": url} for label, url in session.bookmarks],
            "prefs": {
                "verbosity": session.prefs.verbosity,
                "speech_rate": session.prefs.speech_rate,
            },
        }

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with registry_lock:
            holder = sessions.pop(session_id, None)
        if holder is None:
            return _error(404, "not_found", f"no live session {session_id}")
        return {"deleted": session_id}

    return app
