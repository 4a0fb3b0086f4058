"""Session-scoped HTTP API over the live agent loop.

Plain request/response with client polling; no push channel. Every
mutating request is appended to a per-session JSON-lines file, and because
sessions are deterministic in (scenario, seed, action sequence, logical
clock), crash recovery is an exact replay of that file.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (
    IllegalAction,
    PtaError,
    SessionCompleted,
    UnknownScenario,
    UnknownSession,
)
from .scenario import Scenario
from .session import STATUS_EXPIRED, GameSession

ACTION_TYPES = ("dialogue_choice", "teach_submit", "tick")


@dataclass
class SessionEntry:
    session: GameSession
    scenario_name: str
    seed: int
    created_wall: float
    last_activity_wall: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    expired: bool = False


class SessionStore:
    """Append-only JSONL persistence, one file per session."""

    def __init__(self, data_dir: str | None):
        self.data_dir = data_dir
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)

    def _path(self, session_id: str) -> str:
        assert self.data_dir
        return os.path.join(self.data_dir, f"{session_id}.jsonl")

    def append(self, session_id: str, record: Mapping[str, Any]):
        if not self.data_dir:
            return
        with open(self._path(session_id), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def read(self, session_id: str) -> list[dict]:
        if not self.data_dir or not os.path.exists(self._path(session_id)):
            return []
        with open(self._path(session_id), "r", encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]


class SessionService:
    """Holds live sessions; the FastAPI app is a thin shell over this."""

    def __init__(
        self,
        scenarios: Mapping[str, Scenario],
        data_dir: str | None = None,
        now_fn: Callable[[], float] = time.time,
        seed_fn: Callable[[], int] | None = None,
    ):
        self.scenarios = dict(scenarios)
        self.store = SessionStore(data_dir)
        self.now_fn = now_fn
        self.seed_fn = seed_fn or (lambda: secrets.randbits(63))
        self.sessions: dict[str, SessionEntry] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle -------------------------------------------------------------

    def create_session(self, scenario_name: str) -> tuple[str, SessionEntry]:
        scenario = self.scenarios.get(scenario_name)
        if scenario is None:
            raise UnknownScenario(f"scenario {scenario_name!r} is not loaded")
        session_id = secrets.token_hex(16)  # 128 bits
        seed = self.seed_fn()
        now = self.now_fn()
        entry = SessionEntry(
            session=GameSession(scenario, seed=seed, greet=True),
            scenario_name=scenario_name,
            seed=seed,
            created_wall=now,
            last_activity_wall=now,
        )
        with self._registry_lock:
            self.sessions[session_id] = entry
        self.store.append(session_id, {
            "kind": "created", "scenario": scenario_name, "seed": seed,
            "wall": now,
        })
        return session_id, entry

    def _entry(self, session_id: str) -> SessionEntry:
        with self._registry_lock:
            entry = self.sessions.get(session_id)
        if entry is None:
            entry = self._recover(session_id)
        if entry is None:
            raise UnknownSession(f"no session {session_id!r}")
        return entry

    def _recover(self, session_id: str) -> SessionEntry | None:
        records = self.store.read(session_id)
        if not records:
            return None
        created = records[0]
        scenario = self.scenarios.get(created.get("scenario", ""))
        if scenario is None:
            return None
        entry = SessionEntry(
            session=GameSession(scenario, seed=int(created["seed"]), greet=True),
            scenario_name=created["scenario"],
            seed=int(created["seed"]),
            created_wall=float(created.get("wall", 0.0)),
            last_activity_wall=float(created.get("wall", 0.0)),
        )
        for record in records[1:]:
            if record.get("kind") != "action":
                continue
            try:
                entry.session.apply(record["payload"], advance_ms=int(record["advance_ms"]))
            except (IllegalAction, SessionCompleted):
                pass  # actions past completion were rejected originally too
            entry.last_activity_wall = float(record.get("wall", entry.last_activity_wall))
        with self._registry_lock:
            self.sessions.setdefault(session_id, entry)
            return self.sessions[session_id]

    def _check_expiry(self, entry: SessionEntry):
        if entry.session.status != "active":
            return  # a finished session stays "completed"
        expiry_ms = entry.session.scenario.config.session_expiry_ms
        idle_ms = (self.now_fn() - entry.last_activity_wall) * 1000.0
        if idle_ms > expiry_ms:
            entry.expired = True

    # -- operations ---------------------------------------------------------------

    def get_view(self, session_id: str) -> dict:
        entry = self._entry(session_id)
        with entry.lock:
            self._check_expiry(entry)
            view = entry.session.view().to_doc()
            if entry.expired:
                view["status"] = STATUS_EXPIRED
            return view

    def apply_action(self, session_id: str, action: Mapping[str, Any]) -> dict:
        entry = self._entry(session_id)
        with entry.lock:
            self._check_expiry(entry)
            if entry.expired:
                raise SessionCompleted("session expired")
            if action.get("type") not in ACTION_TYPES:
                raise IllegalAction(f"unknown action type {action.get('type')!r}")
            now = self.now_fn()
            advance_ms = int(max(0.0, now - entry.last_activity_wall) * 1000.0)
            view = entry.session.apply(action, advance_ms=advance_ms)
            entry.last_activity_wall = now
            self.store.append(session_id, {
                "kind": "action", "payload": dict(action),
                "advance_ms": advance_ms, "wall": now,
            })
            return view.to_doc()

    def export_log(self, session_id: str, fmt: str = "jsonl") -> str:
        entry = self._entry(session_id)
        with entry.lock:
            return entry.session.export_log(fmt)


def _error_response(exc: PtaError) -> JSONResponse:
    if isinstance(exc, (UnknownSession, UnknownScenario)):
        status, code = 404, "not_found"
    elif isinstance(exc, SessionCompleted):
        status, code = 410, "session_over"
    elif isinstance(exc, IllegalAction):
        status, code = 409, "illegal_action"
    else:
        status, code = 400, "bad_request"
    return JSONResponse(status_code=status,
                        content={"code": code, "message": str(exc)})


def build_app(
    scenarios: Mapping[str, Scenario],
    data_dir: str | None = None,
    now_fn: Callable[[], float] = time.time,
    seed_fn: Callable[[], int] | None = None,
) -> FastAPI:
    service = SessionService(scenarios, data_dir=data_dir, now_fn=now_fn,
                             seed_fn=seed_fn)
    app = FastAPI(title="teachable-agent sessions")
    app.state.service = service

    @app.exception_handler(PtaError)
    async def _handle(request: Request, exc: PtaError):
        return _error_response(exc)

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        session_id, entry = service.create_session(str(body.get("scenario", "")))
        with entry.lock:
            view = entry.session.view().to_doc()
        return {"id": session_id, "view": view}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return service.get_view(session_id)

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, body: dict):
        return service.apply_action(session_id, body)

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str, format: str = Query("jsonl")):
        if format not in ("jsonl", "csv"):
            return _error_response(IllegalAction(f"unknown format {format!r}"))
        text = service.export_log(session_id, format)
        media = "application/jsonl" if format == "jsonl" else "text/csv"
        return PlainTextResponse(text, media_type=media)

    @app.get("/scenarios")
    def list_scenarios():
        return {"scenarios": sorted(service.scenarios)}

    return app
