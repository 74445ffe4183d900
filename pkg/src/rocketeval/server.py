"""HTTP service exposing the evaluation environment.

Endpoints (all JSON):

* ``GET /task-brief?challenge=altitude&target=3048&wind=5@E``
  -> ``{"brief": "..."}``; landing tasks use ``challenge=landing&tx=..&ty=..``.
* ``POST /evaluate`` with ``{"task": {...}, "design": <object|string>}``
  -> the evaluated attempt: drc report, flight outcome, reward breakdown,
  and rendered feedback.
* ``POST /session/turn`` with ``{"task": {...}, "raw_text": "..."}`` to open
  a session and ``{"session_id": "...", "raw_text": "..."}`` afterwards
  -> ``{"session_id", "index", "attempt", "best_total", "done"}``. The
  server keeps the history; each turn is evaluated exactly like the CLI
  would, and the session file is rewritten after every turn when a sessions
  directory is configured.

Payload examples live in the README. The server is stateless apart from the
in-memory session table and may serve concurrent requests.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .briefs import render_task_brief
from .catalog import Catalog, default_catalog
from .flightsim import Environment, SimLimits
from .harness import Session, select_best
from .pipeline import TaskSpec, evaluate_source
from .scoring import ALTITUDE_CHALLENGE, LANDING_CHALLENGE


def parse_wind(text: str) -> Environment:
    """Parse 'SPEED@FROM' (e.g. '5@E' or '3.5@270') into an Environment."""
    if "@" in text:
        speed_text, direction = text.split("@", 1)
    else:
        speed_text, direction = text, "E"
    direction = direction.strip()
    wind_from: float | str
    try:
        wind_from = float(direction)
    except ValueError:
        wind_from = direction.upper()
    return Environment(wind_speed=float(speed_text), wind_from=wind_from)


def task_from_query(params: dict[str, list[str]]) -> TaskSpec:
    challenge = params.get("challenge", ["altitude"])[0]
    env = parse_wind(params.get("wind", ["0@E"])[0])
    if challenge in ("altitude", ALTITUDE_CHALLENGE):
        return TaskSpec(challenge=ALTITUDE_CHALLENGE, environment=env,
                        target_apogee=float(params.get("target", ["3048"])[0]))
    if challenge in ("landing", LANDING_CHALLENGE):
        return TaskSpec(challenge=LANDING_CHALLENGE, environment=env,
                        target_x=float(params.get("tx", ["4000"])[0]),
                        target_y=float(params.get("ty", ["4000"])[0]))
    raise ValueError(f"unknown challenge {challenge!r}")


class _SessionTable:
    def __init__(self, sessions_dir: Path | None):
        self.lock = threading.Lock()
        self.sessions: dict[str, Session] = {}
        self.counter = 0
        self.sessions_dir = sessions_dir

    def create(self, task: TaskSpec) -> tuple[str, Session]:
        with self.lock:
            self.counter += 1
            sid = f"s{self.counter:06d}"
            session = Session(task=task, agent_id="http-client", seed=None)
            self.sessions[sid] = session
            return sid, session

    def get(self, sid: str) -> Session | None:
        with self.lock:
            return self.sessions.get(sid)

    def persist(self, sid: str, session: Session) -> None:
        if self.sessions_dir is not None:
            session.save(self.sessions_dir / f"{sid}.json")


class EnvironmentHandler(BaseHTTPRequestHandler):
    server_version = "rocketeval"
    catalog: Catalog
    table: _SessionTable
    limits: SimLimits | None = None
    quiet = True

    def log_message(self, fmt, *args):  # diagnostics stay off the wire
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", "0"))
        if length <= 0:
            raise ValueError("empty request body")
        raw = self.rfile.read(length)
        data = json.loads(raw.decode())
        if not isinstance(data, dict):
            raise ValueError("request body must be a JSON object")
        return data

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/task-brief":
            try:
                task = task_from_query(parse_qs(url.query))
            except (ValueError, KeyError) as e:
                self._send(400, {"error": str(e)})
                return
            self._send(200, {"brief": render_task_brief(task, self.catalog)})
        elif url.path == "/health":
            self._send(200, {"status": "ok"})
        else:
            self._send(404, {"error": f"unknown path {url.path}"})

    def do_POST(self):
        url = urlparse(self.path)
        try:
            data = self._read_json()
        except (ValueError, json.JSONDecodeError) as e:
            self._send(400, {"error": f"bad request: {e}"})
            return
        if url.path == "/evaluate":
            self._evaluate(data)
        elif url.path == "/session/turn":
            self._session_turn(data)
        else:
            self._send(404, {"error": f"unknown path {url.path}"})

    def _evaluate(self, data: dict) -> None:
        try:
            task = TaskSpec.from_dict(data["task"])
        except (KeyError, ValueError, TypeError) as e:
            self._send(400, {"error": f"bad task: {e}"})
            return
        design = data.get("design")
        if design is None:
            self._send(400, {"error": "missing design"})
            return
        source = design if isinstance(design, str) else json.dumps(design)
        attempt = evaluate_source(source, task, catalog=self.catalog,
                                  limits=self.limits)
        self._send(200, attempt.to_dict())

    def _session_turn(self, data: dict) -> None:
        raw_text = data.get("raw_text")
        if not isinstance(raw_text, str):
            self._send(400, {"error": "missing raw_text"})
            return
        sid = data.get("session_id")
        if sid is None:
            try:
                task = TaskSpec.from_dict(data["task"])
            except (KeyError, ValueError, TypeError) as e:
                self._send(400, {"error": f"bad task: {e}"})
                return
            sid, session = self.table.create(task)
        else:
            session = self.table.get(sid)
            if session is None:
                self._send(404, {"error": f"unknown session {sid!r}"})
                return
        with self.table.lock:
            if len(session.attempts) >= session.task.iteration_budget:
                self._send(409, {"error": "session budget exhausted",
                                 "session_id": sid, "done": True})
                return
            index = len(session.attempts)
        attempt = evaluate_source(raw_text, session.task, index=index,
                                  catalog=self.catalog, limits=self.limits)
        with self.table.lock:
            session.attempts.append(attempt)
            session.events.append({"event": "attempt_evaluated", "index": index,
                                   "total": attempt.reward.total})
            session.best_attempt_index = select_best(
                [a.reward.total for a in session.attempts])
            done = len(session.attempts) >= session.task.iteration_budget
            best_total = session.attempts[session.best_attempt_index].reward.total
        self.table.persist(sid, session)
        self._send(200, {
            "session_id": sid,
            "index": index,
            "attempt": attempt.to_dict(),
            "best_total": best_total,
            "done": done,
        })


def make_server(host: str = "127.0.0.1", port: int = 0,
                catalog: Catalog | None = None,
                sessions_dir: str | Path | None = None,
                limits: SimLimits | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (EnvironmentHandler,), {
        "catalog": catalog or default_catalog(),
        "table": _SessionTable(Path(sessions_dir) if sessions_dir else None),
        "limits": limits,
    })
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(host: str, port: int, catalog: Catalog | None = None,
                  sessions_dir: str | Path | None = None) -> None:
    server = make_server(host, port, catalog, sessions_dir)
    try:
        server.serve_forever()
    finally:
        server.server_close()
