"""Evaluation sessions: iterative feedback loops and best-of-N sampling over
any agent, with full transcripts, persistence, replay, and scoreboards.

Agent protocol
--------------
Subprocess agents speak newline-delimited JSON over stdio. Each turn the
harness writes one line::

    {"type": "turn", "index": k, "brief": "...", "history": [
        {"raw_text": "...", "feedback": "..."}, ...]}

and reads one line ``{"raw_text": "..."}`` back. A ``{"type": "end"}`` line
closes the session. Remote agents receive the identical message schema as an
HTTP POST body and answer with the same response schema.

Iterative sessions accumulate the *full* history: the prompt for attempt k
carries the raw outputs and feedback of attempts 0..k-1. Best-of-N sessions
send an empty history every turn.
"""

from __future__ import annotations

import json
import queue
import re
import subprocess
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .briefs import render_task_brief
from .catalog import Catalog, default_catalog
from .flightsim import SimLimits
from .pipeline import (SAMPLING_BEST_OF_N, Attempt, TaskSpec, evaluate_source)

SESSION_SCHEMA = "rocketeval-session/v1"


class AgentError(Exception):
    """Base for agent transport failures (the session truncates cleanly)."""


class AgentTimeout(AgentError):
    pass


class AgentDisconnected(AgentError):
    pass


@dataclass(frozen=True)
class HistoryEntry:
    raw_text: str
    feedback: str

    def to_dict(self) -> dict:
        return {"raw_text": self.raw_text, "feedback": self.feedback}


def history_from_attempts(attempts: list[Attempt]) -> list[HistoryEntry]:
    return [HistoryEntry(a.design_source, a.feedback.rendered) for a in attempts]


def render_prompt(brief: str, history: list[HistoryEntry]) -> str:
    """Single-string prompt: the brief plus every previous attempt verbatim."""
    parts = [brief]
    for i, entry in enumerate(history):
        parts.append(f"\n\n## Previous Attempt {i + 1}\n### Your response\n"
                     f"{entry.raw_text}\n### Results\n{entry.feedback}")
    if history:
        parts.append("\n\nUsing everything learned above, provide your next design.")
    return "".join(parts)


def select_best(totals: list[float]) -> int:
    """Index of the maximum total; ties go to the earliest attempt."""
    best = 0
    for i in range(1, len(totals)):
        if totals[i] > totals[best]:
            best = i
    return best


# ---------------------------------------------------------------------------
# Agents
# ---------------------------------------------------------------------------

class ScriptedAgent:
    """Replays a fixed list of responses (the last one repeats)."""

    def __init__(self, texts: list[str], agent_id: str = "scripted"):
        if not texts:
            raise ValueError("scripted agent needs at least one response")
        self.texts = list(texts)
        self.agent_id = agent_id
        self._turn = 0

    def respond(self, brief: str, history: list[HistoryEntry], task: TaskSpec) -> str:
        text = self.texts[min(self._turn, len(self.texts) - 1)]
        self._turn += 1
        return text

    def close(self) -> None:
        pass


class CallableAgent:
    """Wraps a function (brief, history, task) -> raw text."""

    def __init__(self, fn, agent_id: str = "callable"):
        self.fn = fn
        self.agent_id = agent_id

    def respond(self, brief: str, history: list[HistoryEntry], task: TaskSpec) -> str:
        return self.fn(brief, history, task)

    def close(self) -> None:
        pass


class SubprocessAgent:
    """Newline-delimited JSON agent running as a child process."""

    def __init__(self, argv: list[str] | str, turn_timeout: float = 120.0,
                 agent_id: str | None = None):
        if isinstance(argv, str):
            import shlex
            argv = shlex.split(argv)
        self.argv = argv
        self.agent_id = agent_id or Path(argv[0]).name
        self.turn_timeout = turn_timeout
        self._proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            text=True, bufsize=1)
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self) -> None:
        assert self._proc.stdout is not None
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF marker

    def respond(self, brief: str, history: list[HistoryEntry], task: TaskSpec) -> str:
        if self._proc.poll() is not None:
            raise AgentDisconnected(f"agent process exited with {self._proc.returncode}")
        message = json.dumps({
            "type": "turn",
            "index": len(history),
            "brief": brief,
            "history": [h.to_dict() for h in history],
        })
        try:
            assert self._proc.stdin is not None
            self._proc.stdin.write(message + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise AgentDisconnected(f"agent stdin closed: {e}") from None
        try:
            line = self._lines.get(timeout=self.turn_timeout)
        except queue.Empty:
            raise AgentTimeout(
                f"agent did not answer within {self.turn_timeout}s") from None
        if line is None:
            raise AgentDisconnected("agent closed its output stream")
        line = line.strip()
        try:
            payload = json.loads(line)
            return str(payload["raw_text"])
        except (json.JSONDecodeError, KeyError, TypeError):
            # Tolerate agents that answer with plain text on one line.
            return line

    def close(self) -> None:
        try:
            if self._proc.poll() is None and self._proc.stdin is not None:
                self._proc.stdin.write(json.dumps({"type": "end"}) + "\n")
                self._proc.stdin.flush()
                self._proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass
        try:
            self._proc.wait(timeout=5.0)
        except subprocess.TimeoutExpired:
            self._proc.kill()


class HttpAgent:
    """Remote agent: POSTs the turn message, expects {"raw_text": ...}."""

    def __init__(self, url: str, turn_timeout: float = 120.0,
                 agent_id: str | None = None):
        self.url = url
        self.turn_timeout = turn_timeout
        self.agent_id = agent_id or re.sub(r"\W+", "-", url).strip("-")

    def respond(self, brief: str, history: list[HistoryEntry], task: TaskSpec) -> str:
        body = json.dumps({
            "type": "turn",
            "index": len(history),
            "brief": brief,
            "history": [h.to_dict() for h in history],
        }).encode()
        request = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(request, timeout=self.turn_timeout) as resp:
                payload = json.loads(resp.read().decode())
        except urllib.error.URLError as e:
            raise AgentDisconnected(f"agent endpoint unreachable: {e}") from None
        except TimeoutError:
            raise AgentTimeout(
                f"agent did not answer within {self.turn_timeout}s") from None
        try:
            return str(payload["raw_text"])
        except (KeyError, TypeError):
            raise AgentDisconnected(f"malformed agent response: {payload!r}") from None

    def close(self) -> None:
        pass


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------

@dataclass
class Session:
    task: TaskSpec
    agent_id: str
    seed: int | None
    attempts: list[Attempt] = field(default_factory=list)
    best_attempt_index: int | None = None
    events: list[dict] = field(default_factory=list)
    truncated: str | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def best_attempt(self) -> Attempt | None:
        if self.best_attempt_index is None:
            return None
        return self.attempts[self.best_attempt_index]

    def to_dict(self) -> dict:
        return {
            "schema": SESSION_SCHEMA,
            "task": self.task.to_dict(),
            "agent_id": self.agent_id,
            "seed": self.seed,
            "attempts": [a.to_dict() for a in self.attempts],
            "best_attempt_index": self.best_attempt_index,
            "events": self.events,
            "truncated": self.truncated,
            "metadata": self.metadata,
        }

    @staticmethod
    def from_dict(d: dict) -> "Session":
        if d.get("schema") != SESSION_SCHEMA:
            raise ValueError(f"not a session file (schema={d.get('schema')!r})")
        return Session(
            task=TaskSpec.from_dict(d["task"]),
            agent_id=d["agent_id"],
            seed=d.get("seed"),
            attempts=[Attempt.from_dict(a) for a in d["attempts"]],
            best_attempt_index=d.get("best_attempt_index"),
            events=list(d.get("events", [])),
            truncated=d.get("truncated"),
            metadata=dict(d.get("metadata", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        return path

    @staticmethod
    def load(path: str | Path) -> "Session":
        return Session.from_dict(json.loads(Path(path).read_text()))


def run_session(task: TaskSpec, agent, *, seed: int | None = None,
                out_path: str | Path | None = None,
                catalog: Catalog | None = None,
                limits: SimLimits | None = None) -> Session:
    """Drive one full session. Attempts are strictly sequential; in iterative
    mode every turn receives the complete history so far. Agent transport
    failures truncate the session at the last complete attempt."""
    catalog = catalog or default_catalog()
    brief = render_task_brief(task, catalog)
    best_of_n = task.sampling_mode == SAMPLING_BEST_OF_N
    session = Session(task=task, agent_id=getattr(agent, "agent_id", "agent"),
                      seed=seed)

    for k in range(task.iteration_budget):
        history = [] if best_of_n else history_from_attempts(session.attempts)
        session.events.append({"event": "turn_started", "index": k})
        try:
            raw = agent.respond(brief, history, task)
        except AgentError as e:
            session.truncated = str(e)
            session.events.append({"event": "session_truncated", "index": k,
                                   "reason": str(e)})
            break
        session.events.append({"event": "agent_replied", "index": k,
                               "chars": len(raw)})
        attempt = evaluate_source(raw, task, index=k, catalog=catalog, limits=limits)
        session.attempts.append(attempt)
        session.events.append({"event": "attempt_evaluated", "index": k,
                               "total": attempt.reward.total})

    if session.attempts:
        session.best_attempt_index = select_best(
            [a.reward.total for a in session.attempts])
    if out_path is not None:
        session.save(out_path)
    return session


def replay_session(session: Session, catalog: Catalog | None = None,
                   limits: SimLimits | None = None) -> list[Attempt]:
    """Re-evaluate every stored attempt's raw text without the agent."""
    return [
        evaluate_source(a.design_source, session.task, index=a.index,
                        catalog=catalog, limits=limits)
        for a in session.attempts
    ]


def session_filename(session: Session) -> str:
    safe_agent = re.sub(r"[^A-Za-z0-9_.-]+", "-", session.agent_id)
    seed = "x" if session.seed is None else str(session.seed)
    return f"session-{safe_agent}-{session.task.challenge}-seed{seed}.json"


# ---------------------------------------------------------------------------
# Scoreboard
# ---------------------------------------------------------------------------

def scoreboard(sessions: list[Session]) -> dict:
    """Per-agent aggregate: mean and best of the per-session best totals plus
    the mean reward trajectory by iteration. Deterministic ordering."""
    by_agent: dict[str, list[Session]] = {}
    for s in sessions:
        by_agent.setdefault(s.agent_id, []).append(s)

    rows = []
    for agent_id in sorted(by_agent):
        group = by_agent[agent_id]
        bests = [s.attempts[s.best_attempt_index].reward.total
                 for s in group if s.best_attempt_index is not None]
        longest = max((len(s.attempts) for s in group), default=0)
        trajectory = []
        for i in range(longest):
            totals = [s.attempts[i].reward.total for s in group
                      if len(s.attempts) > i]
            trajectory.append(sum(totals) / len(totals))
        rows.append({
            "agent_id": agent_id,
            "sessions": len(group),
            "mean_best": sum(bests) / len(bests) if bests else None,
            "best": max(bests) if bests else None,
            "mean_per_iteration": trajectory,
        })
    return {"agents": rows}
