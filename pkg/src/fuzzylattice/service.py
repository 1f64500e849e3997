"""HTTP facade: KB inspection, phased consultation sessions, surfaces.

Sessions live in memory, guarded by per-session locks; the compiled KB is
immutable shared state. An optional append-only journal (JSON lines) is
replayed at startup, recomputing every result through the deterministic
engine. Resubmitting an already-completed phase forks a derived session so
audit history is never mutated.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel

from . import __version__
from .errors import (
    FuzzyLatticeError,
    PhaseOrderError,
    UnknownPhaseError,
)
from .inference import (
    DEFAULT_THRESHOLD,
    MODES,
    SUBSET_CLOSURE,
    ConsultationReport,
    PhaseResult,
    ProbableDisease,
    infer_phase,
    refine_list,
    surface_grid,
)
from .kb import CompiledKB
from .serialize import (
    dump_json,
    kb_summary,
    phase_result_payload,
    probable_payload,
    report_payload,
    rule_payload,
    surface_payload,
)

DEFAULT_MAX_SESSIONS = 1000


class SessionNotFound(Exception):
    pass


class SessionCapacityExceeded(Exception):
    pass


@dataclass
class PhaseRecord:
    phase: int
    inputs: dict[str, float]
    mode: str
    result: PhaseResult
    refined: tuple[ProbableDisease, ...]


@dataclass
class AuditEntry:
    ts: float
    phase: int
    inputs: dict[str, float]
    mode: str
    outcome: str  # "applied" or "forked:<session id>"


@dataclass
class Session:
    id: str
    created_at: float
    chain: list[PhaseRecord] = field(default_factory=list)
    audit: list[AuditEntry] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """In-memory session registry with optional journal persistence."""

    def __init__(
        self,
        kb: CompiledKB,
        max_sessions: int = DEFAULT_MAX_SESSIONS,
        journal_path: str | Path | None = None,
        threshold: float = DEFAULT_THRESHOLD,
    ):
        self.kb = kb
        self.max_sessions = max_sessions
        self.threshold = threshold
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_lock = threading.Lock()
        if self._journal_path and self._journal_path.exists():
            self._replay()

    # -- journal ----------------------------------------------------------

    def _log(self, event: dict) -> None:
        if self._journal_path is None:
            return
        line = json.dumps(event, sort_keys=True, separators=(",", ":"))
        with self._journal_lock:
            with self._journal_path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _replay(self) -> None:
        text = self._journal_path.read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
                kind = event["event"]
                if kind == "create":
                    self.create(forced_id=event["id"], ts=event["ts"], log=False)
                elif kind == "submit":
                    self.submit(
                        event["session"],
                        event["phase"],
                        event["inputs"],
                        event.get("mode") or SUBSET_CLOSURE,
                        fork_id=event.get("fork"),
                        ts=event["ts"],
                        log=False,
                        enforce_capacity=False,
                    )
                else:
                    raise ValueError(f"unknown event {kind!r}")
            except Exception as exc:
                raise RuntimeError(
                    f"journal replay failed at {self._journal_path}:{lineno}: {exc}"
                ) from exc

    # -- operations --------------------------------------------------------

    def create(
        self,
        forced_id: str | None = None,
        ts: float | None = None,
        log: bool = True,
    ) -> Session:
        with self._lock:
            if forced_id is None and len(self._sessions) >= self.max_sessions:
                raise SessionCapacityExceeded(
                    f"session capacity {self.max_sessions} reached"
                )
            session = Session(
                id=forced_id or uuid.uuid4().hex,
                created_at=ts if ts is not None else time.time(),
            )
            self._sessions[session.id] = session
        if log:
            self._log({"event": "create", "id": session.id, "ts": session.created_at})
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionNotFound(session_id)
        return session

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)

    def submit(
        self,
        session_id: str,
        phase: int,
        inputs: Mapping[str, float],
        mode: str = SUBSET_CLOSURE,
        fork_id: str | None = None,
        ts: float | None = None,
        log: bool = True,
        enforce_capacity: bool = True,
    ) -> tuple[Session, PhaseRecord, str | None]:
        """Apply a phase submission; fork when the phase was already done.

        Returns the session holding the new record (the original or the
        fork), the record, and the forked-from id when a fork happened.
        """
        session = self.get(session_id)
        sys = self.kb.system
        sys.phase(phase)  # raises UnknownPhaseError for undeclared indices
        first_index = sys.phases[0].index
        now = ts if ts is not None else time.time()
        with session.lock:
            last = session.chain[-1].phase if session.chain else None
            if last is None and phase != first_index:
                raise PhaseOrderError(
                    f"consultation must start at phase {first_index}, got {phase}"
                )
            forking = last is not None and phase <= last
            if forking:
                prefix = [rec for rec in session.chain if rec.phase < phase]
            else:
                prefix = session.chain
            previous = prefix[-1].refined if prefix else None
            result = infer_phase(self.kb, phase, inputs, mode)
            refined = refine_list(previous, result, self.threshold)
            record = PhaseRecord(
                phase=phase,
                inputs=dict(inputs),
                mode=mode,
                result=result,
                refined=refined,
            )
            if not forking:
                session.chain.append(record)
                session.audit.append(
                    AuditEntry(now, phase, dict(inputs), mode, "applied")
                )
                if log:
                    self._log(
                        {
                            "event": "submit",
                            "session": session.id,
                            "phase": phase,
                            "inputs": dict(inputs),
                            "mode": mode,
                            "fork": None,
                            "ts": now,
                        }
                    )
                return session, record, None
            # fork: derived session keeps the prefix, original keeps history
            if enforce_capacity and fork_id is None and self.count() >= self.max_sessions:
                raise SessionCapacityExceeded(
                    f"session capacity {self.max_sessions} reached"
                )
            fork = Session(id=fork_id or uuid.uuid4().hex, created_at=now)
            fork.chain = list(prefix)
            fork.chain.append(record)
            fork.audit.append(AuditEntry(now, phase, dict(inputs), mode, "applied"))
            with self._lock:
                self._sessions[fork.id] = fork
            session.audit.append(
                AuditEntry(now, phase, dict(inputs), mode, f"forked:{fork.id}")
            )
            if log:
                self._log(
                    {
                        "event": "submit",
                        "session": session.id,
                        "phase": phase,
                        "inputs": dict(inputs),
                        "mode": mode,
                        "fork": fork.id,
                        "ts": now,
                    }
                )
            return fork, record, session.id

    def report(self, session_id: str) -> ConsultationReport:
        session = self.get(session_id)
        with session.lock:
            if not session.chain:
                raise PhaseOrderError("session has no completed phase")
            return ConsultationReport(
                phases=tuple(rec.result for rec in session.chain),
                refined=tuple(rec.refined for rec in session.chain),
                final=session.chain[-1].refined,
                threshold=self.threshold,
                mode=session.chain[-1].mode,
            )


class PhaseSubmission(BaseModel):
    inputs: dict[str, float]
    mode: str | None = None


def _json(payload, status_code: int = 200, headers: dict | None = None) -> Response:
    return Response(
        content=dump_json(payload),
        status_code=status_code,
        media_type="application/json",
        headers=headers,
    )


def create_app(
    kb: CompiledKB,
    checksum: str = "",
    max_sessions: int = DEFAULT_MAX_SESSIONS,
    journal_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> FastAPI:
    """Build the FastAPI application around one compiled knowledge base."""
    store = SessionStore(
        kb, max_sessions=max_sessions, journal_path=journal_path, threshold=threshold
    )
    app = FastAPI(title="fuzzylattice", version=__version__)
    app.state.store = store
    summary_bytes = dump_json(kb_summary(kb, checksum=checksum))

    @app.exception_handler(FuzzyLatticeError)
    def _engine_error(request: Request, exc: FuzzyLatticeError):
        status = 409 if isinstance(exc, PhaseOrderError) else 422
        field_name = (
            getattr(exc, "attribute", None)
            or getattr(exc, "variable", None)
            or getattr(exc, "disease", None)
        )
        return _json(
            {"detail": {"error": str(exc), "field": field_name}}, status_code=status
        )

    @app.get("/healthz")
    def healthz():
        return _json(
            {
                "status": "ok",
                "version": __version__,
                "format": kb.system.format_version,
                "kb_checksum": checksum,
            }
        )

    @app.get("/api/kb")
    def get_kb():
        return Response(content=summary_bytes, media_type="application/json")

    @app.post("/api/sessions")
    def create_session():
        try:
            session = store.create()
        except SessionCapacityExceeded as exc:
            raise HTTPException(
                status_code=503,
                detail=f"{exc}; retry after a session expires or raise "
                "FUZZYLATTICE_MAX_SESSIONS",
                headers={"Retry-After": "30"},
            )
        return _json(
            {"id": session.id, "created_at": session.created_at}, status_code=201
        )

    def _get_session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            return _json(
                {
                    "id": session.id,
                    "created_at": session.created_at,
                    "phases": [rec.phase for rec in session.chain],
                    "refined": probable_payload(
                        session.chain[-1].refined if session.chain else ()
                    ),
                    "audit": [
                        {
                            "ts": e.ts,
                            "phase": e.phase,
                            "inputs": e.inputs,
                            "mode": e.mode,
                            "outcome": e.outcome,
                        }
                        for e in session.audit
                    ],
                }
            )

    @app.post("/api/sessions/{session_id}/phases/{phase}")
    def submit_phase(session_id: str, phase: int, body: PhaseSubmission):
        _get_session(session_id)
        mode = body.mode or SUBSET_CLOSURE
        if mode not in MODES:
            raise HTTPException(
                status_code=422,
                detail=f"unknown matching mode {mode!r} (expected one of {list(MODES)})",
            )
        try:
            holder, record, forked_from = store.submit(
                session_id, phase, body.inputs, mode
            )
        except SessionCapacityExceeded as exc:
            raise HTTPException(status_code=503, detail=str(exc), headers={"Retry-After": "30"})
        payload = phase_result_payload(record.result)
        payload["session"] = holder.id
        payload["forked_from"] = forked_from
        payload["refined"] = probable_payload(record.refined)
        return _json(payload)

    @app.get("/api/sessions/{session_id}/report")
    def get_report(session_id: str):
        _get_session(session_id)
        report = store.report(session_id)  # PhaseOrderError -> 409 via handler
        return _json(report_payload(report))

    @app.get("/api/rules")
    def get_rules(attrs: str = ""):
        names = [a for a in attrs.split(",") if a]
        if not names:
            raise HTTPException(
                status_code=422, detail="attrs must list at least one attribute"
            )
        node = kb.node_for(names)  # UnknownAttributeError -> 422 via handler
        return _json(
            {
                "subset": list(node.subset.members),
                "classes": len(node.classes),
                "rules": [rule_payload(r) for r in node.rules],
            }
        )

    @app.get("/api/surface")
    def get_surface(
        request: Request,
        disease: str,
        x: str,
        y: str,
        resolution: int = 21,
        mode: str = SUBSET_CLOSURE,
    ):
        if mode not in MODES:
            raise HTTPException(status_code=422, detail=f"unknown matching mode {mode!r}")
        if resolution < 2:
            raise HTTPException(status_code=422, detail="resolution must be >= 2")
        reserved = {"disease", "x", "y", "resolution", "mode"}
        fixed: dict[str, float] = {}
        for key, value in request.query_params.items():
            if key in reserved:
                continue
            if key not in kb.system.variables:
                raise HTTPException(
                    status_code=422, detail=f"unknown query parameter '{key}'"
                )
            try:
                fixed[key] = float(value)
            except ValueError:
                raise HTTPException(
                    status_code=422, detail=f"fixed value for '{key}' must be a number"
                )
        grid = surface_grid(
            kb, disease, x, y, fixed=fixed, resolution=resolution, mode=mode
        )
        return _json(surface_payload(grid))

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path and ui_path.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return Response(
                content=(
                    "<html><body><h1>fuzzylattice</h1>"
                    "<p>Engine is up. API under <code>/api</code>; no UI bundle "
                    "is configured (set FUZZYLATTICE_UI_DIR).</p></body></html>"
                ),
                media_type="text/html",
            )

    return app
