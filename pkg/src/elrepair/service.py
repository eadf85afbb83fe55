"""HTTP service: stepwise repair sessions over JSON.

A session holds one repair problem plus run options.  Interactive
sessions advance by *replay*: every accumulated answer is loaded into a
scripted oracle and the strategy is re-run from the start; the first
question without an answer on file surfaces as the session's pending
question.  Replays are deterministic and memoized, so stepping is cheap
and revising an earlier answer is just "edit the script, replay".

Session states:

- ``not_started``      created, no run requested yet
- ``awaiting_answer``  mid-run, one question pending
- ``done``             run finished; the report is available
- ``stale``            an answer was revised; restart to re-run
- ``failed``           a run precondition broke mid-run (for example the
                       validator confirmed a supposedly wrong axiom as
                       true); the error field says why

Every session persists to its own directory (``ontology.elt``,
``wrong.elt``, ``oracle.elt`` when given, ``options.json``, the
append-only event log ``answers.jsonl``, and ``report.txt`` once done),
so a restarted service replays the log and resumes where it left off.

Errors are always ``{"code", "message", "detail"}``.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .eltext import ParseError, parse_axiom, parse_oracle, parse_tbox, parse_axiom_lines
from .engine import (
    STRATEGIES,
    PreconditionError,
    RunReport,
    check_problem,
    run_strategy,
)
from .fixtures import FIXTURES, fixture_texts
from .model import Axiom, TBox, remove_axioms, render_axiom, render_concept
from .oracle import (
    DeclarativeOracle,
    PendingAnswer,
    QueryRecord,
    QuestionContext,
    RecordingOracle,
    ScriptedOracle,
    check_compatibility,
)
from .reasoner import pool_from_name
from .report import render_report


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _parse_error(exc: ParseError, which: str) -> ServiceError:
    return ServiceError(400, "parse-error", f"cannot parse {which}", str(exc))


class RunOptions(BaseModel):
    strategy: str = "C1"
    pool: str = "atomic"
    equiv_exclude: bool = False
    prune: bool = True
    order: list[int] | None = None
    seed: int = 0

    def validated(self) -> "RunOptions":
        if self.strategy not in STRATEGIES:
            raise ServiceError(400, "unknown-strategy",
                               f"unknown strategy {self.strategy!r}",
                               sorted(STRATEGIES, key=lambda s: int(s[1:])))
        try:
            pool_from_name(self.pool)
        except ValueError as exc:
            raise ServiceError(400, "unknown-pool", str(exc)) from exc
        return self


class CreateSessionBody(BaseModel):
    fixture: str | None = None
    ontology: str | None = None
    wrong: str | None = None
    oracle: str | None = None
    options: RunOptions = Field(default_factory=RunOptions)


class StartBody(BaseModel):
    auto: bool = False


class AnswerBody(BaseModel):
    axiom: str
    answer: bool


class _OverlaidSource:
    """Declarative answers, except where explicit answers override them."""

    def __init__(self, overrides: dict[Axiom, bool], fallback: DeclarativeOracle) -> None:
        self.overrides = overrides
        self.fallback = fallback

    def judge(self, axiom: Axiom) -> bool:
        got = self.overrides.get(axiom)
        if got is not None:
            return got
        return self.fallback.judge(axiom)


class Session:
    def __init__(
        self,
        session_id: str,
        directory: Path,
        tbox: TBox,
        wrong: tuple[Axiom, ...],
        oracle_text: str | None,
        options: RunOptions,
    ) -> None:
        self.id = session_id
        self.dir = directory
        self.tbox = tbox
        self.wrong = wrong
        self.oracle_text = oracle_text
        self.options = options
        self.answers: dict[Axiom, bool] = {}
        self.revised: set[Axiom] = set()
        self.state = "not_started"
        self.auto: bool | None = None
        self.pending: PendingAnswer | None = None
        self.report: RunReport | None = None
        self.error: dict[str, str] | None = None
        self.lock = threading.Lock()

    # -- persistence ---------------------------------------------------

    def append_event(self, event: dict[str, Any]) -> None:
        with open(self.dir / "answers.jsonl", "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    # -- stepping ------------------------------------------------------

    def _answer_source(self):
        if self.auto:
            if self.oracle_text is None:
                raise ServiceError(409, "no-oracle",
                                   "auto mode needs an oracle answer table")
            try:
                spec = parse_oracle(self.oracle_text)
            except ParseError as exc:
                raise _parse_error(exc, "oracle") from exc
            fallback = DeclarativeOracle(
                spec.true_axioms,
                default=spec.default,
                reflexive=spec.reflexive,
                constructors=spec.constructors,
                transitive=spec.transitive,
            )
            return _OverlaidSource(dict(self.answers), fallback)
        return ScriptedOracle(dict(self.answers))

    def advance(self) -> None:
        """Replay all recorded answers; stop at the next unanswered question."""
        oracle = RecordingOracle(self._answer_source())
        self.pending = None
        self.error = None
        try:
            report = run_strategy(
                self.tbox, self.wrong, oracle, self.options.strategy,
                order=tuple(self.options.order) if self.options.order else None,
                pool=pool_from_name(self.options.pool),
                equiv_exclude=self.options.equiv_exclude,
                prune=self.options.prune,
                seed=self.options.seed,
            )
        except PendingAnswer as pending:
            self.state = "awaiting_answer"
            self.pending = pending
            self.report = None
        except PreconditionError as exc:
            self.state = "failed"
            self.report = None
            self.error = {"invariant": exc.invariant, "detail": exc.detail}
        else:
            if self.auto:
                # in auto mode the declarative answers become part of the
                # session's record, so revisions and warnings see them
                for rec in oracle.log:
                    if rec.axiom not in self.answers:
                        self.answers[rec.axiom] = rec.answer
            self.state = "done"
            self.report = report
            (self.dir / "report.txt").write_text(render_report(report), encoding="utf-8")

    # -- payloads --------------------------------------------------------

    def records(self) -> list[QueryRecord]:
        return [QueryRecord(ax, ans, ax in self.revised)
                for ax, ans in self.answers.items()]

    def warnings_payload(self) -> list[dict[str, Any]]:
        base = remove_axioms(self.tbox, self.wrong)
        found = check_compatibility(self.records(), base)
        return [
            {
                "kind": w.kind,
                "axiom": render_axiom(w.axiom),
                "support": [render_axiom(a) for a in w.support],
            }
            for w in found
        ]

    def pending_payload(self) -> dict[str, Any]:
        assert self.pending is not None
        ctx = self.pending.context
        return {
            "axiom": render_axiom(self.pending.axiom),
            "context": _context_payload(ctx),
            "asked": len(self.answers),
        }

    def info_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "id": self.id,
            "state": self.state,
            "auto": self.auto,
            "options": self.options.model_dump(),
            "wrong": [render_axiom(a) for a in self.wrong],
            "ontology_size": len(self.tbox),
            "has_oracle": self.oracle_text is not None,
            "answered": len(self.answers),
            "history": [
                {"axiom": render_axiom(r.axiom), "answer": r.answer, "revised": r.revised}
                for r in self.records()
            ],
            "error": self.error,
        }
        payload["pending"] = (
            self.pending_payload() if self.state == "awaiting_answer" else None
        )
        return payload

    def result_payload(self) -> dict[str, Any]:
        r = self.report
        assert r is not None
        return {
            "report": render_report(r),
            "strategy": r.strategy,
            "repair_valid": r.repair_valid,
            "queries_distinct": r.queries_distinct,
            "removed": [render_axiom(a) for a in r.removed],
            "added": [render_axiom(a) for a in r.added],
            "weakened": [render_axiom(a) for a in r.weakened_union],
            "completed": [render_axiom(a) for a in r.completed_union],
            "initial_axioms": [render_axiom(a) for a in r.initial.axioms],
            "final_axioms": [render_axiom(a) for a in r.final.axioms],
        }


def _context_payload(ctx: QuestionContext | None) -> dict[str, Any] | None:
    if ctx is None:
        return None
    return {
        "kind": ctx.kind,
        "wrong_axiom": render_axiom(ctx.wrong_axiom) if ctx.wrong_axiom else None,
        "seed_axiom": render_axiom(ctx.seed_axiom) if ctx.seed_axiom else None,
        "left_label": ctx.left_label,
        "right_label": ctx.right_label,
        "left_pane": [render_concept(c) for c in ctx.left_pane],
        "right_pane": [render_concept(c) for c in ctx.right_pane],
    }


class SessionStore:
    def __init__(self, root: Path) -> None:
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self._load_existing()

    # -- creation and lookup ----------------------------------------------

    def create(self, body: CreateSessionBody) -> Session:
        texts: dict[str, str] = {}
        if body.fixture is not None:
            try:
                texts = fixture_texts(body.fixture)
            except KeyError:
                raise ServiceError(404, "not-found",
                                   f"unknown fixture {body.fixture!r}",
                                   sorted(FIXTURES)) from None
        for slot in ("ontology", "wrong", "oracle"):
            value = getattr(body, slot)
            if value is not None:
                texts[slot] = value
        missing = [s for s in ("ontology", "wrong") if s not in texts]
        if missing:
            raise ServiceError(400, "missing-input",
                               "session needs " + " and ".join(missing)
                               + " (inline or via fixture)")
        options = body.options.validated()
        session_id = uuid.uuid4().hex[:12]
        directory = self.root / session_id
        session = _build_session(session_id, directory, texts, options)

        directory.mkdir(parents=True, exist_ok=False)
        (directory / "ontology.elt").write_text(texts["ontology"], encoding="utf-8")
        (directory / "wrong.elt").write_text(texts["wrong"], encoding="utf-8")
        if "oracle" in texts:
            (directory / "oracle.elt").write_text(texts["oracle"], encoding="utf-8")
        (directory / "options.json").write_text(
            json.dumps(options.model_dump(), indent=2) + "\n", encoding="utf-8")
        (directory / "answers.jsonl").touch()

        with self.lock:
            self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self.lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "not-found", f"no session {session_id!r}")
        return session

    # -- resume on startup --------------------------------------------------

    def _load_existing(self) -> None:
        for directory in sorted(self.root.iterdir()) if self.root.exists() else []:
            if not (directory / "options.json").exists():
                continue
            try:
                self.sessions[directory.name] = _resume_session(directory)
            except Exception as exc:  # corrupt session dirs must not kill startup
                import sys
                print(f"warning: skipping session dir {directory}: {exc}",
                      file=sys.stderr)


def _build_session(
    session_id: str, directory: Path, texts: dict[str, str], options: RunOptions
) -> Session:
    try:
        tbox, _ = parse_tbox(texts["ontology"])
    except ParseError as exc:
        raise _parse_error(exc, "ontology") from exc
    try:
        wrong, _ = parse_axiom_lines(texts["wrong"])
    except ParseError as exc:
        raise _parse_error(exc, "wrong") from exc
    oracle_text = texts.get("oracle")
    if oracle_text is not None:
        try:
            parse_oracle(oracle_text)
        except ParseError as exc:
            raise _parse_error(exc, "oracle") from exc
    try:
        check_problem(tbox, wrong)
    except PreconditionError as exc:
        raise ServiceError(409, "precondition", exc.invariant, exc.detail) from exc
    if options.order is not None:
        if sorted(options.order) != list(range(1, len(wrong) + 1)):
            raise ServiceError(400, "bad-order",
                               f"order must be a permutation of 1..{len(wrong)}",
                               options.order)
    return Session(session_id, directory, tbox, wrong, oracle_text, options)


def _resume_session(directory: Path) -> Session:
    options = RunOptions.model_validate_json(
        (directory / "options.json").read_text(encoding="utf-8"))
    texts = {
        "ontology": (directory / "ontology.elt").read_text(encoding="utf-8"),
        "wrong": (directory / "wrong.elt").read_text(encoding="utf-8"),
    }
    if (directory / "oracle.elt").exists():
        texts["oracle"] = (directory / "oracle.elt").read_text(encoding="utf-8")
    session = _build_session(directory.name, directory, texts, options)

    started = False
    stale = False
    log_path = directory / "answers.jsonl"
    if log_path.exists():
        for line in log_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            kind = event["event"]
            if kind == "start":
                started = True
                stale = False
                session.auto = bool(event.get("auto", False))
            elif kind == "answer":
                session.answers[parse_axiom(event["axiom"])] = bool(event["answer"])
            elif kind == "revise":
                ax = parse_axiom(event["axiom"])
                session.answers[ax] = bool(event["answer"])
                session.revised.add(ax)
                if started:
                    stale = True
            else:
                raise ValueError(f"unknown event {kind!r}")
    if stale:
        session.state = "stale"
    elif started:
        session.advance()
    return session


def create_app(sessions_dir: str | Path = "sessions") -> FastAPI:
    store = SessionStore(Path(sessions_dir))
    app = FastAPI(title="elrepair", docs_url=None, redoc_url=None)
    app.state.store = store
    # the browser UI is served as a static page from anywhere (usually
    # file:// or a dev server), so cross-origin requests must work
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(ServiceError)
    async def _on_service_error(_request: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(
        _request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"code": "validation", "message": "invalid request body",
                     "detail": exc.errors()},
        )

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/fixtures/{name}")
    def get_fixture(name: str) -> dict[str, str]:
        try:
            texts = fixture_texts(name)
        except KeyError:
            raise ServiceError(404, "not-found", f"unknown fixture {name!r}",
                               sorted(FIXTURES)) from None
        return {"name": name, **texts}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        session = store.create(body)
        return session.info_payload()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            return session.info_payload()

    @app.post("/sessions/{session_id}/start")
    def start_session(session_id: str, body: StartBody | None = None) -> dict[str, Any]:
        session = store.get(session_id)
        auto = bool(body.auto) if body is not None else False
        with session.lock:
            if auto and session.oracle_text is None:
                raise ServiceError(409, "no-oracle",
                                   "auto mode needs an oracle answer table")
            session.auto = auto
            session.append_event({"event": "start", "auto": auto})
            session.advance()
            return session.info_payload()

    @app.get("/sessions/{session_id}/pending")
    def get_pending(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            if session.state != "awaiting_answer":
                raise ServiceError(409, "not-awaiting",
                                   f"session is {session.state}, no pending question")
            return session.pending_payload()

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody) -> dict[str, Any]:
        session = store.get(session_id)
        try:
            axiom = parse_axiom(body.axiom)
        except ParseError as exc:
            raise _parse_error(exc, "axiom") from exc
        with session.lock:
            if session.state != "awaiting_answer" or session.pending is None:
                raise ServiceError(409, "not-awaiting",
                                   f"session is {session.state}, no pending question")
            expected = session.pending.axiom
            if axiom != expected:
                raise ServiceError(409, "answer-mismatch",
                                   "answer is for a different axiom than the "
                                   "pending question",
                                   {"expected": render_axiom(expected),
                                    "got": render_axiom(axiom)})
            session.answers[axiom] = body.answer
            session.append_event({"event": "answer",
                                  "axiom": render_axiom(axiom),
                                  "answer": body.answer})
            session.advance()
            return session.info_payload()

    @app.post("/sessions/{session_id}/revisions")
    def post_revision(session_id: str, body: AnswerBody) -> dict[str, Any]:
        session = store.get(session_id)
        try:
            axiom = parse_axiom(body.axiom)
        except ParseError as exc:
            raise _parse_error(exc, "axiom") from exc
        with session.lock:
            if axiom not in session.answers:
                raise ServiceError(404, "never-asked",
                                   "that axiom was never asked in this session",
                                   render_axiom(axiom))
            changed = session.answers[axiom] != body.answer
            session.answers[axiom] = body.answer
            session.revised.add(axiom)
            session.append_event({"event": "revise",
                                  "axiom": render_axiom(axiom),
                                  "answer": body.answer})
            if changed and session.state != "not_started":
                session.state = "stale"
                session.pending = None
                session.report = None
            payload = session.info_payload()
            payload["changed"] = changed
            return payload

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            if session.state != "done" or session.report is None:
                raise ServiceError(409, "not-done",
                                   f"session is {session.state}; no result yet")
            return session.result_payload()

    @app.get("/sessions/{session_id}/warnings")
    def get_warnings(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            return {"warnings": session.warnings_payload()}

    return app
