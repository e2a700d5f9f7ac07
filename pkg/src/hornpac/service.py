"""Interactive expert sessions over HTTP.

A session runs the PAC learner as a suspendable state machine: each
oracle query is either auto-answered (from the session cache or an
attached dataset, depending on the answering mode) or surfaced to the
human expert, with the learner suspended until the answer arrives.
Every answered query is appended to a replayable log; with a state
directory configured, logs persist to disk and sessions survive process
restarts.

Answering modes: ``auto`` answers everything from the attached dataset,
``hybrid`` answers restricted queries from the dataset and surfaces full
queries, ``manual`` surfaces everything.  Payload shapes and status
codes are fixed in PROTOCOL.md at the repository root.
"""

from __future__ import annotations

import dataclasses
import json
import threading
import time
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import io as hio
from .core import (
    BOTTOM,
    AssignmentFamily,
    HornFormula,
    Implication,
    Universe,
)
from .learner import (
    LearnerConfig,
    RunReport,
    open_learning_session,
)
from .oracle import DatasetOracle, Query

ANSWER_AUTO = "auto"
ANSWER_HYBRID = "hybrid"
ANSWER_MANUAL = "manual"

STATE_CREATED = "created"
STATE_AWAITING = "awaiting_answer"
STATE_RUNNING = "running"
STATE_FINISHED = "finished"
STATE_ABORTED = "aborted"


class SessionError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _implication_payload(imp: Implication) -> dict:
    premise = list(imp.premise.labels())
    if imp.conclusion is BOTTOM:
        conclusion: Any = "bottom"
        display = "bottom"
    else:
        conclusion = list(imp.conclusion.labels())
        display = list((imp.conclusion - imp.premise).labels())
    return {"premise": premise, "conclusion": conclusion, "conclusion_display": display}


def _query_payload(query: Query) -> dict:
    payload = _implication_payload(query.implication)
    payload.update(
        restricted=query.restricted,
        round=query.round,
        sample=query.sample,
        budget=query.budget,
        purpose=query.purpose,
    )
    return payload


def _parse_answer_value(query: Query, accept: bool, counterexample: list[str] | None,
                        universe: Universe):
    """Validate an expert answer against the pending query, returning the learner value."""
    if accept:
        return True if query.restricted else None
    if counterexample is None:
        raise SessionError(400, "a rejection must carry a counterexample")
    try:
        x = universe.make(counterexample)
    except ValueError as exc:
        raise SessionError(400, str(exc)) from None
    imp = query.implication
    if not imp.premise <= x:
        raise SessionError(
            400, "counterexample does not contain the premise; the query is not violated"
        )
    if imp.conclusion is not BOTTOM and imp.conclusion <= x:
        raise SessionError(
            400, "counterexample contains the conclusion; the query is not violated"
        )
    return x


class Session:
    """One learning run, suspendable at every surfaced query."""

    def __init__(
        self,
        session_id: str,
        config: LearnerConfig,
        universe: Universe,
        dataset: AssignmentFamily | None,
        answering: str,
        dataset_ref: str | None = None,
        log_path: Path | None = None,
    ):
        if answering not in (ANSWER_AUTO, ANSWER_HYBRID, ANSWER_MANUAL):
            raise SessionError(400, f"unknown answering mode {answering!r}")
        if answering in (ANSWER_AUTO, ANSWER_HYBRID) and dataset is None:
            raise SessionError(400, f"answering mode {answering!r} needs a dataset")
        self.id = session_id
        self.config = config
        self.universe = universe
        self.dataset = dataset
        self.dataset_ref = dataset_ref
        self.answering = answering
        self.lock = threading.Lock()
        self.state = STATE_CREATED
        self.pending: Query | None = None
        self.hypothesis = HornFormula(universe)
        self.result: tuple[HornFormula, RunReport] | None = None
        self.abort_reason: str | None = None
        self.log: list[dict] = []
        self.log_path = log_path
        self._seq = 0
        self._answer_counts = {"human": 0, "dataset": 0, "cache": 0}
        self._hypothesis_payload: list[dict] | None = []
        self._oracle = DatasetOracle(dataset) if dataset is not None else None
        self._handles = open_learning_session(
            config,
            universe,
            on_cache_hit=self._record_cache_hit,
            on_hypothesis=self._snapshot_hypothesis,
        )
        self._started = False
        self._append_log({
            "type": "created",
            "config": dataclasses.asdict(config),
            "universe": list(universe.names),
            "dataset": dataset_ref,
            "answering": answering,
        })

    # -- log plumbing -------------------------------------------------

    def _append_log(self, record: dict) -> None:
        record = {"seq": self._seq, "ts": time.time(), **record}
        self._seq += 1
        self.log.append(record)
        if self.log_path is not None:
            with self.log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    @staticmethod
    def _answer_payload(value) -> dict:
        if value is True or value is None:
            return {"valid": True}
        if value is False:
            return {"valid": False, "counterexample": None}
        return {"valid": False, "counterexample": list(value.labels())}

    def _record_answer(self, query: Query, value, source: str) -> None:
        self._answer_counts[source] += 1
        self._append_log({
            "type": "answer",
            "source": source,
            "query": _query_payload(query),
            "answer": self._answer_payload(value),
        })

    def _record_cache_hit(self, query: Query, value) -> None:
        self._record_answer(query, value, "cache")

    def _snapshot_hypothesis(self, h: HornFormula) -> None:
        self.hypothesis = h
        self._hypothesis_payload = None  # re-rendered lazily on the next view

    def _hypothesis_view(self) -> list[dict]:
        if self._hypothesis_payload is None:
            self._hypothesis_payload = [_implication_payload(imp) for imp in self.hypothesis]
        return self._hypothesis_payload

    # -- the pump ------------------------------------------------------

    def _auto_answer(self, query: Query):
        """Dataset answer when the mode routes this query away from the human."""
        if self._oracle is None:
            return None
        if self.answering == ANSWER_AUTO or (
            self.answering == ANSWER_HYBRID and query.restricted
        ):
            if query.restricted:
                return query.restricted, self._oracle.ask_restricted(query.implication)
            return query.restricted, self._oracle.ask(query.implication)
        return None

    def _advance(self, answer=None) -> None:
        """Feed ``answer`` if the learner is suspended, then run to the next suspension."""
        gen = self._handles.generator
        self.state = STATE_RUNNING
        try:
            if not self._started:
                self._started = True
                query = next(gen)
            else:
                query = gen.send(answer)
            while True:
                auto = self._auto_answer(query)
                if auto is None:
                    self.pending = query
                    self.state = STATE_AWAITING
                    return
                _, value = auto
                self._record_answer(query, value, "dataset")
                query = gen.send(value)
        except StopIteration as stop:
            formula, report = stop.value
            self.result = (formula, report)
            self._snapshot_hypothesis(formula)
            self.pending = None
            self.state = STATE_FINISHED
            self._append_log({"type": "finished", "implications": len(formula)})

    def start(self) -> None:
        with self.lock:
            self._advance()

    def answer(self, accept: bool, counterexample: list[str] | None) -> None:
        locked = self.lock.acquire(blocking=False)
        if not locked:
            raise SessionError(409, "session is busy processing another answer")
        try:
            if self.state != STATE_AWAITING or self.pending is None:
                raise SessionError(409, f"session is {self.state}, not awaiting an answer")
            query = self.pending
            value = _parse_answer_value(query, accept, counterexample, self.universe)
            self._record_answer(query, value, "human")
            self.pending = None
            self._advance(value)
        finally:
            self.lock.release()

    def abort(self, reason: str = "aborted by request") -> None:
        with self.lock:
            if self.state in (STATE_FINISHED, STATE_ABORTED):
                raise SessionError(409, f"session is already {self.state}")
            self.state = STATE_ABORTED
            self.abort_reason = reason
            self.pending = None
            self._append_log({"type": "aborted", "reason": reason})

    # -- views ----------------------------------------------------------

    def view(self) -> dict:
        counters = self._handles.counters
        progress = None
        if self.pending is not None:
            progress = {
                "round": self.pending.round,
                "sample": self.pending.sample,
                "budget": self.pending.budget,
            }
        return {
            "id": self.id,
            "state": self.state,
            "answering": self.answering,
            "config": dataclasses.asdict(self.config),
            "universe": list(self.universe.names),
            "dataset": self.dataset_ref,
            "pending_query": _query_payload(self.pending) if self.pending else None,
            "progress": progress,
            "hypothesis": self._hypothesis_view(),
            "implications": len(self.hypothesis),
            "queries": {
                "restricted": counters.restricted,
                "full": counters.full,
                "cache_hits": self._handles.cache.hits if self._handles.cache else 0,
                "by_source": dict(self._answer_counts),
            },
            "terminated": self.result[1].terminated if self.result else None,
            "abort_reason": self.abort_reason,
        }

    def report_payload(self) -> dict:
        report = None
        if self.result is not None:
            report = hio.report_to_dict(self.result[1])
        return {
            "id": self.id,
            "state": self.state,
            "report": report,
            "log": self.log,
        }


class SessionStore:
    """All live sessions; restores persisted ones from the state directory."""

    def __init__(self, state_dir: str | Path | None = None,
                 datasets: dict[str, hio.ContextDocument] | None = None):
        self.state_dir = Path(state_dir) if state_dir else None
        if self.state_dir is not None:
            self.state_dir.mkdir(parents=True, exist_ok=True)
        self.datasets = datasets or {}
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        if self.state_dir is not None:
            self._restore()

    # -- dataset resolution ---------------------------------------------

    def resolve_dataset(self, ref: str | None) -> hio.ContextDocument | None:
        if ref is None:
            return None
        if ref in self.datasets:
            return self.datasets[ref]
        try:
            path = Path(ref)
            if path.suffix.lower() == ".csv":
                try:
                    scaling = hio.packaged_scaling_path(path.stem)
                except FileNotFoundError:
                    raise SessionError(400, f"dataset {ref!r} needs a packaged scaling spec")
                doc = hio.load_context(path, scaling)
            elif path.suffix.lower() == ".cxt":
                doc = hio.load_context(path)
            else:
                doc = hio.load_context(hio.packaged_dataset_path(ref),
                                       hio.packaged_scaling_path(ref))
        except (OSError, ValueError) as exc:
            raise SessionError(400, f"cannot load dataset {ref!r}: {exc}") from None
        self.datasets[ref] = doc
        return doc

    # -- lifecycle --------------------------------------------------------

    def create(
        self,
        config: LearnerConfig,
        universe: Universe,
        dataset_ref: str | None,
        answering: str,
        session_id: str | None = None,
    ) -> Session:
        doc = self.resolve_dataset(dataset_ref)
        session_id = session_id or uuid.uuid4().hex
        log_path = self.state_dir / f"{session_id}.jsonl" if self.state_dir else None
        session = Session(
            session_id,
            config,
            universe,
            doc.family if doc else None,
            answering,
            dataset_ref=dataset_ref,
            log_path=log_path,
        )
        with self.lock:
            self.sessions[session_id] = session
        session.start()
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise SessionError(404, f"no session {session_id!r}")
        return session

    # -- persistence -------------------------------------------------------

    def _restore(self) -> None:
        for log_file in sorted(self.state_dir.glob("*.jsonl")):
            try:
                self._restore_one(log_file)
            except Exception as exc:  # a corrupt log must not block startup
                print(f"warning: could not restore {log_file.name}: {exc}")

    def _restore_one(self, log_file: Path) -> None:
        records = [
            json.loads(line)
            for line in log_file.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        if not records or records[0].get("type") != "created":
            raise ValueError("log does not start with a created record")
        head = records[0]
        config = LearnerConfig(**head["config"])
        universe = Universe(head["universe"])
        session_id = log_file.stem
        dataset_ref = head.get("dataset")
        doc = self.resolve_dataset(dataset_ref)
        session = Session(
            session_id,
            config,
            universe,
            doc.family if doc else None,
            head["answering"],
            dataset_ref=dataset_ref,
            log_path=None,  # replay must not re-append
        )
        replay_error = None
        aborted_reason = None
        try:
            session.start()
            for record in records[1:]:
                kind = record.get("type")
                if kind == "aborted":
                    aborted_reason = record.get("reason", "aborted")
                    break
                if kind != "answer" or record.get("source") != "human":
                    continue  # dataset and cache answers re-derive during replay
                if session.state != STATE_AWAITING:
                    raise ValueError("log has more answers than the learner asked for")
                answer = record["answer"]
                session.answer(answer["valid"], answer.get("counterexample"))
        except SessionError as exc:
            replay_error = exc.message
        except ValueError as exc:
            replay_error = str(exc)
        # The replay regenerated the same records in memory; reattach the
        # original log verbatim and resume persisting to it.
        finished_during_replay = session.state == STATE_FINISHED and not any(
            r.get("type") == "finished" for r in records
        )
        session.log = records
        session._seq = max((r.get("seq", -1) for r in records), default=-1) + 1
        session.log_path = log_file
        if finished_during_replay:
            session._append_log(
                {"type": "finished", "implications": len(session.hypothesis)}
            )
        if aborted_reason is not None and session.state != STATE_FINISHED:
            session.state = STATE_ABORTED
            session.abort_reason = aborted_reason
            session.pending = None
        if replay_error is not None:
            session.state = STATE_ABORTED
            session.abort_reason = f"log replay failed: {replay_error}"
            session.pending = None
        with self.lock:
            self.sessions[session_id] = session


# ---------------------------------------------------------------------------
# HTTP layer


class CreateSessionBody(BaseModel):
    epsilon: float
    delta: float
    mode: str = "approx"
    seed: int = 0
    universe: list[str] | None = None
    dataset: str | None = None
    answering: str | None = None
    cache_counterexamples: bool | None = None
    cache_confirmed: bool | None = None
    valid_hypothesis: bool = False
    max_counterexamples: int | None = None


class AnswerBody(BaseModel):
    accept: bool
    counterexample: list[str] | None = None


def create_app(
    state_dir: str | Path | None = None,
    default_dataset: hio.ContextDocument | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    datasets = {"default": default_dataset} if default_dataset is not None else {}
    store = SessionStore(state_dir=state_dir, datasets=datasets)
    app = FastAPI(title="hornpac expert sessions")
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    def malformed_body(request, exc):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def run(fn):
        try:
            return fn()
        except SessionError as exc:
            raise HTTPException(status_code=exc.status, detail=exc.message) from None

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        def go():
            dataset_ref = body.dataset
            doc = store.resolve_dataset(dataset_ref)
            if body.universe is not None:
                try:
                    universe = Universe(body.universe)
                except ValueError as exc:
                    raise SessionError(400, str(exc)) from None
                if doc is not None and universe != doc.universe:
                    raise SessionError(400, "explicit universe differs from the dataset's")
            elif doc is not None:
                universe = doc.universe
            else:
                raise SessionError(400, "either a universe or a dataset is required")
            answering = body.answering or (ANSWER_AUTO if doc is not None else ANSWER_MANUAL)
            # Human-facing sessions cache by default to spare the expert.
            default_cache = answering == ANSWER_MANUAL
            cache_cex = (
                body.cache_counterexamples
                if body.cache_counterexamples is not None
                else default_cache
            )
            cache_conf = (
                body.cache_confirmed if body.cache_confirmed is not None else default_cache
            )
            try:
                config = LearnerConfig(
                    epsilon=body.epsilon,
                    delta=body.delta,
                    mode=body.mode,
                    seed=body.seed,
                    cache_counterexamples=cache_cex,
                    cache_confirmed=cache_conf,
                    valid_hypothesis=body.valid_hypothesis,
                    max_counterexamples=body.max_counterexamples,
                )
            except ValueError as exc:
                raise SessionError(400, str(exc)) from None
            session = store.create(config, universe, dataset_ref, answering)
            return session.view()

        return run(go)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return run(lambda: store.get(session_id).view())

    @app.get("/sessions/{session_id}/query")
    def get_query(session_id: str):
        def go():
            session = store.get(session_id)
            return {
                "id": session.id,
                "state": session.state,
                "query": _query_payload(session.pending) if session.pending else None,
            }

        return run(go)

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody):
        def go():
            session = store.get(session_id)
            session.answer(body.accept, body.counterexample)
            return session.view()

        return run(go)

    @app.get("/sessions/{session_id}/hypothesis")
    def get_hypothesis(session_id: str):
        def go():
            session = store.get(session_id)
            return {
                "id": session.id,
                "state": session.state,
                "implications": [_implication_payload(imp) for imp in session.hypothesis],
            }

        return run(go)

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        return run(lambda: store.get(session_id).report_payload())

    @app.post("/sessions/{session_id}/abort")
    def post_abort(session_id: str):
        def go():
            session = store.get(session_id)
            session.abort()
            return session.view()

        return run(go)

    if ui_dir is not None:
        ui_path = Path(ui_dir)
        if ui_path.is_dir():
            app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

            @app.get("/")
            def index():
                return FileResponse(str(ui_path / "index.html"))

    return app
