"""Annotation server: qualification gate, list assignment, response log.

Ground truth is an append-only JSONL event log.  The in-memory ledger is a
pure fold of that log, every mutation is appended (and pushed to the
kernel) before it is applied or acknowledged, so a process killed at any
moment can be rebuilt by replaying the file.  A torn final line from an
interrupted write is skipped on replay; a torn line anywhere else is
corruption and refuses to load.
"""
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .items import DatasetItem, ExperimentList

QUAL_PASS_MIN = 15  # of exactly 20
COMPLETIONS_PER_LIST = 3
DEFAULT_PENDING_TTL_S = 24 * 3600.0


class ExperimentError(Exception):
    """Client-side problem; carries the HTTP status the API maps it to."""

    def __init__(self, message: str, status: int = 400):
        super().__init__(message)
        self.status = status


class LogCorruptError(Exception):
    pass


# ------------------------------------------------------------- event log

class EventLog:
    """Append-only JSONL file with crash-safe appends.

    Writes go through an unbuffered file descriptor so an acknowledged
    event survives the process dying; fsync additionally survives the
    machine dying and is on by default.
    """

    def __init__(self, path: str | Path, fsync: bool = True):
        self.path = Path(path)
        self.fsync = fsync
        self._fh = open(self.path, "ab", buffering=0)

    def append(self, event: dict) -> None:
        line = json.dumps(event, ensure_ascii=False, separators=(",", ":")) + "\n"
        self._fh.write(line.encode("utf-8"))
        if self.fsync:
            os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()

    @staticmethod
    def replay(path: str | Path) -> list[dict]:
        path = Path(path)
        if not path.exists():
            return []
        events = []
        with open(path, "rb") as fh:
            lines = fh.read().split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        for i, raw in enumerate(lines):
            try:
                events.append(json.loads(raw.decode("utf-8")))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                if i == len(lines) - 1:
                    break  # torn final line from an interrupted append
                raise LogCorruptError(f"{path}: line {i + 1} is not valid JSON") from exc
        return events


# ---------------------------------------------------------------- ledger

@dataclass
class PendingAssignment:
    list_id: str
    assigned_ts: float
    answered: set = field(default_factory=set)


class Ledger:
    """Experiment state as a fold over log events.  No clocks, no I/O."""

    def __init__(self, lists: list[ExperimentList]):
        self.list_items = {lst.list_id: set(lst.item_ids) for lst in lists}
        self.list_order = [lst.list_id for lst in lists]
        self.qual: dict[str, dict] = {}
        self.pending: dict[str, PendingAssignment] = {}
        self.completed: dict[str, list[str]] = {}
        self.list_completed: dict[str, int] = {l: 0 for l in self.list_order}
        self.list_pending: dict[str, set[str]] = {l: set() for l in self.list_order}
        self.responses: dict[str, list[tuple[str, str]]] = {}
        self.seen_pairs: set[tuple[str, str]] = set()
        self.n_events = 0

    # -- folds; each mirrors one event type

    def apply(self, event: dict) -> None:
        handler = getattr(self, f"_apply_{event['type']}", None)
        if handler is None:
            raise LogCorruptError(f"unknown event type {event['type']!r}")
        handler(event)
        self.n_events += 1

    def _apply_qual(self, event: dict) -> None:
        self.qual[event["worker_id"]] = {
            "n_correct": event["n_correct"],
            "passed": event["passed"],
            "ts": event["ts"],
        }

    def _apply_assign(self, event: dict) -> None:
        worker, list_id = event["worker_id"], event["list_id"]
        # carry over answers from an expired hold on the same list so a
        # returning worker resumes instead of drowning in duplicates
        answered = {i for i in self.list_items[list_id] if (worker, i) in self.seen_pairs}
        self.pending[worker] = PendingAssignment(list_id, event["ts"], answered)
        self.list_pending[list_id].add(worker)

    def _apply_expire(self, event: dict) -> None:
        worker, list_id = event["worker_id"], event["list_id"]
        held = self.pending.get(worker)
        if held is not None and held.list_id == list_id:
            del self.pending[worker]
        self.list_pending[list_id].discard(worker)

    def _apply_response(self, event: dict) -> None:
        worker, item_id = event["worker_id"], event["item_id"]
        self.seen_pairs.add((worker, item_id))
        self.responses.setdefault(item_id, []).append((worker, event["response"]))
        held = self.pending.get(worker)
        if held is None or held.list_id != event["list_id"]:
            return
        held.answered.add(item_id)
        if held.answered >= self.list_items[held.list_id]:
            del self.pending[worker]
            self.list_pending[held.list_id].discard(worker)
            self.list_completed[held.list_id] += 1
            self.completed.setdefault(worker, []).append(held.list_id)

    # -- queries

    def is_qualified(self, worker: str) -> bool:
        return bool(self.qual.get(worker, {}).get("passed"))

    def served(self, list_id: str) -> int:
        return self.list_completed[list_id] + len(self.list_pending[list_id])

    def pick_list(self, worker: str) -> str | None:
        """Least-served open list the worker has not completed; ties go to
        the lowest list id."""
        done = set(self.completed.get(worker, ()))
        best = None
        for list_id in self.list_order:
            if list_id in done:
                continue
            n = self.served(list_id)
            if n >= COMPLETIONS_PER_LIST:
                continue
            if best is None or n < best[0] or (n == best[0] and list_id < best[1]):
                best = (n, list_id)
        return best[1] if best else None

    def stale_pending(self, now: float, ttl_s: float) -> list[tuple[str, str]]:
        return [
            (worker, held.list_id)
            for worker, held in self.pending.items()
            if now - held.assigned_ts > ttl_s
        ]

    def snapshot(self) -> dict:
        """Full state as JSON-safe data, used to prove replay equality."""
        return {
            "n_events": self.n_events,
            "qual": {w: dict(self.qual[w]) for w in sorted(self.qual)},
            "pending": {
                w: {
                    "list_id": p.list_id,
                    "assigned_ts": p.assigned_ts,
                    "answered": sorted(p.answered),
                }
                for w, p in sorted(self.pending.items())
            },
            "completed": {w: list(v) for w, v in sorted(self.completed.items())},
            "list_completed": dict(sorted(self.list_completed.items())),
            "list_pending": {l: sorted(v) for l, v in sorted(self.list_pending.items())},
            "responses": {
                item_id: [{"worker_id": w, "response": a} for w, a in self.responses[item_id]]
                for item_id in sorted(self.responses)
            },
        }

    @classmethod
    def from_log(cls, path: str | Path, lists: list[ExperimentList]) -> "Ledger":
        ledger = cls(lists)
        for event in EventLog.replay(path):
            ledger.apply(event)
        return ledger


# ---------------------------------------------------------------- server

class ExperimentServer:
    """Thread-safe facade over the log and ledger."""

    def __init__(
        self,
        items: list[DatasetItem],
        lists: list[ExperimentList],
        qual_items: list[dict],
        log_path: str | Path,
        fsync: bool = True,
        pending_ttl_s: float = DEFAULT_PENDING_TTL_S,
        clock=time.time,
    ):
        self.items = {item.id: item for item in items}
        for lst in lists:
            unknown = [i for i in lst.item_ids if i not in self.items]
            if unknown:
                raise ValueError(f"{lst.list_id} references unknown item {unknown[0]!r}")
        self.lists = {lst.list_id: lst for lst in lists}
        self.qual_items = list(qual_items)
        self.qual_answers = {q["id"]: q["correct_answer"] for q in qual_items}
        self.pending_ttl_s = pending_ttl_s
        self.clock = clock
        self.ledger = Ledger.from_log(log_path, lists)
        self.log = EventLog(log_path, fsync=fsync)
        self._lock = threading.Lock()

    def close(self) -> None:
        self.log.close()

    def _commit(self, event: dict) -> None:
        # durable before visible: the ack a client sees implies the event
        # is already on disk
        self.log.append(event)
        self.ledger.apply(event)

    # -- qualification

    def qualification_form(self) -> list[dict]:
        return [
            {"id": q["id"], "premise": q["premise"], "question": q["question"]}
            for q in self.qual_items
        ]

    def grade_qualification(self, worker_id: str, answers: dict[str, str]) -> dict:
        expected = set(self.qual_answers)
        if set(answers) != expected or len(answers) != len(self.qual_items):
            raise ExperimentError(
                f"qualification needs exactly {len(self.qual_items)} answers, "
                f"one per screening item"
            )
        bad = [a for a in answers.values() if a not in ("yes", "no")]
        if bad:
            raise ExperimentError(f"answers must be 'yes' or 'no', got {bad[0]!r}")
        n_correct = sum(
            1 for item_id, ans in answers.items() if ans == self.qual_answers[item_id]
        )
        passed = n_correct >= QUAL_PASS_MIN
        with self._lock:
            self._commit(
                {
                    "type": "qual",
                    "worker_id": worker_id,
                    "n_correct": n_correct,
                    "passed": passed,
                    "ts": self.clock(),
                }
            )
        return {"worker_id": worker_id, "n_correct": n_correct, "passed": passed}

    # -- assignment

    def _expire_stale(self, now: float) -> None:
        for worker, list_id in self.ledger.stale_pending(now, self.pending_ttl_s):
            self._commit({"type": "expire", "worker_id": worker, "list_id": list_id, "ts": now})

    def start_session(self, worker_id: str) -> dict:
        """Assign the least-served list, or resume a pending assignment."""
        with self._lock:
            if not self.ledger.is_qualified(worker_id):
                raise ExperimentError("worker has not passed qualification", status=403)
            now = self.clock()
            self._expire_stale(now)
            held = self.ledger.pending.get(worker_id)
            if held is None:
                list_id = self.ledger.pick_list(worker_id)
                if list_id is None:
                    return {"worker_id": worker_id, "list_id": None, "items": []}
                self._commit(
                    {"type": "assign", "worker_id": worker_id, "list_id": list_id, "ts": now}
                )
                # the fold carries answers over from an expired hold on the
                # same list, so read back what the assignment counts as done
                answered = self.ledger.pending[worker_id].answered
            else:
                list_id, answered = held.list_id, held.answered
            payload = [
                {
                    "id": item_id,
                    "premise": self.items[item_id].premise,
                    "question": self.items[item_id].question,
                }
                for item_id in self.lists[list_id].item_ids
            ]
            return {
                "worker_id": worker_id,
                "list_id": list_id,
                "items": payload,
                "answered_item_ids": sorted(answered),
            }

    # -- responses

    def record_response(
        self,
        worker_id: str,
        item_id: str,
        response: str,
        rt_premise_ms: int | None = None,
        rt_question_ms: int | None = None,
    ) -> dict:
        if response not in ("yes", "no"):
            raise ExperimentError(f"response must be 'yes' or 'no', got {response!r}")
        if item_id not in self.items:
            raise ExperimentError(f"unknown item {item_id!r}", status=404)
        for name, rt in (("rt_premise_ms", rt_premise_ms), ("rt_question_ms", rt_question_ms)):
            if rt is not None and rt < 0:
                raise ExperimentError(f"{name} must be nonnegative, got {rt}")
        with self._lock:
            if (worker_id, item_id) in self.ledger.seen_pairs:
                # retries after a lost ack land here; nothing new to store
                return {"stored": False, "duplicate": True, "list_complete": False}
            held = self.ledger.pending.get(worker_id)
            if held is None:
                raise ExperimentError("worker has no active list", status=409)
            if item_id not in self.ledger.list_items[held.list_id]:
                raise ExperimentError(
                    f"item {item_id!r} is not in the worker's assigned list", status=409
                )
            list_id = held.list_id
            self._commit(
                {
                    "type": "response",
                    "worker_id": worker_id,
                    "item_id": item_id,
                    "list_id": list_id,
                    "response": response,
                    "rt_premise_ms": rt_premise_ms,
                    "rt_question_ms": rt_question_ms,
                    "ts": self.clock(),
                }
            )
            complete = worker_id not in self.ledger.pending
            return {"stored": True, "duplicate": False, "list_complete": complete}

    # -- reporting

    def progress(self) -> dict:
        with self._lock:
            item_counts = {i: len(v) for i, v in sorted(self.ledger.responses.items())}
            target = COMPLETIONS_PER_LIST * len(self.items)
            capped = sum(min(n, COMPLETIONS_PER_LIST) for n in item_counts.values())
            return {
                "responses": sum(item_counts.values()),
                "items_total": len(self.items),
                "item_counts": item_counts,
                "list_served": {l: self.ledger.served(l) for l in self.ledger.list_order},
                "completion": capped / target if target else 0.0,
                "lists_completed": sum(
                    1
                    for n in self.ledger.list_completed.values()
                    if n >= COMPLETIONS_PER_LIST
                ),
                "lists_total": len(self.lists),
                "workers_qualified": sum(
                    1 for q in self.ledger.qual.values() if q["passed"]
                ),
                "workers_active": len(self.ledger.pending),
            }

    def ledger_snapshot(self) -> dict:
        with self._lock:
            return self.ledger.snapshot()


# ------------------------------------------------------------------- api

def create_app(server: ExperimentServer, ui_dir: str | Path | None = None):
    from fastapi import FastAPI, HTTPException
    from fastapi.staticfiles import StaticFiles
    from pydantic import BaseModel

    class QualSubmission(BaseModel):
        worker_id: str
        answers: dict[str, str]

    class SessionRequest(BaseModel):
        worker_id: str

    class ResponseSubmission(BaseModel):
        worker_id: str
        item_id: str
        response: str
        rt_premise_ms: int | None = None
        rt_question_ms: int | None = None

    app = FastAPI(title="gelp annotation server")

    def guard(fn, *args):
        try:
            return fn(*args)
        except ExperimentError as exc:
            raise HTTPException(status_code=exc.status, detail=str(exc)) from exc

    @app.get("/api/qualification")
    def get_qualification():
        return {"items": server.qualification_form()}

    @app.post("/api/qualification")
    def post_qualification(body: QualSubmission):
        return guard(server.grade_qualification, body.worker_id, body.answers)

    @app.post("/api/session")
    def post_session(body: SessionRequest):
        return guard(server.start_session, body.worker_id)

    @app.post("/api/response")
    def post_response(body: ResponseSubmission):
        return guard(
            server.record_response,
            body.worker_id,
            body.item_id,
            body.response,
            body.rt_premise_ms,
            body.rt_question_ms,
        )

    @app.get("/api/progress")
    def get_progress():
        return server.progress()

    @app.get("/api/ledger")
    def get_ledger():
        return server.ledger_snapshot()

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(server: ExperimentServer, host: str = "127.0.0.1", port: int = 8000, ui_dir=None):
    import uvicorn

    uvicorn.run(create_app(server, ui_dir=ui_dir), host=host, port=port, log_level="warning")
