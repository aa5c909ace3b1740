"""The check pipeline and its supporting machinery.

One check request runs through: per-block outer-syntax and restriction
checks (a blocking profile stops here), diff recording, state update,
theory assembly, prover round-trip on a leased session, feedback
enrichment, and outcome bookkeeping. Responses are delivered via the result
registry (polling) and the stream hub (push), correlated by the client's
request id.

Checks for the same user run in submission order on a serial queue;
different users proceed in parallel. Spans facing the client are always
block-local; assembled-theory offsets never leave this module.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from ..feedback import HintRule, enrich
from ..isar import SyntaxProfile, check_restrictions, outline, tokenize
from ..isar.diagnostics import Severity
from ..prover.pool import (
    NoHealthyInstance,
    Pool,
    PoolSaturated,
    ProverResult,
    SessionHandle,
    StaleSession,
)
from ..spans import SourceSpan
from ..store import SubmissionStore
from ..tutorial import (
    Course,
    Outcome,
    Tutorial,
    TutorialState,
    assemble_theory,
    map_span,
    new_state,
)
from .auth import Principal

logger = logging.getLogger(__name__)


class CheckValidationError(ValueError):
    pass


@dataclass(frozen=True)
class CheckRequest:
    course_id: str
    tutorial_id: str
    blocks: dict[str, str]
    request_id: str

    @classmethod
    def from_json(cls, data: Any) -> "CheckRequest":
        if not isinstance(data, dict):
            raise CheckValidationError("request body must be a JSON object")
        course_id = data.get("course_id")
        tutorial_id = data.get("tutorial_id")
        blocks = data.get("blocks")
        request_id = data.get("request_id")
        if not isinstance(course_id, str) or not course_id:
            raise CheckValidationError("course_id is required")
        if not isinstance(tutorial_id, str) or not tutorial_id:
            raise CheckValidationError("tutorial_id is required")
        if not isinstance(request_id, str) or not request_id:
            raise CheckValidationError("request_id is required")
        if not isinstance(blocks, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in blocks.items()
        ):
            raise CheckValidationError("blocks must map block ids to text")
        return cls(course_id, tutorial_id, dict(blocks), request_id)


class SerialKeyExecutor:
    """FIFO execution per key on a shared thread pool."""

    def __init__(self, max_workers: int = 8):
        self._pool = ThreadPoolExecutor(max_workers=max_workers)
        self._queues: dict[str, deque[Callable[[], None]]] = {}
        self._running: set[str] = set()
        self._lock = threading.Lock()

    def submit(self, key: str, job: Callable[[], None]) -> None:
        with self._lock:
            self._queues.setdefault(key, deque()).append(job)
            if key in self._running:
                return
            self._running.add(key)
        self._pool.submit(self._drain, key)

    def _drain(self, key: str) -> None:
        while True:
            with self._lock:
                pending = self._queues.get(key)
                if not pending:
                    self._running.discard(key)
                    return
                job = pending.popleft()
            try:
                job()
            except Exception:
                logger.exception("check job for %s crashed", key)

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True, cancel_futures=True)


class StreamHub:
    """Per-user fan-out queues feeding open stream connections."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._queues: dict[str, list[queue.Queue]] = {}

    def subscribe(self, user_id: str) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._queues.setdefault(user_id, []).append(q)
        return q

    def unsubscribe(self, user_id: str, q: queue.Queue) -> None:
        with self._lock:
            listeners = self._queues.get(user_id, [])
            if q in listeners:
                listeners.remove(q)
            if not listeners:
                self._queues.pop(user_id, None)

    def publish(self, user_id: str, message: dict) -> None:
        with self._lock:
            listeners = list(self._queues.get(user_id, ()))
        for q in listeners:
            q.put(message)


@dataclass
class _Lease:
    handle: SessionHandle
    last_used: float


class SessionRegistry:
    """One prover session per (user, course), leased lazily and released
    after an idle timeout."""

    def __init__(self, pool: Pool, idle_timeout: float = 600.0):
        self.pool = pool
        self.idle_timeout = idle_timeout
        self._lock = threading.Lock()
        self._leases: dict[tuple[str, str], _Lease] = {}

    def lease(self, user_id: str, course_id: str) -> SessionHandle:
        key = (user_id, course_id)
        with self._lock:
            entry = self._leases.get(key)
            if entry is not None:
                entry.last_used = time.monotonic()
                return entry.handle
        handle = self.pool.acquire_session()
        with self._lock:
            self._leases[key] = _Lease(handle, time.monotonic())
        return handle

    def invalidate(self, user_id: str, course_id: str, release: bool = False) -> None:
        with self._lock:
            entry = self._leases.pop((user_id, course_id), None)
        if entry is not None and release:
            self.pool.release_session(entry.handle)

    def reap_idle(self) -> int:
        cutoff = time.monotonic() - self.idle_timeout
        with self._lock:
            stale = [key for key, lease in self._leases.items() if lease.last_used < cutoff]
            leases = [self._leases.pop(key) for key in stale]
        for lease in leases:
            self.pool.release_session(lease.handle)
        return len(leases)

    def release_all(self) -> None:
        with self._lock:
            leases = list(self._leases.values())
            self._leases.clear()
        for lease in leases:
            self.pool.release_session(lease.handle)


class ResultRegistry:
    """Check results keyed by (user, request id)."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._results: dict[tuple[str, str], dict] = {}

    def put(self, user_id: str, request_id: str, state: str, response: dict | None = None) -> None:
        with self._lock:
            self._results[(user_id, request_id)] = {
                "request_id": request_id,
                "state": state,
                "response": response,
            }

    def get(self, user_id: str, request_id: str) -> dict | None:
        with self._lock:
            entry = self._results.get((user_id, request_id))
            return dict(entry) if entry else None


class CheckService:
    """Orchestrates parser, store, pool, and feedback per check request."""

    def __init__(
        self,
        store: SubmissionStore,
        pool: Pool,
        hint_catalog: list[HintRule],
        profiles: dict[str, SyntaxProfile],
        locale_default: str = "en",
        session_idle_timeout: float = 600.0,
        check_timeout: float = 30.0,
        max_workers: int = 8,
    ):
        self.store = store
        self.pool = pool
        self.hints = hint_catalog
        self.profiles = profiles
        self.locale_default = locale_default
        self.check_timeout = check_timeout
        self.executor = SerialKeyExecutor(max_workers=max_workers)
        self.sessions = SessionRegistry(pool, session_idle_timeout)
        self.results = ResultRegistry()
        self.hub = StreamHub()
        self._user_locks: dict[str, threading.Lock] = {}
        self._user_locks_guard = threading.Lock()

    def close(self) -> None:
        self.sessions.release_all()
        self.executor.shutdown()

    def profile_for(self, course: Course) -> SyntaxProfile:
        profile = self.profiles.get(course.profile_id)
        if profile is None:
            raise CheckValidationError(f"course profile {course.profile_id!r} is not configured")
        return profile

    def _user_lock(self, user_id: str) -> threading.Lock:
        with self._user_locks_guard:
            lock = self._user_locks.get(user_id)
            if lock is None:
                lock = self._user_locks[user_id] = threading.Lock()
            return lock

    # -- submission ----------------------------------------------------------

    def submit(
        self,
        principal: Principal,
        course: Course,
        tutorial: Tutorial,
        request: CheckRequest,
        locale: str | None = None,
    ) -> dict:
        """Validate, pre-check, persist, and enqueue one check request.

        Returns the initial result envelope ({request_id, state}).
        """
        locale = locale or self.locale_default
        task_ids = {b.id for b in tutorial.task_blocks()}
        unknown = set(request.blocks) - task_ids
        if unknown:
            raise CheckValidationError(f"not task blocks of this tutorial: {sorted(unknown)}")

        profile = self.profile_for(course)
        diagnostics: list[dict] = []
        blocked = False
        for block_id in sorted(request.blocks):
            content = request.blocks[block_id]
            outlines, syntax_diags = outline(tokenize(content), locale)
            restriction_diags = check_restrictions(outlines, profile, locale)
            for diag in syntax_diags + restriction_diags:
                diagnostics.append({"block_id": block_id, **diag.to_dict()})
            if profile.blocking and any(
                d.severity is Severity.ERROR for d in restriction_diags
            ):
                blocked = True

        user_id = principal.user_id
        if blocked:
            response = {
                "request_id": request.request_id,
                "status": "restricted",
                "feedback": [],
                "proof_states": [],
                "diagnostics": diagnostics,
                "outcomes": {},
            }
            self.results.put(user_id, request.request_id, "done", response)
            self.hub.publish(
                user_id,
                {"type": "check-result", "request_id": request.request_id, "payload": response},
            )
            return {"request_id": request.request_id, "state": "done"}

        # record diffs and update state under the user's lock so sequence
        # numbers reflect arrival order even for concurrent submissions
        with self._user_lock(user_id):
            state = self.store.get_state(user_id, tutorial.id)
            if state is None:
                state = new_state(tutorial, user_id)
            for block_id in sorted(request.blocks):
                self.store.record_submission(
                    user_id, course.id, tutorial.id, block_id, request.blocks[block_id]
                )
                state = state.with_content(block_id, request.blocks[block_id])
            self.store.put_state(state)

        self.results.put(user_id, request.request_id, "pending")
        self.executor.submit(
            user_id,
            lambda: self._run_pipeline(principal, course, tutorial, request, diagnostics, locale),
        )
        return {"request_id": request.request_id, "state": "pending"}

    # -- pipeline ---------------------------------------------------------------

    def _run_pipeline(
        self,
        principal: Principal,
        course: Course,
        tutorial: Tutorial,
        request: CheckRequest,
        diagnostics: list[dict],
        locale: str,
    ) -> None:
        user_id = principal.user_id
        try:
            response = self._execute_check(principal, course, tutorial, request, diagnostics, locale)
        except Exception as exc:  # defensive: surface, never lose, a failure
            logger.exception("check %s failed", request.request_id)
            response = {
                "request_id": request.request_id,
                "status": "error",
                "error": str(exc),
                "feedback": [],
                "proof_states": [],
                "diagnostics": diagnostics,
                "outcomes": {},
            }
        self.results.put(user_id, request.request_id, "done", response)
        self.hub.publish(
            user_id,
            {"type": "check-result", "request_id": request.request_id, "payload": response},
        )

    def _execute_check(
        self,
        principal: Principal,
        course: Course,
        tutorial: Tutorial,
        request: CheckRequest,
        diagnostics: list[dict],
        locale: str,
    ) -> dict:
        user_id = principal.user_id
        state = self.store.get_state(user_id, tutorial.id)
        assert state is not None
        assembled = assemble_theory(tutorial, state)

        self.sessions.reap_idle()
        try:
            result = self._checked_roundtrip(user_id, course.id, assembled.text)
        except (NoHealthyInstance, PoolSaturated) as exc:
            return {
                "request_id": request.request_id,
                "status": "pool-exhausted",
                "error_code": exc.code,
                "error": str(exc),
                "feedback": [],
                "proof_states": [],
                "diagnostics": diagnostics,
                "outcomes": {},
            }

        items = enrich(result, assembled, self.hints, locale)
        proof_states = []
        for entry in result.proof_states:
            origin = map_span(assembled, SourceSpan(entry.position, entry.position))
            if origin.hidden or origin.block_id is None:
                continue
            proof_states.append(
                {
                    "block_id": origin.block_id,
                    "position": origin.local_span.start if origin.local_span else 0,
                    "text": entry.text,
                    "subgoals": entry.open_subgoals,
                }
            )

        outcomes: dict[str, str] = {}
        if result.status in ("finished-ok", "finished-failed"):
            failed_blocks = {
                item.block_id
                for item in items
                if item.severity == "error" and item.block_id is not None
            }
            for block_id in request.blocks:
                if result.status == "finished-ok":
                    outcome = Outcome.OK
                elif block_id in failed_blocks:
                    outcome = Outcome.FAILED
                else:
                    continue  # failed theory, no block-local evidence
                state = state.with_outcome(block_id, outcome)
                outcomes[block_id] = outcome.value
            self.store.put_state(state)

        return {
            "request_id": request.request_id,
            "status": result.status,
            "feedback": [item.to_dict() for item in items],
            "proof_states": proof_states,
            "diagnostics": diagnostics,
            "outcomes": outcomes,
        }

    def _checked_roundtrip(self, user_id: str, course_id: str, theory_text: str) -> ProverResult:
        """Run one check on the user's leased session, re-leasing once if
        the session went stale under us."""
        for attempt in (0, 1):
            handle = self.sessions.lease(user_id, course_id)
            try:
                result = self.pool.check_theory(handle, theory_text, timeout=self.check_timeout)
            except StaleSession:
                self.sessions.invalidate(user_id, course_id)
                if attempt == 1:
                    raise NoHealthyInstance("session could not be re-established")
                continue
            if result.status in ("timeout", "protocol-error"):
                # the pool tore the session down; drop the stale lease
                self.sessions.invalidate(user_id, course_id)
            return result
        raise NoHealthyInstance("unreachable")  # pragma: no cover
