"""Supervised pool of prover-server instances.

The pool launches a bounded number of prover servers, dispatches theory
checks to the least-loaded healthy instance (ties broken by lowest id),
monitors heartbeats, restarts failed instances, and scales up or down on
request. Draining instances accept no new sessions and stop once their last
session is released.

All bookkeeping is guarded by one lock; selection plus increment in
``acquire_session`` is atomic, so concurrent acquisitions stay balanced.
Network calls happen outside the lock.
"""

from __future__ import annotations

import logging
import math
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Protocol

from ..spans import SourceSpan
from .client import ProverClient, ProverConnectionError, ProverTimeout
from .protocol import ProtocolError

logger = logging.getLogger(__name__)


class PoolError(Exception):
    code = "pool-error"


class NoHealthyInstance(PoolError):
    code = "no-healthy-instance"


class PoolSaturated(PoolError):
    code = "all-at-capacity"


class StaleSession(PoolError):
    code = "stale-session"


class ScaleRangeError(PoolError):
    code = "scale-out-of-range"


class LaunchError(PoolError):
    code = "launch-failure"


class InstanceState(str, Enum):
    STARTING = "starting"
    HEALTHY = "healthy"
    UNHEALTHY = "unhealthy"
    STOPPED = "stopped"


@dataclass
class PoolConfig:
    initial_instances: int = 2
    max_instances: int = 30
    session_cap: int = 10
    heartbeat_interval: float = 5.0
    heartbeat_failure_threshold: int = 3
    students_per_pair: int = 25
    startup_timeout: float = 5.0
    check_timeout: float = 30.0
    timeout_strikes_threshold: int = 3
    session_parent: str = "Pure"

    def __post_init__(self) -> None:
        if not (1 <= self.initial_instances <= self.max_instances):
            raise ValueError(
                f"initial_instances {self.initial_instances} not in 1..{self.max_instances}"
            )


def instances_for_roster(config: PoolConfig, roster_size: int) -> int:
    """Pairing rule: two instances per started block of ``students_per_pair``
    students, at least one pair, capped at ``max_instances``."""
    pairs = max(1, math.ceil(roster_size / config.students_per_pair))
    return min(2 * pairs, config.max_instances)


@dataclass(frozen=True)
class ProverInstance:
    """Public snapshot of one pool member."""

    id: int
    endpoint: tuple[str, int]
    state: InstanceState
    active_sessions: int
    started_at: float
    last_heartbeat: float | None
    draining: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "endpoint": f"{self.endpoint[0]}:{self.endpoint[1]}",
            "state": self.state.value,
            "active_sessions": self.active_sessions,
            "started_at": self.started_at,
            "last_heartbeat": self.last_heartbeat,
            "draining": self.draining,
        }


@dataclass(frozen=True)
class SessionHandle:
    session_id: str
    instance_id: int
    parent: str = "Pure"


@dataclass(frozen=True)
class ProverMessage:
    severity: str  # error | warning | information
    span: SourceSpan
    text: str


@dataclass(frozen=True)
class ProofStateEntry:
    position: int
    text: str
    open_subgoals: int


@dataclass(frozen=True)
class ProverResult:
    status: str  # finished-ok | finished-failed | protocol-error | timeout
    messages: tuple[ProverMessage, ...] = ()
    proof_states: tuple[ProofStateEntry, ...] = ()

    def __post_init__(self) -> None:
        if self.status == "finished-ok" and any(m.severity == "error" for m in self.messages):
            raise ValueError("finished-ok result cannot carry error messages")

    @property
    def ok(self) -> bool:
        return self.status == "finished-ok"


class LaunchedInstance(Protocol):
    endpoint: tuple[str, int]

    def stop(self) -> None: ...


class Launcher(Protocol):
    def launch(self, instance_id: int) -> LaunchedInstance: ...


@dataclass
class _Member:
    id: int
    handle: LaunchedInstance
    state: InstanceState = InstanceState.STARTING
    active: int = 0
    started_at: float = field(default_factory=time.monotonic)
    last_heartbeat: float | None = None
    consecutive_failures: int = 0
    timeout_strikes: int = 0
    draining: bool = False

    def snapshot(self) -> ProverInstance:
        return ProverInstance(
            id=self.id,
            endpoint=self.handle.endpoint,
            state=self.state,
            active_sessions=self.active,
            started_at=self.started_at,
            last_heartbeat=self.last_heartbeat,
            draining=self.draining,
        )


@dataclass
class _Session:
    client: ProverClient
    instance_id: int
    session_id: str


class Pool:
    """See module docstring. Thread-safe; share one pool per process."""

    def __init__(self, config: PoolConfig, launcher: Launcher, wait_ready: bool = True):
        self.config = config
        self.launcher = launcher
        self._lock = threading.Lock()
        self._members: dict[int, _Member] = {}
        self._sessions: dict[str, _Session] = {}
        self._next_id = 0
        self._target = config.initial_instances
        self.degraded = False
        self.acquired_total = 0
        self.released_total = 0
        self._monitor: threading.Thread | None = None
        self._monitor_stop = threading.Event()

        failures = 0
        for _ in range(config.initial_instances):
            if self._launch_member() is None:
                failures += 1
        if wait_ready:
            self.wait_ready()
        healthy = sum(1 for m in self._members.values() if m.state is InstanceState.HEALTHY)
        if failures and healthy == 0:
            raise LaunchError("no instance became healthy at startup")
        self.degraded = failures > 0

    # -- lifecycle -----------------------------------------------------------

    def _launch_member(self) -> _Member | None:
        with self._lock:
            member_id = self._next_id
            self._next_id += 1
        try:
            handle = self.launcher.launch(member_id)
        except Exception as exc:
            logger.warning("instance %d failed to launch: %s", member_id, exc)
            member = _Member(id=member_id, handle=_DeadHandle(), state=InstanceState.STOPPED)
            with self._lock:
                self._members[member_id] = member
            return None
        member = _Member(id=member_id, handle=handle)
        with self._lock:
            self._members[member_id] = member
        return member

    def wait_ready(self) -> None:
        """Block until every starting instance reports healthy or the
        startup timeout elapses (stragglers are marked stopped)."""
        deadline = time.monotonic() + self.config.startup_timeout
        while time.monotonic() < deadline:
            pending = [
                m for m in self._snapshot_members() if m.state is InstanceState.STARTING
            ]
            if not pending:
                return
            for member in pending:
                if self._ping_member(member.id):
                    self._mark_healthy(member.id)
            time.sleep(0.02)
        with self._lock:
            for member in self._members.values():
                if member.state is InstanceState.STARTING:
                    member.state = InstanceState.STOPPED
                    self.degraded = True

    def close(self) -> None:
        self.stop_monitor()
        with self._lock:
            sessions = list(self._sessions.values())
            self._sessions.clear()
            members = list(self._members.values())
        for session in sessions:
            session.client.close()
        for member in members:
            try:
                member.handle.stop()
            except Exception:
                pass
            member.state = InstanceState.STOPPED

    # -- monitoring ----------------------------------------------------------

    def start_monitor(self, interval: float | None = None) -> None:
        if self._monitor is not None:
            return
        delay = interval if interval is not None else self.config.heartbeat_interval

        def loop() -> None:
            while not self._monitor_stop.wait(delay):
                try:
                    self.health_sweep()
                except Exception:
                    logger.exception("health sweep failed")

        self._monitor = threading.Thread(target=loop, daemon=True)
        self._monitor.start()

    def stop_monitor(self) -> None:
        if self._monitor is not None:
            self._monitor_stop.set()
            self._monitor.join(timeout=2)
            self._monitor = None
            self._monitor_stop.clear()

    def _snapshot_members(self) -> list[_Member]:
        with self._lock:
            return list(self._members.values())

    def _ping_member(self, member_id: int) -> bool:
        with self._lock:
            member = self._members.get(member_id)
            if member is None or member.state is InstanceState.STOPPED:
                return False
            endpoint = member.handle.endpoint
        try:
            client = ProverClient(*endpoint, connect_timeout=1.0)
        except ProverConnectionError:
            return False
        try:
            return client.ping(timeout=1.0)
        except (ProverTimeout, ProverConnectionError, ProtocolError):
            return False
        finally:
            client.close()

    def _mark_healthy(self, member_id: int) -> None:
        with self._lock:
            member = self._members.get(member_id)
            if member is not None and member.state is not InstanceState.STOPPED:
                member.state = InstanceState.HEALTHY
                member.consecutive_failures = 0
                member.last_heartbeat = time.monotonic()

    def health_sweep(self) -> list[dict[str, Any]]:
        """Ping every live instance, demote silent ones, restart failures.

        An instance is unhealthy after ``heartbeat_failure_threshold``
        consecutive missed heartbeats. Unhealthy and crashed instances are
        relaunched (fresh endpoint, same id) while the live count stays at
        the scale target and never exceeds ``max_instances``.
        """
        report: list[dict[str, Any]] = []
        for member in self._snapshot_members():
            if member.state is InstanceState.STOPPED:
                continue
            responsive = self._ping_member(member.id)
            with self._lock:
                live = self._members.get(member.id)
                if live is None:
                    continue
                if responsive:
                    live.consecutive_failures = 0
                    live.last_heartbeat = time.monotonic()
                    if live.state in (InstanceState.STARTING, InstanceState.UNHEALTHY):
                        live.state = InstanceState.HEALTHY
                else:
                    live.consecutive_failures += 1
                    if live.consecutive_failures >= self.config.heartbeat_failure_threshold:
                        live.state = InstanceState.UNHEALTHY
                report.append(
                    {"id": live.id, "responsive": responsive, "state": live.state.value}
                )

        self._restart_failed()
        return report

    def _restart_failed(self) -> None:
        with self._lock:
            live_count = sum(
                1
                for m in self._members.values()
                if m.state in (InstanceState.STARTING, InstanceState.HEALTHY)
                and not m.draining
            )
            budget = min(self._target, self.config.max_instances) - live_count
            candidates = [
                m
                for m in self._members.values()
                if m.state is InstanceState.UNHEALTHY and not m.draining
            ]
        for member in candidates:
            if budget <= 0:
                break
            self._relaunch(member.id)
            budget -= 1

    def _relaunch(self, member_id: int) -> None:
        with self._lock:
            member = self._members.get(member_id)
            if member is None:
                return
            old_handle = member.handle
            dead_sessions = [
                s for s in self._sessions.values() if s.instance_id == member_id
            ]
            for session in dead_sessions:
                del self._sessions[session.session_id]
                self.released_total += 1
        for session in dead_sessions:
            session.client.close()
        try:
            old_handle.stop()
        except Exception:
            pass
        try:
            new_handle = self.launcher.launch(member_id)
        except Exception as exc:
            logger.warning("relaunch of instance %d failed: %s", member_id, exc)
            with self._lock:
                member.handle = _DeadHandle()
                member.state = InstanceState.STOPPED
                member.active = 0
            return
        with self._lock:
            member.handle = new_handle
            member.state = InstanceState.STARTING
            member.active = 0
            member.consecutive_failures = 0
            member.timeout_strikes = 0
            member.started_at = time.monotonic()
        if self._ping_member(member_id):
            self._mark_healthy(member_id)

    # -- sessions --------------------------------------------------------------

    def acquire_session(self, parent: str | None = None) -> SessionHandle:
        """Open a session on the healthy instance with the fewest active
        sessions (lowest id wins ties). Raises NoHealthyInstance or
        PoolSaturated with distinct codes."""
        parent = parent if parent is not None else self.config.session_parent
        attempts = len(self._members) + 1
        for _ in range(attempts):
            with self._lock:
                usable = [
                    m
                    for m in self._members.values()
                    if m.state is InstanceState.HEALTHY and not m.draining
                ]
                if not usable:
                    raise NoHealthyInstance("no healthy prover instance available")
                open_slots = [m for m in usable if m.active < self.config.session_cap]
                if not open_slots:
                    raise PoolSaturated("every healthy instance is at its session cap")
                member = min(open_slots, key=lambda m: (m.active, m.id))
                member.active += 1
                self.acquired_total += 1
                endpoint = member.handle.endpoint
                member_id = member.id
            try:
                client = ProverClient(*endpoint)
                session_id = client.session_start(parent)
            except (ProverConnectionError, ProverTimeout, ProtocolError) as exc:
                logger.warning("session_start on instance %d failed: %s", member_id, exc)
                with self._lock:
                    live = self._members.get(member_id)
                    if live is not None:
                        live.active -= 1
                        live.state = InstanceState.UNHEALTHY
                    self.acquired_total -= 1
                continue
            with self._lock:
                self._sessions[session_id] = _Session(client, member_id, session_id)
            return SessionHandle(session_id, member_id, parent)
        raise NoHealthyInstance("no instance accepted a session")

    def release_session(self, handle: SessionHandle) -> None:
        """Idempotent: a double release is a no-op with a warning log."""
        with self._lock:
            session = self._sessions.pop(handle.session_id, None)
        if session is None:
            logger.warning("release of unknown session %s ignored", handle.session_id)
            return
        try:
            session.client.session_stop(handle.session_id, timeout=2.0)
        except (ProverTimeout, ProverConnectionError, ProtocolError):
            pass
        session.client.close()
        self._finish_release(session.instance_id)

    def _finish_release(self, instance_id: int) -> None:
        stop_handle = None
        with self._lock:
            self.released_total += 1
            member = self._members.get(instance_id)
            if member is not None:
                member.active = max(0, member.active - 1)
                if member.draining and member.active == 0:
                    member.state = InstanceState.STOPPED
                    member.draining = False
                    stop_handle = member.handle
        if stop_handle is not None:
            try:
                stop_handle.stop()
            except Exception:
                pass

    def check_theory(
        self, handle: SessionHandle, theory_text: str, timeout: float | None = None
    ) -> ProverResult:
        """Submit the theory on the handle's session.

        Timeouts tear the session down and, after
        ``timeout_strikes_threshold`` strikes, mark the instance unhealthy.
        Malformed replies yield a protocol-error result.
        """
        timeout = timeout if timeout is not None else self.config.check_timeout
        with self._lock:
            session = self._sessions.get(handle.session_id)
        if session is None:
            raise StaleSession(f"session {handle.session_id} is not live")
        try:
            reply = session.client.use_theories(handle.session_id, theory_text, timeout)
        except ProverTimeout:
            self._teardown_session(session, strike=True)
            return ProverResult(status="timeout")
        except (ProverConnectionError, ProtocolError) as exc:
            self._teardown_session(session, strike=False)
            return ProverResult(
                status="protocol-error",
                messages=(ProverMessage("error", SourceSpan(0, 0), str(exc)),),
            )
        try:
            return _result_from_wire(reply)
        except (KeyError, TypeError, ValueError) as exc:
            return ProverResult(
                status="protocol-error",
                messages=(ProverMessage("error", SourceSpan(0, 0), f"malformed reply: {exc}"),),
            )

    def _teardown_session(self, session: _Session, strike: bool) -> None:
        with self._lock:
            self._sessions.pop(session.session_id, None)
        session.client.close()
        if strike:
            with self._lock:
                member = self._members.get(session.instance_id)
                if member is not None:
                    member.timeout_strikes += 1
                    if member.timeout_strikes >= self.config.timeout_strikes_threshold:
                        member.state = InstanceState.UNHEALTHY
        self._finish_release(session.instance_id)

    # -- scaling ----------------------------------------------------------------

    def scale(self, target: int) -> None:
        """Launch or drain instances until ``target`` are live.

        Scale-down stops the highest-id idle instances immediately and
        drains busy ones; draining members take no new sessions.
        """
        if not (1 <= target <= self.config.max_instances):
            raise ScaleRangeError(f"target {target} not in 1..{self.config.max_instances}")
        with self._lock:
            self._target = target
            live = [
                m
                for m in self._members.values()
                if m.state in (InstanceState.STARTING, InstanceState.HEALTHY, InstanceState.UNHEALTHY)
                and not m.draining
            ]
            deficit = target - len(live)
            surplus = [] if deficit >= 0 else sorted(live, key=lambda m: -m.id)[: -deficit]
        to_stop: list[LaunchedInstance] = []
        if deficit > 0:
            for _ in range(deficit):
                self._launch_member()
            self.wait_ready()
        else:
            with self._lock:
                for member in surplus:
                    if member.active == 0:
                        member.state = InstanceState.STOPPED
                        to_stop.append(member.handle)
                    else:
                        member.draining = True
        for handle in to_stop:
            try:
                handle.stop()
            except Exception:
                pass

    # -- introspection ------------------------------------------------------------

    def status(self) -> list[ProverInstance]:
        with self._lock:
            return [m.snapshot() for m in sorted(self._members.values(), key=lambda m: m.id)]

    def live_instance_count(self) -> int:
        with self._lock:
            return sum(
                1
                for m in self._members.values()
                if m.state in (InstanceState.STARTING, InstanceState.HEALTHY, InstanceState.UNHEALTHY)
                and not m.draining
            )

    def total_active_sessions(self) -> int:
        with self._lock:
            return sum(m.active for m in self._members.values())


class _DeadHandle:
    """Placeholder handle for instances that never launched."""

    endpoint = ("0.0.0.0", 0)

    def stop(self) -> None:
        pass


def _result_from_wire(reply: dict[str, Any]) -> ProverResult:
    status = "finished-ok" if reply.get("status") == "ok" else "finished-failed"
    messages = tuple(
        ProverMessage(
            severity=_severity(m["severity"]),
            span=SourceSpan(int(m["start"]), int(m["end"])),
            text=str(m["text"]),
        )
        for m in reply.get("messages", [])
    )
    if status == "finished-ok" and any(m.severity == "error" for m in messages):
        status = "finished-failed"
    states = tuple(
        ProofStateEntry(int(s["position"]), str(s["text"]), int(s["subgoals"]))
        for s in reply.get("proof_states", [])
    )
    return ProverResult(status=status, messages=messages, proof_states=states)


def _severity(value: str) -> str:
    if value not in ("error", "warning", "information"):
        raise ValueError(f"unknown severity {value!r}")
    return value
