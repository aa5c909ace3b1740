"""Mock prover server speaking the pool wire protocol over TCP.

Two modes:

* ``fixture`` — responses keyed by the SHA-256 of the submitted theory
  text, loaded from a JSON file; unknown theories succeed with no
  messages. Exact, replayable end-to-end behavior.
* ``structural`` — deterministic shape checks (see ``structural.py``)
  with spans and synthetic proof states. Generative behavior for tests
  that need plausible failure positions.

``--fail-after N`` makes the server swallow every ``use_theories`` request
after the N-th without replying, simulating a hung evaluation (pings and
session commands keep working); the runtime ``muted`` flag silences the
server completely for heartbeat-failure tests.

Run standalone::

    python -m proofbench.prover.mock_server --port 8700 --mode structural
"""

from __future__ import annotations

import argparse
import hashlib
import json
import socketserver
import threading
import uuid
from pathlib import Path
from typing import Any

from .protocol import ProtocolError, read_message, write_message
from .structural import StructuralConfig, check_structure


def theory_digest(theory_text: str) -> str:
    return hashlib.sha256(theory_text.encode("utf-8")).hexdigest()


def load_fixtures(path: str | Path) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("fixtures file must map theory digests to responses")
    return data


class _Handler(socketserver.StreamRequestHandler):
    server: "MockProverServer"

    def handle(self) -> None:
        while True:
            try:
                message = read_message(self.rfile)
            except ProtocolError as exc:
                write_message(self.wfile, {"reply": "error", "message": str(exc)})
                continue
            except (ConnectionError, ValueError):
                return
            if message is None:
                return
            if self.server.muted:
                continue  # swallow silently: the chaos hook
            try:
                if not self._dispatch(message):
                    return
            except (BrokenPipeError, ConnectionError):
                return

    def _dispatch(self, message: dict[str, Any]) -> bool:
        command = message.get("command")
        if command == "ping":
            write_message(self.wfile, {"reply": "ok"})
        elif command == "session_start":
            parent = message.get("parent", "Pure")
            session_id = uuid.uuid4().hex
            self.server.register_session(session_id, parent)
            write_message(self.wfile, {"reply": "ok", "session_id": session_id})
        elif command == "session_stop":
            session_id = message.get("session_id")
            if self.server.drop_session(session_id):
                write_message(self.wfile, {"reply": "ok"})
            else:
                write_message(self.wfile, {"reply": "error", "message": "unknown session"})
        elif command == "use_theories":
            session_id = message.get("session_id")
            theory_text = message.get("theory_text")
            if not self.server.has_session(session_id):
                write_message(self.wfile, {"reply": "error", "message": "unknown session"})
                return True
            if not isinstance(theory_text, str):
                write_message(self.wfile, {"reply": "error", "message": "missing theory_text"})
                return True
            if self.server.swallow_check():
                return True  # hung evaluation: no reply for this request
            response = self.server.evaluate(theory_text)
            for note in response["messages"]:
                write_message(self.wfile, {"reply": "note", "message": note})
            write_message(
                self.wfile,
                {
                    "reply": "finished",
                    "status": response["status"],
                    "messages": response["messages"],
                    "proof_states": response["proof_states"],
                },
            )
        else:
            write_message(
                self.wfile, {"reply": "error", "message": f"unknown command {command!r}"}
            )
        return True


class MockProverServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        mode: str = "fixture",
        fixtures: dict[str, Any] | None = None,
        fail_after: int | None = None,
        structural_config: StructuralConfig | None = None,
    ):
        if mode not in ("fixture", "structural"):
            raise ValueError(f"unknown mode {mode!r}")
        super().__init__((host, port), _Handler)
        self.mode = mode
        self.fixtures = fixtures or {}
        self.fail_after = fail_after
        self.structural_config = structural_config
        self.muted = False
        self._checks = 0
        self._sessions: dict[str, str] = {}
        self._state_lock = threading.Lock()
        self._thread: threading.Thread | None = None

    # -- lifecycle ---------------------------------------------------------

    @property
    def endpoint(self) -> tuple[str, int]:
        host, port = self.server_address[:2]
        return str(host), int(port)

    def start(self) -> "MockProverServer":
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()

    # -- session registry ----------------------------------------------------

    def register_session(self, session_id: str, parent: str) -> None:
        with self._state_lock:
            self._sessions[session_id] = parent

    def drop_session(self, session_id: Any) -> bool:
        with self._state_lock:
            return self._sessions.pop(session_id, None) is not None

    def has_session(self, session_id: Any) -> bool:
        with self._state_lock:
            return session_id in self._sessions

    @property
    def active_sessions(self) -> int:
        with self._state_lock:
            return len(self._sessions)

    # -- evaluation ----------------------------------------------------------

    def swallow_check(self) -> bool:
        """True once more than ``fail_after`` checks have been submitted;
        such requests get no reply (ping and sessions keep working)."""
        with self._state_lock:
            self._checks += 1
            return self.fail_after is not None and self._checks > self.fail_after

    def evaluate(self, theory_text: str) -> dict[str, Any]:
        if self.mode == "fixture":
            canned = self.fixtures.get(theory_digest(theory_text))
            if canned is None:
                return {"status": "ok", "messages": [], "proof_states": []}
            return {
                "status": canned.get("status", "ok"),
                "messages": canned.get("messages", []),
                "proof_states": canned.get("proof_states", []),
            }
        report = check_structure(theory_text, self.structural_config)
        return {
            "status": report.status,
            "messages": [
                {"severity": m.severity, "start": m.start, "end": m.end, "text": m.text}
                for m in report.messages
            ],
            "proof_states": [
                {"position": p, "text": t, "subgoals": n} for p, t, n in report.proof_states
            ],
        }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="mock prover server")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=0)
    parser.add_argument("--mode", choices=("fixture", "structural"), default="fixture")
    parser.add_argument("--fixtures", help="JSON file mapping theory digests to responses")
    parser.add_argument("--fail-after", type=int, default=None, help="go silent after N checks")
    args = parser.parse_args(argv)

    fixtures = load_fixtures(args.fixtures) if args.fixtures else {}
    server = MockProverServer(
        host=args.host,
        port=args.port,
        mode=args.mode,
        fixtures=fixtures,
        fail_after=args.fail_after,
    )
    host, port = server.endpoint
    print(f"mock prover listening on {host}:{port} mode={args.mode}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
