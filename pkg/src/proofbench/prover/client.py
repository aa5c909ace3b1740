"""Blocking TCP client for one prover session connection.

One client per session: the connection is opened on ``session_start`` and
closed when the session stops, which preserves request/response ordering
per session without extra bookkeeping.
"""

from __future__ import annotations

import socket
from typing import Any

from .protocol import ProtocolError, encode_message, read_message


class ProverTimeout(Exception):
    pass


class ProverConnectionError(Exception):
    pass


class ProverClient:
    def __init__(self, host: str, port: int, connect_timeout: float = 5.0):
        self.host = host
        self.port = port
        try:
            self._sock = socket.create_connection((host, port), timeout=connect_timeout)
        except OSError as exc:
            raise ProverConnectionError(f"cannot connect to {host}:{port}: {exc}") from exc
        self._file = self._sock.makefile("rwb")

    def close(self) -> None:
        try:
            self._file.close()
        except OSError:
            pass
        try:
            self._sock.close()
        except OSError:
            pass

    def _send(self, message: dict[str, Any]) -> None:
        try:
            self._file.write(encode_message(message))
            self._file.flush()
        except OSError as exc:
            raise ProverConnectionError(str(exc)) from exc

    def _receive(self, timeout: float) -> dict[str, Any]:
        self._sock.settimeout(timeout)
        try:
            reply = read_message(self._file)
        except socket.timeout as exc:
            raise ProverTimeout(f"no reply from {self.host}:{self.port} within {timeout}s") from exc
        except OSError as exc:
            raise ProverConnectionError(str(exc)) from exc
        if reply is None:
            raise ProverConnectionError("connection closed by prover")
        return reply

    def ping(self, timeout: float = 2.0) -> bool:
        self._send({"command": "ping"})
        reply = self._receive(timeout)
        return reply.get("reply") == "ok"

    def session_start(self, parent: str = "Pure", timeout: float = 5.0) -> str:
        self._send({"command": "session_start", "parent": parent})
        reply = self._receive(timeout)
        if reply.get("reply") != "ok" or "session_id" not in reply:
            raise ProtocolError(f"unexpected session_start reply: {reply}")
        return str(reply["session_id"])

    def session_stop(self, session_id: str, timeout: float = 5.0) -> None:
        self._send({"command": "session_stop", "session_id": session_id})
        self._receive(timeout)

    def use_theories(self, session_id: str, theory_text: str, timeout: float) -> dict[str, Any]:
        """Submit a theory and collect replies until the terminal message.

        Returns the ``finished`` payload. Notes are folded into it by the
        server already. Raises ProverTimeout / ProtocolError.
        """
        self._send(
            {"command": "use_theories", "session_id": session_id, "theory_text": theory_text}
        )
        while True:
            reply = self._receive(timeout)
            kind = reply.get("reply")
            if kind == "note":
                continue
            if kind == "finished":
                return reply
            if kind == "error":
                raise ProtocolError(f"prover error: {reply.get('message')}")
            raise ProtocolError(f"unexpected reply {reply!r}")
