"""Line-delimited JSON wire protocol between the pool and prover servers.

Each message is one UTF-8 JSON object terminated by ``\\n``; there is no
length prefix. Commands travel client to server, replies the other way; per
connection, requests are processed strictly in order. The full grammar is
documented in ``docs/prover-protocol.md``.

Commands::

    {"command": "ping"}
    {"command": "session_start", "parent": "Pure"}
    {"command": "use_theories", "session_id": S, "theory_text": T}
    {"command": "session_stop", "session_id": S}

Replies::

    {"reply": "ok", ...}
    {"reply": "error", "message": M}
    {"reply": "note", "message": {severity, start, end, text}}
    {"reply": "finished", "status": "ok"|"failed",
     "messages": [...], "proof_states": [...]}
"""

from __future__ import annotations

import json
from typing import Any, BinaryIO

MAX_LINE_BYTES = 16 * 1024 * 1024


class ProtocolError(Exception):
    """Malformed frame or reply that violates the message grammar."""


def encode_message(message: dict[str, Any]) -> bytes:
    return json.dumps(message, ensure_ascii=False, separators=(",", ":")).encode("utf-8") + b"\n"


def decode_message(line: bytes) -> dict[str, Any]:
    if len(line) > MAX_LINE_BYTES:
        raise ProtocolError(f"frame of {len(line)} bytes exceeds limit")
    try:
        value = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"invalid frame: {exc}") from exc
    if not isinstance(value, dict):
        raise ProtocolError("frame is not a JSON object")
    return value


def read_message(stream: BinaryIO) -> dict[str, Any] | None:
    """Read one frame; None on a cleanly closed connection."""
    line = stream.readline(MAX_LINE_BYTES + 1)
    if not line:
        return None
    if not line.endswith(b"\n"):
        raise ProtocolError("frame not terminated by newline")
    return decode_message(line[:-1])


def write_message(stream: BinaryIO, message: dict[str, Any]) -> None:
    stream.write(encode_message(message))
    stream.flush()


def wire_note(severity: str, start: int, end: int, text: str) -> dict[str, Any]:
    return {"severity": severity, "start": start, "end": end, "text": text}


def wire_proof_state(position: int, text: str, subgoals: int) -> dict[str, Any]:
    return {"position": position, "text": text, "subgoals": subgoals}
