"""Stored records: user profiles and submission diffs."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .editscript import EditOp, ops_from_json, ops_to_json


def utc_now_millis() -> str:
    """Server-assigned UTC timestamp with millisecond precision."""
    now = datetime.now(timezone.utc)
    return now.strftime("%Y-%m-%dT%H:%M:%S.") + f"{now.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class UserProfile:
    """The complete identity record; nothing else is stored about a person."""

    user_id: str
    username: str
    issuer: str
    is_admin: bool
    created_at: str


@dataclass(frozen=True)
class SubmissionDiff:
    user_id: str
    course_id: str
    tutorial_id: str
    block_id: str
    seq: int  # dense per (user, tutorial, block), starting at 1
    ts: str  # UTC, millisecond precision
    ops: tuple[EditOp, ...]

    def to_export_record(self) -> dict:
        return {
            "user_id": self.user_id,
            "course_id": self.course_id,
            "tutorial_id": self.tutorial_id,
            "block_id": self.block_id,
            "seq": self.seq,
            "ts": self.ts,
            "ops": ops_to_json(self.ops),
        }

    @classmethod
    def from_export_record(cls, data: dict) -> "SubmissionDiff":
        return cls(
            user_id=data["user_id"],
            course_id=data["course_id"],
            tutorial_id=data["tutorial_id"],
            block_id=data["block_id"],
            seq=int(data["seq"]),
            ts=data["ts"],
            ops=tuple(ops_from_json(data["ops"])),
        )
