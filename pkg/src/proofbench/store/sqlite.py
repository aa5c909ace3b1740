"""SQLite store backend for persistent deployments."""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path
from typing import Iterator

from ..tutorial import TutorialState
from .base import SubmissionStore
from .editscript import ops_from_json, ops_to_json
from .model import SubmissionDiff, UserProfile

_SCHEMA = """
CREATE TABLE IF NOT EXISTS profiles (
    user_id TEXT PRIMARY KEY,
    username TEXT NOT NULL,
    issuer TEXT NOT NULL,
    is_admin INTEGER NOT NULL,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS states (
    user_id TEXT NOT NULL,
    tutorial_id TEXT NOT NULL,
    payload TEXT NOT NULL,
    PRIMARY KEY (user_id, tutorial_id)
);
CREATE TABLE IF NOT EXISTS diffs (
    user_id TEXT NOT NULL,
    course_id TEXT NOT NULL,
    tutorial_id TEXT NOT NULL,
    block_id TEXT NOT NULL,
    seq INTEGER NOT NULL,
    ts TEXT NOT NULL,
    ops TEXT NOT NULL,
    PRIMARY KEY (user_id, tutorial_id, block_id, seq)
);
"""


class SqliteStore(SubmissionStore):
    def __init__(self, path: str | Path, record_noops: bool = False):
        self.record_noops = record_noops
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def put_profile(self, profile: UserProfile) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO profiles VALUES (?, ?, ?, ?, ?)",
                (
                    profile.user_id,
                    profile.username,
                    profile.issuer,
                    int(profile.is_admin),
                    profile.created_at,
                ),
            )
            self._conn.commit()

    def get_profile(self, user_id: str) -> UserProfile | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT user_id, username, issuer, is_admin, created_at FROM profiles WHERE user_id = ?",
                (user_id,),
            ).fetchone()
        if row is None:
            return None
        return UserProfile(row[0], row[1], row[2], bool(row[3]), row[4])

    def list_profiles(self) -> list[UserProfile]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT user_id, username, issuer, is_admin, created_at FROM profiles"
            ).fetchall()
        return [UserProfile(r[0], r[1], r[2], bool(r[3]), r[4]) for r in rows]

    def _remove_profile(self, user_id: str) -> bool:
        with self._lock:
            cursor = self._conn.execute("DELETE FROM profiles WHERE user_id = ?", (user_id,))
            self._conn.commit()
            return cursor.rowcount > 0

    def get_state(self, user_id: str, tutorial_id: str) -> TutorialState | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT payload FROM states WHERE user_id = ? AND tutorial_id = ?",
                (user_id, tutorial_id),
            ).fetchone()
        if row is None:
            return None
        return TutorialState.from_dict(json.loads(row[0]))

    def put_state(self, state: TutorialState) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO states VALUES (?, ?, ?)",
                (state.user_id, state.tutorial_id, json.dumps(state.to_dict())),
            )
            self._conn.commit()

    def _append_diff(self, diff: SubmissionDiff) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO diffs VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    diff.user_id,
                    diff.course_id,
                    diff.tutorial_id,
                    diff.block_id,
                    diff.seq,
                    diff.ts,
                    json.dumps(ops_to_json(diff.ops), ensure_ascii=False),
                ),
            )
            self._conn.commit()

    def _stream(self, user_id: str, tutorial_id: str, block_id: str) -> list[SubmissionDiff]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT user_id, course_id, tutorial_id, block_id, seq, ts, ops FROM diffs "
                "WHERE user_id = ? AND tutorial_id = ? AND block_id = ? ORDER BY seq",
                (user_id, tutorial_id, block_id),
            ).fetchall()
        return [_row_to_diff(r) for r in rows]

    def iter_diffs(self) -> Iterator[SubmissionDiff]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT user_id, course_id, tutorial_id, block_id, seq, ts, ops FROM diffs"
            ).fetchall()
        return iter([_row_to_diff(r) for r in rows])


def _row_to_diff(row: tuple) -> SubmissionDiff:
    return SubmissionDiff(
        user_id=row[0],
        course_id=row[1],
        tutorial_id=row[2],
        block_id=row[3],
        seq=row[4],
        ts=row[5],
        ops=tuple(ops_from_json(json.loads(row[6]))),
    )
