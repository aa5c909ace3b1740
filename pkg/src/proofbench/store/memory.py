"""In-memory store backend (tests and ephemeral deployments)."""

from __future__ import annotations

import threading
from typing import Iterator

from ..tutorial import TutorialState
from .base import SubmissionStore
from .model import SubmissionDiff, UserProfile


class InMemoryStore(SubmissionStore):
    def __init__(self, record_noops: bool = False):
        self.record_noops = record_noops
        self._lock = threading.RLock()
        self._profiles: dict[str, UserProfile] = {}
        self._states: dict[tuple[str, str], TutorialState] = {}
        self._streams: dict[tuple[str, str, str], list[SubmissionDiff]] = {}

    def put_profile(self, profile: UserProfile) -> None:
        with self._lock:
            self._profiles[profile.user_id] = profile

    def get_profile(self, user_id: str) -> UserProfile | None:
        with self._lock:
            return self._profiles.get(user_id)

    def list_profiles(self) -> list[UserProfile]:
        with self._lock:
            return list(self._profiles.values())

    def _remove_profile(self, user_id: str) -> bool:
        with self._lock:
            return self._profiles.pop(user_id, None) is not None

    def get_state(self, user_id: str, tutorial_id: str) -> TutorialState | None:
        with self._lock:
            return self._states.get((user_id, tutorial_id))

    def put_state(self, state: TutorialState) -> None:
        with self._lock:
            self._states[(state.user_id, state.tutorial_id)] = state

    def _append_diff(self, diff: SubmissionDiff) -> None:
        with self._lock:
            stream = self._streams.setdefault(
                (diff.user_id, diff.tutorial_id, diff.block_id), []
            )
            if diff.seq != len(stream) + 1:
                raise ValueError(f"non-dense sequence number {diff.seq}")
            stream.append(diff)

    def _stream(self, user_id: str, tutorial_id: str, block_id: str) -> list[SubmissionDiff]:
        with self._lock:
            return list(self._streams.get((user_id, tutorial_id, block_id), ()))

    def iter_diffs(self) -> Iterator[SubmissionDiff]:
        with self._lock:
            snapshot = [d for stream in self._streams.values() for d in stream]
        return iter(snapshot)
