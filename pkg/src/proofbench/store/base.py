"""Store contract shared by the in-memory and SQLite backends.

Writes to one (user, tutorial, block) stream must be serialized by the
caller (the API service pipelines per-user requests); reads may be
concurrent. Deleting a user removes only the profile row; diffs stay,
grouped by the opaque user id, which is what makes deletion anonymizing
rather than destructive.
"""

from __future__ import annotations

import abc
from typing import Iterable, Iterator

from ..tutorial import TutorialState
from .editscript import apply_edit_script, compute_edit_script, is_noop
from .model import SubmissionDiff, UserProfile, utc_now_millis


class StoreError(Exception):
    pass


class UnknownUser(StoreError):
    pass


class UnknownStream(StoreError):
    """No submissions recorded for the requested (user, tutorial, block)."""


class SequenceOutOfRange(StoreError):
    pass


class SubmissionStore(abc.ABC):
    """Profiles, tutorial states, and per-block submission history."""

    #: record a diff even when the content is unchanged
    record_noops: bool = False

    # -- profiles ---------------------------------------------------------

    @abc.abstractmethod
    def put_profile(self, profile: UserProfile) -> None: ...

    @abc.abstractmethod
    def get_profile(self, user_id: str) -> UserProfile | None: ...

    @abc.abstractmethod
    def list_profiles(self) -> list[UserProfile]: ...

    @abc.abstractmethod
    def _remove_profile(self, user_id: str) -> bool: ...

    def delete_user(self, user_id: str) -> None:
        """Anonymizing deletion: drop the profile, keep every diff."""
        if not self._remove_profile(user_id):
            raise UnknownUser(user_id)

    # -- tutorial state ---------------------------------------------------

    @abc.abstractmethod
    def get_state(self, user_id: str, tutorial_id: str) -> TutorialState | None: ...

    @abc.abstractmethod
    def put_state(self, state: TutorialState) -> None: ...

    # -- submission history -----------------------------------------------

    @abc.abstractmethod
    def _append_diff(self, diff: SubmissionDiff) -> None: ...

    @abc.abstractmethod
    def _stream(self, user_id: str, tutorial_id: str, block_id: str) -> list[SubmissionDiff]: ...

    @abc.abstractmethod
    def iter_diffs(self) -> Iterator[SubmissionDiff]: ...

    def record_submission(
        self,
        user_id: str,
        course_id: str,
        tutorial_id: str,
        block_id: str,
        content: str,
        at: str | None = None,
    ) -> SubmissionDiff | None:
        """Diff the new content against the reconstructed previous content
        and append it with the next sequence number.

        Identical content is skipped by default (returns None).
        """
        if self.get_profile(user_id) is None:
            raise UnknownUser(user_id)
        stream = self._stream(user_id, tutorial_id, block_id)
        previous = _replay(stream, len(stream))
        ops = compute_edit_script(previous, content)
        if is_noop(ops) and previous == content and not self.record_noops:
            return None
        diff = SubmissionDiff(
            user_id=user_id,
            course_id=course_id,
            tutorial_id=tutorial_id,
            block_id=block_id,
            seq=len(stream) + 1,
            ts=at if at is not None else utc_now_millis(),
            ops=tuple(ops),
        )
        self._append_diff(diff)
        return diff

    def reconstruct(
        self, user_id: str, tutorial_id: str, block_id: str, upto: int | None = None
    ) -> str:
        """Exact text after applying scripts 1..upto (default: all)."""
        stream = self._stream(user_id, tutorial_id, block_id)
        if not stream:
            raise UnknownStream(f"{user_id}/{tutorial_id}/{block_id}")
        count = len(stream) if upto is None else upto
        if count < 0 or count > len(stream):
            raise SequenceOutOfRange(f"sequence {upto} not in 0..{len(stream)}")
        return _replay(stream, count)

    def latest_seq(self, user_id: str, tutorial_id: str, block_id: str) -> int:
        return len(self._stream(user_id, tutorial_id, block_id))

    def export_history(
        self,
        course_id: str | None = None,
        tutorial_id: str | None = None,
        since: str | None = None,
        until: str | None = None,
    ) -> Iterator[SubmissionDiff]:
        """Filtered diff stream in deterministic order; never profile data.

        Timestamps compare lexicographically (ISO-8601 UTC), bounds are
        inclusive.
        """
        records = [
            d
            for d in self.iter_diffs()
            if (course_id is None or d.course_id == course_id)
            and (tutorial_id is None or d.tutorial_id == tutorial_id)
            and (since is None or d.ts >= since)
            and (until is None or d.ts <= until)
        ]
        records.sort(key=lambda d: (d.user_id, d.course_id, d.tutorial_id, d.block_id, d.seq))
        return iter(records)


def _replay(stream: Iterable[SubmissionDiff], count: int) -> str:
    text = ""
    for i, diff in enumerate(stream):
        if i >= count:
            break
        text = apply_edit_script(text, diff.ops)
    return text
