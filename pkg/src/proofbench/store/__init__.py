"""Submission history, tutorial state, and user profiles."""

from .base import (
    SequenceOutOfRange,
    StoreError,
    SubmissionStore,
    UnknownStream,
    UnknownUser,
)
from .editscript import (
    Delete,
    EditOp,
    EditScriptError,
    Insert,
    Retain,
    apply_edit_script,
    compute_edit_script,
    is_noop,
    ops_from_json,
    ops_to_json,
)
from .memory import InMemoryStore
from .model import SubmissionDiff, UserProfile, utc_now_millis
from .sqlite import SqliteStore

__all__ = [
    "Delete",
    "EditOp",
    "EditScriptError",
    "InMemoryStore",
    "Insert",
    "Retain",
    "SequenceOutOfRange",
    "SqliteStore",
    "StoreError",
    "SubmissionDiff",
    "SubmissionStore",
    "UnknownStream",
    "UnknownUser",
    "UserProfile",
    "apply_edit_script",
    "compute_edit_script",
    "is_noop",
    "ops_from_json",
    "ops_to_json",
    "utc_now_millis",
]
