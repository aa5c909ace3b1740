"""Edit scripts and both store backends, including the full-text oracle.

The harness keeps every submitted text verbatim (the oracle) and asserts
that reconstruction from diffs alone reproduces it byte for byte.
"""

from __future__ import annotations

import random
import string

import pytest

from proofbench.store import (
    Delete,
    InMemoryStore,
    Insert,
    Retain,
    SequenceOutOfRange,
    SqliteStore,
    UnknownStream,
    UnknownUser,
    UserProfile,
    apply_edit_script,
    compute_edit_script,
    ops_from_json,
    ops_to_json,
)


def profile(user_id: str = "u1") -> UserProfile:
    return UserProfile(user_id, f"{user_id}-name", "https://issuer.test", False, "2026-01-01T00:00:00.000Z")


@pytest.fixture(params=["memory", "sqlite"])
def store(request, tmp_path):
    if request.param == "memory":
        return InMemoryStore()
    return SqliteStore(tmp_path / "store.db")


# -- edit scripts ---------------------------------------------------------------


def test_simple_scripts():
    assert compute_edit_script("", "abc") == [Insert("abc")]
    assert compute_edit_script("abc", "") == [Delete(3)]
    assert compute_edit_script("abc", "abc") == [Retain(3)]


def test_word_change_round_trip():
    old = 'lemma a: "A ∧ B" by auto'
    new = 'lemma a: "A ∧ B" by assumption'
    ops = compute_edit_script(old, new)
    assert apply_edit_script(old, ops) == new


def test_apply_rejects_scripts_that_do_not_fit():
    with pytest.raises(Exception):
        apply_edit_script("ab", [Retain(5)])
    with pytest.raises(Exception):
        apply_edit_script("abcd", [Retain(2)])


def test_ops_json_round_trip():
    ops = [Retain(2), Delete(1), Insert("αβ")]
    assert ops_from_json(ops_to_json(ops)) == ops


def test_random_edit_scripts_round_trip():
    rng = random.Random(4242)
    alphabet = string.ascii_letters + " ∧∨¬⟹\n"
    for _ in range(300):
        old = "".join(rng.choices(alphabet, k=rng.randrange(0, 80)))
        new = "".join(rng.choices(alphabet, k=rng.randrange(0, 80)))
        assert apply_edit_script(old, compute_edit_script(old, new)) == new


# -- stores ---------------------------------------------------------------------


def test_first_submission_is_insert_from_empty(store):
    store.put_profile(profile())
    diff = store.record_submission("u1", "c", "t", "b", 'lemma l: "A"')
    assert diff.seq == 1
    assert diff.ops == (Insert('lemma l: "A"'),)


def test_identical_resubmission_is_skipped(store):
    store.put_profile(profile())
    store.record_submission("u1", "c", "t", "b", "text")
    assert store.record_submission("u1", "c", "t", "b", "text") is None
    assert store.latest_seq("u1", "t", "b") == 1


def test_noop_recording_can_be_enabled():
    store = InMemoryStore(record_noops=True)
    store.put_profile(profile())
    store.record_submission("u1", "c", "t", "b", "text")
    diff = store.record_submission("u1", "c", "t", "b", "text")
    assert diff is not None and diff.seq == 2


def test_sequences_are_dense_per_stream(store):
    store.put_profile(profile())
    for i in range(5):
        store.record_submission("u1", "c", "t", "b", f"text {i}")
    stream = store._stream("u1", "t", "b")
    assert [d.seq for d in stream] == [1, 2, 3, 4, 5]


def test_reconstruct_prefixes(store):
    store.put_profile(profile())
    texts = ["", "a", "ab", "abc with more", "abX with more!"]
    for text in texts[1:]:
        store.record_submission("u1", "c", "t", "b", text)
    assert store.reconstruct("u1", "t", "b", upto=0) == ""
    for k, text in enumerate(texts[1:], start=1):
        assert store.reconstruct("u1", "t", "b", upto=k) == text
    assert store.reconstruct("u1", "t", "b") == texts[-1]


def test_reconstruct_unknown_stream(store):
    with pytest.raises(UnknownStream):
        store.reconstruct("ghost", "t", "b")


def test_reconstruct_sequence_out_of_range(store):
    store.put_profile(profile())
    store.record_submission("u1", "c", "t", "b", "x")
    with pytest.raises(SequenceOutOfRange):
        store.reconstruct("u1", "t", "b", upto=5)


def test_record_requires_profile(store):
    with pytest.raises(UnknownUser):
        store.record_submission("ghost", "c", "t", "b", "x")


def test_delete_user_keeps_history(store):
    store.put_profile(profile())
    store.record_submission("u1", "c", "t", "b", "first")
    store.record_submission("u1", "c", "t", "b", "second")
    store.delete_user("u1")
    assert store.get_profile("u1") is None
    assert store.reconstruct("u1", "t", "b") == "second"
    with pytest.raises(UnknownUser):
        store.delete_user("u1")


def test_export_excludes_profile_fields_and_filters(store):
    store.put_profile(profile("u1"))
    store.put_profile(profile("u2"))
    store.record_submission("u1", "course-a", "t1", "b", "one", at="2026-01-01T10:00:00.000Z")
    store.record_submission("u2", "course-b", "t2", "b", "two", at="2026-01-02T10:00:00.000Z")
    everything = list(store.export_history())
    assert len(everything) == 2
    records = [d.to_export_record() for d in everything]
    for record in records:
        assert set(record) == {"user_id", "course_id", "tutorial_id", "block_id", "seq", "ts", "ops"}
    only_a = list(store.export_history(course_id="course-a"))
    assert [d.user_id for d in only_a] == ["u1"]
    in_window = list(store.export_history(since="2026-01-02T00:00:00.000Z"))
    assert [d.user_id for d in in_window] == ["u2"]
    assert list(store.export_history(until="2025-12-31T00:00:00.000Z")) == []


def test_states_round_trip(store):
    from proofbench.tutorial import Outcome, TutorialState

    state = TutorialState("u1", "t1", {"b": "content ∧"}, {"b": Outcome.OK})
    store.put_state(state)
    loaded = store.get_state("u1", "t1")
    assert loaded == state
    assert store.get_state("u1", "other") is None


def test_full_text_oracle_random_storm(store):
    """Diff round-trip against stored full texts, sqlite and memory."""
    rng = random.Random(99)
    store.put_profile(profile())
    alphabet = string.ascii_letters + " ∧⟹λ\n'\""
    oracle: list[str] = []
    text = ""
    for _ in range(60):
        edit = rng.choice(["append", "cut", "replace", "rewrite"])
        if edit == "append":
            text = text + "".join(rng.choices(alphabet, k=rng.randrange(1, 12)))
        elif edit == "cut" and text:
            i = rng.randrange(len(text))
            j = min(len(text), i + rng.randrange(1, 8))
            text = text[:i] + text[j:]
        elif edit == "replace" and text:
            i = rng.randrange(len(text))
            text = text[:i] + rng.choice(alphabet) + text[i + 1 :]
        else:
            text = "".join(rng.choices(alphabet, k=rng.randrange(0, 30)))
        if store.record_submission("u1", "c", "t", "b", text) is not None:
            oracle.append(text)
    assert store.latest_seq("u1", "t", "b") == len(oracle)
    for k in range(1, len(oracle) + 1):
        assert store.reconstruct("u1", "t", "b", upto=k) == oracle[k - 1]
