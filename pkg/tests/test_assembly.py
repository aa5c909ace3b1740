"""Theory assembly and span mapping, including the randomized properties.

The independent oracle for assembly is a naive join kept in this module:
header, code-bearing block texts in order, footer, glued with single
newlines. Random tutorials cover unicode content, empty tasks, and hidden
blocks in every position.
"""

from __future__ import annotations

import random

from proofbench.spans import SourceSpan, byte_len, slice_bytes
from proofbench.tutorial import (
    Block,
    BlockKind,
    Section,
    TheoryHeader,
    Tutorial,
    assemble_theory,
    extract_task_text,
    map_span,
    new_state,
    reset_progress,
)
from proofbench.tutorial.assembly import SpanOutOfRange

import pytest


def naive_join(tutorial: Tutorial, state) -> str:
    """Independent assembly oracle: plain string join."""
    pieces = [tutorial.header.text]
    for block in tutorial.blocks():
        if block.kind is BlockKind.TEXT:
            continue
        if block.kind is BlockKind.TASK:
            pieces.append(state.contents[block.id])
        else:
            pieces.append(block.code)
    pieces.append(tutorial.footer_text)
    return "\n".join(pieces)


def simple_tutorial() -> Tutorial:
    return Tutorial(
        id="demo",
        title={"en": "demo"},
        header=TheoryHeader("Demo"),
        sections=(
            Section(
                title={},
                blocks=(
                    Block(id="intro", kind=BlockKind.TEXT, content={"en": "hi"}),
                    Block(id="task1", kind=BlockKind.TASK, initial='lemma a: "A ∧ B"'),
                    Block(id="hidden1", kind=BlockKind.HIDDEN, code="lemmas andI = conjI"),
                    Block(id="task2", kind=BlockKind.TASK, initial='lemma b: "B"'),
                ),
            ),
        ),
    )


def test_assembly_matches_naive_join():
    tutorial = simple_tutorial()
    state = new_state(tutorial, "u")
    assembled = assemble_theory(tutorial, state)
    assert assembled.text == naive_join(tutorial, state)


def test_text_blocks_contribute_nothing():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    assert "hi" not in assembled.text


def test_task_segments_are_verbatim():
    tutorial = simple_tutorial()
    state = new_state(tutorial, "u").with_content("task1", 'lemma a: "Ä ⟶ Ä" by x')
    assembled = assemble_theory(tutorial, state)
    assert extract_task_text(assembled, "task1") == 'lemma a: "Ä ⟶ Ä" by x'
    assert extract_task_text(assembled, "task2") == 'lemma b: "B"'


def test_editing_later_task_keeps_earlier_spans():
    tutorial = simple_tutorial()
    state = new_state(tutorial, "u")
    before = assemble_theory(tutorial, state)
    after = assemble_theory(tutorial, state.with_content("task2", "changed"))
    seg_before = next(s for s in before.segments if s.block_id == "task1")
    seg_after = next(s for s in after.segments if s.block_id == "task1")
    assert seg_before.span == seg_after.span


def test_map_span_inside_task():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    segment = next(s for s in assembled.segments if s.block_id == "task1")
    origin = map_span(assembled, SourceSpan(segment.span.start + 6, segment.span.start + 7))
    assert origin.kind == "block" and origin.block_id == "task1"
    assert (origin.local_span.start, origin.local_span.end) == (6, 7)


def test_map_span_in_header_is_hidden():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    origin = map_span(assembled, SourceSpan(0, 6))
    assert origin.kind == "hidden"


def test_map_span_in_hidden_block_is_hidden():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    segment = next(s for s in assembled.segments if s.hidden_label == "hidden1")
    origin = map_span(assembled, SourceSpan(segment.span.start, segment.span.end))
    assert origin.kind == "hidden"


def test_zero_length_span_at_boundary_goes_to_following_segment():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    segment = next(s for s in assembled.segments if s.block_id == "task1")
    origin = map_span(assembled, SourceSpan(segment.span.start, segment.span.start))
    assert origin.kind == "block" and origin.block_id == "task1"
    assert origin.local_span == SourceSpan(0, 0)


def test_span_straddling_tasks_touches_hidden_separator():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    task1 = next(s for s in assembled.segments if s.block_id == "task1")
    origin = map_span(assembled, SourceSpan(task1.span.end - 1, task1.span.end + 2))
    assert origin.kind == "hidden"
    assert origin.multi_segment


def test_out_of_range_span_raises():
    tutorial = simple_tutorial()
    assembled = assemble_theory(tutorial, new_state(tutorial, "u"))
    with pytest.raises(SpanOutOfRange):
        map_span(assembled, SourceSpan(0, assembled.byte_length + 1))


def test_reset_restores_initial_content_and_is_idempotent():
    tutorial = simple_tutorial()
    state = new_state(tutorial, "u").with_content("task1", "edited")
    reset = reset_progress(state, tutorial)
    assert reset.contents["task1"] == 'lemma a: "A ∧ B"'
    assert reset_progress(reset, tutorial) == reset
    assert assemble_theory(tutorial, reset).text == assemble_theory(
        tutorial, new_state(tutorial, "u")
    ).text


# -- randomized structure -----------------------------------------------------

_WORDS = ["lemma", "by", "∧", "⟹", "x", "»", "ä", '"A"', "(*c*)", "", "0", "\n", "  "]


def random_tutorial(rng: random.Random) -> Tutorial:
    sections = []
    block_counter = 0
    for s in range(rng.randint(1, 3)):
        blocks = []
        for _ in range(rng.randint(1, 5)):
            block_counter += 1
            bid = f"b{block_counter}"
            kind = rng.choice(
                [BlockKind.TEXT, BlockKind.TASK, BlockKind.TASK, BlockKind.EXAMPLE, BlockKind.HIDDEN]
            )
            text = " ".join(rng.choices(_WORDS, k=rng.randint(0, 6)))
            if kind is BlockKind.TEXT:
                blocks.append(Block(id=bid, kind=kind, content={"en": text}))
            elif kind is BlockKind.TASK:
                blocks.append(Block(id=bid, kind=kind, initial=text))
            else:
                blocks.append(Block(id=bid, kind=kind, code=text))
        sections.append(Section(title={}, blocks=tuple(blocks)))
    return Tutorial(
        id=f"rand{rng.randrange(10**6)}",
        title={"en": "rand"},
        header=TheoryHeader("Rand", ("Main",)),
        sections=tuple(sections),
    )


def random_state(tutorial: Tutorial, rng: random.Random):
    state = new_state(tutorial, "u")
    for block in tutorial.task_blocks():
        if rng.random() < 0.7:
            state = state.with_content(
                block.id, " ".join(rng.choices(_WORDS, k=rng.randint(0, 8)))
            )
    return state


def test_random_tutorials_cover_every_offset_exactly_once():
    rng = random.Random(7)
    for _ in range(40):
        tutorial = random_tutorial(rng)
        state = random_state(tutorial, rng)
        assembled = assemble_theory(tutorial, state)
        assert assembled.text == naive_join(tutorial, state)
        # segments tile [0, len) without overlap
        offset = 0
        for segment in assembled.segments:
            assert segment.span.start == offset
            offset = segment.span.end
        assert offset == assembled.byte_length
        # task fidelity
        for block in tutorial.task_blocks():
            assert extract_task_text(assembled, block.id) == state.contents[block.id]
