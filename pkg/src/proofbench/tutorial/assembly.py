"""Theory assembly and the span map back to blocks.

``assemble_theory`` concatenates the hidden header, the code-bearing blocks
in section order (text blocks contribute nothing), and the hidden footer,
with exactly one newline between consecutive segments. Segment texts carry
no trailing newline, so a task segment is the user's content byte for byte.

The span map covers the whole theory: content segments plus one-byte hidden
segments for the separators. ``map_span`` sends prover feedback positions
back to the originating block; anything touching hidden material becomes a
tutorial-level notice instead of leaking hidden offsets.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from ..spans import SourceSpan, byte_len, slice_bytes
from .model import Block, BlockKind, Tutorial, TutorialState, check_state_matches, new_state

SEPARATOR = "\n"

# labels for hidden segments that are not hidden blocks
HEADER = "header"
FOOTER = "footer"
SEPARATOR_LABEL = "separator"


@dataclass(frozen=True)
class Segment:
    span: SourceSpan
    block_id: str | None  # None for hidden material
    block_kind: BlockKind | None
    hidden_label: str | None = None

    @property
    def visible(self) -> bool:
        return self.block_id is not None and self.block_kind in (BlockKind.TASK, BlockKind.EXAMPLE)


@dataclass(frozen=True)
class AssembledTheory:
    text: str
    segments: tuple[Segment, ...]
    tutorial_id: str

    @property
    def byte_length(self) -> int:
        return byte_len(self.text)

    def segment_text(self, segment: Segment) -> str:
        return slice_bytes(self.text, segment.span.start, segment.span.end)


@dataclass(frozen=True)
class MappedOrigin:
    """Where a theory span landed: a visible block or hidden material."""

    kind: str  # "block" | "hidden"
    block_id: str | None = None
    local_span: SourceSpan | None = None
    multi_segment: bool = False

    @property
    def hidden(self) -> bool:
        return self.kind == "hidden"


class SpanOutOfRange(ValueError):
    pass


def assemble_theory(tutorial: Tutorial, state: TutorialState) -> AssembledTheory:
    """Rebuild the full theory from hidden parts and the user's content."""
    check_state_matches(state, tutorial)

    pieces: list[tuple[str, str | None, BlockKind | None, str | None]] = []
    pieces.append((tutorial.header.text, None, None, HEADER))
    for block in tutorial.blocks():
        if block.kind is BlockKind.TEXT:
            continue
        if block.kind is BlockKind.TASK:
            pieces.append((state.content_of(block.id), block.id, block.kind, None))
        elif block.kind is BlockKind.EXAMPLE:
            pieces.append((block.code, block.id, block.kind, None))
        else:  # hidden
            pieces.append((block.code, None, block.kind, block.id))
    pieces.append((tutorial.footer_text, None, None, FOOTER))

    segments: list[Segment] = []
    texts: list[str] = []
    offset = 0
    for index, (text, block_id, kind, hidden_label) in enumerate(pieces):
        if index > 0:
            sep_len = byte_len(SEPARATOR)
            segments.append(
                Segment(SourceSpan(offset, offset + sep_len), None, None, SEPARATOR_LABEL)
            )
            texts.append(SEPARATOR)
            offset += sep_len
        blen = byte_len(text)
        segments.append(Segment(SourceSpan(offset, offset + blen), block_id, kind, hidden_label))
        texts.append(text)
        offset += blen

    return AssembledTheory("".join(texts), tuple(segments), tutorial.id)


def map_span(assembled: AssembledTheory, span: SourceSpan) -> MappedOrigin:
    """Map a theory span to its origin.

    Zero-length spans at a segment boundary attach to the following segment
    (prover errors typically point at the start of the offending command).
    A span touching hidden material maps to a tutorial-level hidden origin;
    one straddling several visible segments is clipped to the first and
    flagged.
    """
    total = assembled.byte_length
    if span.start < 0 or span.end > total:
        raise SpanOutOfRange(f"span [{span.start}, {span.end}) outside theory of {total} bytes")

    if len(span) == 0:
        # offset == total has no owning segment; fall back to the last one
        segment = _segment_owning(assembled, min(span.start, total - 1))
        if not segment.visible:
            return MappedOrigin("hidden")
        local = min(span.start - segment.span.start, len(segment.span))
        return MappedOrigin("block", segment.block_id, SourceSpan(local, local))

    touched = [s for s in assembled.segments if s.span.overlaps(span)]
    if any(not s.visible for s in touched):
        return MappedOrigin("hidden", multi_segment=len(touched) > 1)
    first = touched[0]
    local_start = max(span.start, first.span.start) - first.span.start
    local_end = min(span.end, first.span.end) - first.span.start
    return MappedOrigin(
        "block",
        first.block_id,
        SourceSpan(local_start, local_end),
        multi_segment=len(touched) > 1,
    )


def _segment_owning(assembled: AssembledTheory, offset: int) -> Segment:
    # Zero-length segments share their start with the next segment;
    # bisect_right picks the last segment starting at or before the offset,
    # which is the one whose half-open span contains it.
    starts = [s.span.start for s in assembled.segments]
    idx = bisect_right(starts, offset) - 1
    return assembled.segments[max(idx, 0)]


def reset_progress(state: TutorialState, tutorial: Tutorial) -> TutorialState:
    """Restore every task to its initial content; idempotent."""
    check_state_matches(state, tutorial)
    return new_state(tutorial, state.user_id)


def extract_task_text(assembled: AssembledTheory, block_id: str) -> str:
    """The assembled bytes of one task segment (test oracle helper)."""
    for segment in assembled.segments:
        if segment.block_id == block_id:
            return assembled.segment_text(segment)
    raise KeyError(block_id)
