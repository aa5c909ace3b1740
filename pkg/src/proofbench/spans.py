"""Byte-offset spans over UTF-8 documents.

Every position in this codebase is a byte offset into the UTF-8 encoding of
a document, never a character index. Byte offsets are the single source of
truth for editors, diagnostics, and the theory span map; no Unicode
normalization is applied anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    """Half-open byte range [start, end) into a UTF-8 document."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains_offset(self, offset: int) -> bool:
        return self.start <= offset < self.end

    def overlaps(self, other: "SourceSpan") -> bool:
        return self.start < other.end and other.start < self.end

    def shifted(self, delta: int) -> "SourceSpan":
        return SourceSpan(self.start + delta, self.end + delta)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end}

    @classmethod
    def from_dict(cls, data: dict) -> "SourceSpan":
        return cls(int(data["start"]), int(data["end"]))


def byte_len(text: str) -> int:
    """Length of a string in UTF-8 bytes."""
    return len(text.encode("utf-8"))


def slice_bytes(text: str, start: int, end: int) -> str:
    """Slice a string by UTF-8 byte offsets.

    Offsets must fall on character boundaries; a boundary violation raises
    UnicodeDecodeError, which callers treat as an invalid span.
    """
    return text.encode("utf-8")[start:end].decode("utf-8")


def check_span(span: SourceSpan, document_byte_length: int) -> None:
    """Raise ValueError unless the span lies within the document."""
    if span.end > document_byte_length:
        raise ValueError(
            f"span [{span.start}, {span.end}) exceeds document length {document_byte_length}"
        )
