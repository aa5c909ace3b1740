"""Autocomplete for the current token prefix at a cursor.

Three candidate sources, merged in a fixed order:

* symbols — a typed abbreviation, escape, or name prefix expands to the
  glyph (``/\\`` becomes ``∧``),
* keywords — command and minor keywords plus built-in method names,
* rules — display and prover names from the course rule catalog.

Candidates violating the active restriction profile are excluded, and an
empty prefix yields nothing (the symbol lookup panel serves the browse
case).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..spans import SourceSpan
from .keywords import BUILTIN_METHODS, COMMANDS, MINOR_KEYWORDS
from .restrictions import SyntaxProfile
from .symbols import SymbolEntry
from .tokens import Token, TokenKind, tokenize

_KIND_ORDER = {"symbol": 0, "keyword": 1, "rule": 2}


@dataclass(frozen=True)
class Completion:
    replace_span: SourceSpan
    insert: str
    kind: str  # symbol | keyword | rule
    label: str

    def to_dict(self) -> dict:
        return {
            "replace_span": self.replace_span.to_dict(),
            "insert": self.insert,
            "kind": self.kind,
            "label": self.label,
        }


def complete(
    document: str,
    cursor: int,
    profile: SyntaxProfile,
    symbols: Sequence[SymbolEntry],
    rule_names: Iterable[tuple[str, str]] = (),
) -> list[Completion]:
    """Completions for the token prefix ending at byte offset ``cursor``.

    ``rule_names`` yields (display name, prover name) pairs; the display
    name is inserted. The cursor must sit on a character boundary.
    """
    prefix_token = _token_at_cursor(document, cursor)
    if prefix_token is None:
        return []
    token, prefix = prefix_token
    if not prefix:
        return []
    replace = SourceSpan(token.span.start, cursor)

    results: list[Completion] = []
    seen: set[tuple[str, str]] = set()

    def add(kind: str, insert: str, label: str) -> None:
        key = (kind, insert)
        if key not in seen:
            seen.add(key)
            results.append(Completion(replace, insert, kind, label))

    for entry in symbols:
        if entry.abbreviation is not None and entry.abbreviation.startswith(prefix):
            add("symbol", entry.glyph, f"{entry.abbreviation} → {entry.glyph}")
        elif entry.escape.startswith(prefix) and len(prefix) >= 2:
            add("symbol", entry.glyph, f"{entry.escape} → {entry.glyph}")
        elif prefix.lower() != prefix.upper() and entry.name.lower().startswith(prefix.lower()):
            add("symbol", entry.glyph, f"{entry.name} → {entry.glyph}")

    allowed = profile.allowed_commands
    for word in sorted(COMMANDS | MINOR_KEYWORDS | BUILTIN_METHODS):
        if not word.startswith(prefix):
            continue
        if word in COMMANDS and allowed and word not in allowed:
            continue
        if word in profile.forbidden_methods:
            continue
        add("keyword", word, word)

    for display, prover in rule_names:
        if display in profile.forbidden_rules or prover in profile.forbidden_rules:
            continue
        if display.startswith(prefix):
            add("rule", display, display)
        elif prover.startswith(prefix):
            add("rule", display, f"{prover} → {display}")

    results.sort(key=lambda c: (_KIND_ORDER[c.kind], c.label))
    return results


def _token_at_cursor(document: str, cursor: int) -> tuple[Token, str] | None:
    """The non-whitespace token whose span contains or ends at the cursor,
    plus the slice of its text before the cursor."""
    data = document.encode("utf-8")
    if cursor < 0 or cursor > len(data):
        return None
    for token in tokenize(document):
        if token.kind is TokenKind.WHITESPACE:
            continue
        if token.span.start < cursor <= token.span.end:
            prefix = data[token.span.start : cursor].decode("utf-8")
            return token, prefix
    return None
