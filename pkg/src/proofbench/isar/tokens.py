r"""Lexer for the Isar outer syntax.

The outer syntax is the command layer of a proof document: keywords,
identifiers, rule and method references, and opaque formula material. This
lexer is lossless and total: every input character lands in exactly one
token, concatenating the token texts reproduces the input byte for byte, and
malformed constructs become ``unknown`` tokens (never exceptions). Inner
syntax (formulas) is not parsed; quoted strings and cartouches stay opaque.

Token classes, following the published Isar grammar (see
``docs/outer-syntax.md`` for the exact rules):

========================  =============================================
kind                      shape
========================  =============================================
``command``               identifier listed in ``keywords.COMMANDS``
``keyword``               identifier listed in ``keywords.MINOR_KEYWORDS``
``identifier``            letter (letter | digit | ``_`` | ``'``)*
``long-identifier``       identifier (``.`` identifier)+
``symbol-identifier``     run of symbolic characters, or ``\<name>``
``variable``              ``?`` identifier [``.`` nat]
``type-variable``         ``'`` identifier, or ``?'`` identifier
``natural-number``        ASCII digit run
``quoted-string``         ``"..."`` with backslash escapes, may span lines
``cartouche``             ``‹...›`` with balanced nesting
``comment``               ``(* ... *)`` with balanced nesting
``whitespace``            spaces, tabs, newlines
``punctuation``           one of ``( ) [ ] { } , ; :`` and ``::``
``unknown``               anything else (lossless catch-all)
========================  =============================================

Spans are byte offsets into the UTF-8 encoding of the document.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum

from ..spans import SourceSpan
from .keywords import COMMANDS, MINOR_KEYWORDS


class TokenKind(str, Enum):
    KEYWORD = "keyword"
    COMMAND = "command"
    IDENTIFIER = "identifier"
    LONG_IDENTIFIER = "long-identifier"
    SYMBOL_IDENTIFIER = "symbol-identifier"
    VARIABLE = "variable"
    TYPE_VARIABLE = "type-variable"
    NATURAL_NUMBER = "natural-number"
    QUOTED_STRING = "quoted-string"
    CARTOUCHE = "cartouche"
    COMMENT = "comment"
    WHITESPACE = "whitespace"
    PUNCTUATION = "punctuation"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "text": self.text, "span": self.span.to_dict()}


CARTOUCHE_OPEN = "‹"  # ‹
CARTOUCHE_CLOSE = "›"  # ›

_WHITESPACE = " \t\r\n"
_PUNCT = "()[]{},;:"
# ASCII symbolic characters that form sym_ident runs. Backslash joins runs
# too (/\ is one token) unless it opens a \<name> escape.
_SYM_ASCII = "!#$%&*+-/<=>?@^_|~`.\\"


def _is_letter(ch: str) -> bool:
    return ch.isalpha()


def _is_ident_body(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit() or ch in "_'"


def _is_sym(ch: str) -> bool:
    if ch in _SYM_ASCII:
        return True
    if ord(ch) < 128 or ch in (CARTOUCHE_OPEN, CARTOUCHE_CLOSE):
        return False
    # Non-ASCII math and punctuation glyphs (⟹, ∧, …) count as symbolic.
    return unicodedata.category(ch)[0] in ("S", "P")


def _scan_comment(text: str, i: int) -> int:
    # i points at the opening "(*"; nesting is balanced, EOF truncates.
    n = len(text)
    i += 2
    depth = 1
    while i < n and depth:
        if text.startswith("(*", i):
            depth += 1
            i += 2
        elif text.startswith("*)", i):
            depth -= 1
            i += 2
        else:
            i += 1
    return i


def _scan_string(text: str, i: int) -> int:
    n = len(text)
    i += 1
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
        elif ch == '"':
            return i + 1
        else:
            i += 1
    return min(i, n)


def _scan_cartouche(text: str, i: int) -> int:
    n = len(text)
    i += 1
    depth = 1
    while i < n and depth:
        ch = text[i]
        if ch == CARTOUCHE_OPEN:
            depth += 1
        elif ch == CARTOUCHE_CLOSE:
            depth -= 1
        i += 1
    return i


def _scan_symbol_escape(text: str, i: int) -> int | None:
    # \<name> or \<^name>; returns end offset or None when malformed.
    n = len(text)
    j = i + 2
    if j < n and text[j] == "^":
        j += 1
    start_name = j
    while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] in "_'")):
        j += 1
    if j == start_name or j >= n or text[j] != ">":
        return None
    return j + 1


def _scan_ident(text: str, i: int) -> int:
    n = len(text)
    i += 1
    while i < n and _is_ident_body(text[i]):
        i += 1
    return i


def tokenize(document: str) -> list[Token]:
    """Lex a document into a lossless token stream.

    Total function: never raises on malformed input. Unrecognized character
    runs become ``unknown`` tokens; unterminated strings, cartouches, and
    comments extend to end of input (``outline`` reports them).
    """
    raw: list[tuple[TokenKind, str]] = []
    n = len(document)
    i = 0
    while i < n:
        start = i
        ch = document[i]
        if ch in _WHITESPACE:
            while i < n and document[i] in _WHITESPACE:
                i += 1
            raw.append((TokenKind.WHITESPACE, document[start:i]))
        elif ch == "(" and document.startswith("(*", i):
            i = _scan_comment(document, i)
            raw.append((TokenKind.COMMENT, document[start:i]))
        elif ch == '"':
            i = _scan_string(document, i)
            raw.append((TokenKind.QUOTED_STRING, document[start:i]))
        elif ch == CARTOUCHE_OPEN:
            i = _scan_cartouche(document, i)
            raw.append((TokenKind.CARTOUCHE, document[start:i]))
        elif ch == "\\" and document.startswith("\\<", i) and _scan_symbol_escape(document, i) is not None:
            end = _scan_symbol_escape(document, i)
            raw.append((TokenKind.SYMBOL_IDENTIFIER, document[start:end]))
            i = end
        elif ch == "?" and i + 1 < n and (_is_letter(document[i + 1]) or document[i + 1] == "'"):
            i += 1
            kind = TokenKind.VARIABLE
            if document[i] == "'":
                kind = TokenKind.TYPE_VARIABLE
                i += 1
                if i >= n or not _is_letter(document[i]):
                    # lone "?'" is not a variable; re-lex as symbols
                    i = start
                    raw.append(_sym_run(document, i))
                    i += len(raw[-1][1])
                    continue
            i = _scan_ident(document, i)
            if kind is TokenKind.VARIABLE and document.startswith(".", i):
                j = i + 1
                while j < n and document[j].isascii() and document[j].isdigit():
                    j += 1
                if j > i + 1:
                    i = j
            raw.append((kind, document[start:i]))
        elif ch == "'" and i + 1 < n and _is_letter(document[i + 1]):
            i = _scan_ident(document, i + 1)
            raw.append((TokenKind.TYPE_VARIABLE, document[start:i]))
        elif ch.isascii() and ch.isdigit():
            while i < n and document[i].isascii() and document[i].isdigit():
                i += 1
            raw.append((TokenKind.NATURAL_NUMBER, document[start:i]))
        elif _is_letter(ch):
            i = _scan_ident(document, i)
            long_form = False
            while (
                i + 1 < n
                and document[i] == "."
                and _is_letter(document[i + 1])
            ):
                long_form = True
                i = _scan_ident(document, i + 1)
            text = document[start:i]
            if long_form:
                raw.append((TokenKind.LONG_IDENTIFIER, text))
            elif text in COMMANDS:
                raw.append((TokenKind.COMMAND, text))
            elif text in MINOR_KEYWORDS:
                raw.append((TokenKind.KEYWORD, text))
            else:
                raw.append((TokenKind.IDENTIFIER, text))
        elif document.startswith("::", i):
            raw.append((TokenKind.PUNCTUATION, "::"))
            i += 2
        elif ch in _PUNCT:
            raw.append((TokenKind.PUNCTUATION, ch))
            i += 1
        elif _is_sym(ch):
            raw.append(_sym_run(document, i))
            i += len(raw[-1][1])
        else:
            raw.append((TokenKind.UNKNOWN, ch))
            i += 1

    return _assemble(raw)


def _sym_run(document: str, i: int) -> tuple[TokenKind, str]:
    n = len(document)
    start = i
    while i < n and _is_sym(document[i]):
        # a backslash opening a well-formed \<name> escape ends the run;
        # the escape becomes its own symbol-identifier token
        if (
            document[i] == "\\"
            and i > start
            and document.startswith("\\<", i)
            and _scan_symbol_escape(document, i) is not None
        ):
            break
        i += 1
    return (TokenKind.SYMBOL_IDENTIFIER, document[start:i])


def _assemble(raw: list[tuple[TokenKind, str]]) -> list[Token]:
    # Merge adjacent unknown fragments and attach byte spans.
    tokens: list[Token] = []
    offset = 0
    pending_unknown: str = ""
    for kind, text in raw:
        if kind is TokenKind.UNKNOWN:
            pending_unknown += text
            continue
        if pending_unknown:
            blen = len(pending_unknown.encode("utf-8"))
            tokens.append(
                Token(TokenKind.UNKNOWN, pending_unknown, SourceSpan(offset, offset + blen))
            )
            offset += blen
            pending_unknown = ""
        blen = len(text.encode("utf-8"))
        tokens.append(Token(kind, text, SourceSpan(offset, offset + blen)))
        offset += blen
    if pending_unknown:
        blen = len(pending_unknown.encode("utf-8"))
        tokens.append(
            Token(TokenKind.UNKNOWN, pending_unknown, SourceSpan(offset, offset + blen))
        )
    return tokens
