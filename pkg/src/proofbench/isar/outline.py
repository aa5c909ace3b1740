"""Outline parsing: group a token stream into toplevel commands.

The outline is deliberately shallow. A command token opens a new outline
entry; everything up to the next command token belongs to its argument list.
Formulas stay opaque (quoted strings and cartouches are single argument
tokens), so the outline never needs to understand the inner syntax.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..spans import SourceSpan
from .diagnostics import Diagnostic, Layer, Severity, outer_message
from .tokens import CARTOUCHE_CLOSE, Token, TokenKind


@dataclass(frozen=True)
class CommandOutline:
    """One command plus its arguments, spanning up to the next command."""

    name: str
    span: SourceSpan
    arguments: tuple[Token, ...]


_SKIP = (TokenKind.WHITESPACE, TokenKind.COMMENT)


def outline(
    tokens: list[Token], locale: str = "en"
) -> tuple[list[CommandOutline], list[Diagnostic]]:
    """Partition tokens into ordered, disjoint command outlines.

    Returns diagnostics (never raises) for material before the first command
    and for unterminated strings, cartouches, and comments.
    """
    diagnostics: list[Diagnostic] = []
    for token in tokens:
        code = _unterminated_code(token)
        if code is not None:
            diagnostics.append(
                Diagnostic(Severity.ERROR, token.span, code, outer_message(code, locale), Layer.OUTER_SYNTAX)
            )

    outlines: list[CommandOutline] = []
    first_command_idx = next(
        (i for i, t in enumerate(tokens) if t.kind is TokenKind.COMMAND), None
    )

    leading = [
        t for t in tokens[: first_command_idx if first_command_idx is not None else len(tokens)]
        if t.kind not in _SKIP
    ]
    if leading:
        end = (
            tokens[first_command_idx].span.start
            if first_command_idx is not None
            else leading[-1].span.end
        )
        diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                SourceSpan(leading[0].span.start, end),
                "leading-garbage",
                outer_message("leading-garbage", locale),
                Layer.OUTER_SYNTAX,
            )
        )

    if first_command_idx is not None:
        idx = first_command_idx
        while idx < len(tokens):
            command = tokens[idx]
            arguments: list[Token] = []
            end = command.span.end
            j = idx + 1
            while j < len(tokens) and tokens[j].kind is not TokenKind.COMMAND:
                if tokens[j].kind not in _SKIP:
                    arguments.append(tokens[j])
                    end = tokens[j].span.end
                j += 1
            outlines.append(
                CommandOutline(command.text, SourceSpan(command.span.start, end), tuple(arguments))
            )
            idx = j

    diagnostics.sort(key=lambda d: (d.span.start, d.span.end, d.code))
    return outlines, diagnostics


def _unterminated_code(token: Token) -> str | None:
    text = token.text
    if token.kind is TokenKind.QUOTED_STRING:
        # Terminated means: closing quote present and not itself escaped.
        if len(text) < 2 or not text.endswith('"') or _ends_escaped(text):
            return "unterminated-string"
    elif token.kind is TokenKind.CARTOUCHE:
        if len(text) < 2 or not text.endswith(CARTOUCHE_CLOSE) or _cartouche_open(text):
            return "unterminated-cartouche"
    elif token.kind is TokenKind.COMMENT:
        if len(text) < 4 or not text.endswith("*)") or _comment_open(text):
            return "unterminated-comment"
    return None


def _ends_escaped(text: str) -> bool:
    backslashes = 0
    for ch in reversed(text[:-1]):
        if ch == "\\":
            backslashes += 1
        else:
            break
    return backslashes % 2 == 1


def _cartouche_open(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "‹":
            depth += 1
        elif ch == "›":
            depth -= 1
    return depth != 0


def _comment_open(text: str) -> bool:
    depth = 0
    i = 0
    while i < len(text):
        if text.startswith("(*", i):
            depth += 1
            i += 2
        elif text.startswith("*)", i):
            depth -= 1
            i += 2
        else:
            i += 1
    return depth != 0
