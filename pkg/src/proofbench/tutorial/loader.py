"""Tutorial file loading and authoring-time validation.

Tutorial files are TOML (see ``docs/tutorial-format.md`` for the exact
grammar): a top-level metadata table, a ``[header]`` and ``[footer]``, then
ordered ``[[section]]`` groups, each containing ordered ``[[section.block]]``
entries. The format is plain text on purpose so course material can live in
version control and be uploaded by teachers.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from ..isar import Diagnostic, SyntaxProfile, check_restrictions, outline, tokenize
from ..isar.diagnostics import Layer, Severity
from ..spans import SourceSpan
from .model import Block, BlockKind, Section, TheoryHeader, Tutorial


class TutorialFormatError(ValueError):
    """The document does not conform to the tutorial file format."""


def load_tutorial(document: str, source: str = "<tutorial>") -> Tutorial:
    """Parse and structurally validate one tutorial document.

    Raises TutorialFormatError with position information for syntax errors
    and TutorialValidationError (with the offending id) for invariant
    violations such as duplicate block ids.
    """
    try:
        data = tomllib.loads(document)
    except tomllib.TOMLDecodeError as exc:  # message carries line/column
        raise TutorialFormatError(f"{source}: {exc}") from exc

    tid = _require_str(data, "id", source)
    title = _locale_table(data.get("title"), f"{source}: title")

    header_tbl = data.get("header")
    if not isinstance(header_tbl, dict):
        raise TutorialFormatError(f"{source}: missing header")
    theory_name = _require_str(header_tbl, "theory", f"{source}: header")
    imports = header_tbl.get("imports", ["Main"])
    if not isinstance(imports, list) or not all(isinstance(i, str) for i in imports):
        raise TutorialFormatError(f"{source}: header.imports must be a list of strings")

    footer_tbl = data.get("footer")
    if not isinstance(footer_tbl, dict):
        raise TutorialFormatError(f"{source}: missing footer")
    footer_text = footer_tbl.get("text", "end")
    if not isinstance(footer_text, str):
        raise TutorialFormatError(f"{source}: footer.text must be a string")

    raw_sections = data.get("section")
    if not isinstance(raw_sections, list) or not raw_sections:
        raise TutorialFormatError(f"{source}: at least one [[section]] is required")

    sections: list[Section] = []
    for s_index, raw_section in enumerate(raw_sections):
        if not isinstance(raw_section, dict):
            raise TutorialFormatError(f"{source}: section {s_index + 1} is not a table")
        s_title = _locale_table(raw_section.get("title", {}), f"{source}: section {s_index + 1} title", required=False)
        raw_blocks = raw_section.get("block", [])
        if not isinstance(raw_blocks, list):
            raise TutorialFormatError(f"{source}: section {s_index + 1} blocks must be [[section.block]] entries")
        blocks = tuple(
            _parse_block(raw, f"{source}: section {s_index + 1}, block {b_index + 1}")
            for b_index, raw in enumerate(raw_blocks)
        )
        sections.append(Section(title=s_title, blocks=blocks))

    return Tutorial(
        id=tid,
        title=title,
        header=TheoryHeader(theory_name, tuple(imports)),
        sections=tuple(sections),
        footer_text=footer_text,
        profile_id=str(data.get("profile", "permissive")),
    )


def load_tutorial_file(path: str | Path) -> Tutorial:
    path = Path(path)
    return load_tutorial(path.read_text("utf-8"), str(path))


def _parse_block(raw: Any, where: str) -> Block:
    if not isinstance(raw, dict):
        raise TutorialFormatError(f"{where}: block is not a table")
    block_id = _require_str(raw, "id", where)
    kind_text = _require_str(raw, "kind", where)
    try:
        kind = BlockKind(kind_text)
    except ValueError:
        raise TutorialFormatError(f"{where}: unknown block kind {kind_text!r}") from None

    if kind is BlockKind.TEXT:
        content = _locale_table(raw.get("content"), f"{where}: content")
        return Block(id=block_id, kind=kind, content=content)
    if kind is BlockKind.TASK:
        initial = raw.get("initial", "")
        if not isinstance(initial, str):
            raise TutorialFormatError(f"{where}: initial must be a string")
        return Block(id=block_id, kind=kind, initial=initial)
    code = raw.get("code")
    if not isinstance(code, str):
        raise TutorialFormatError(f"{where}: {kind.value} block requires a code string")
    return Block(id=block_id, kind=kind, code=code)


def _require_str(table: Any, key: str, where: str) -> str:
    value = table.get(key) if isinstance(table, dict) else None
    if not isinstance(value, str) or not value:
        raise TutorialFormatError(f"{where}: missing {key}")
    return value


def _locale_table(raw: Any, where: str, required: bool = True) -> dict[str, str]:
    if raw is None:
        if required:
            raise TutorialFormatError(f"{where} is required")
        return {}
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise TutorialFormatError(f"{where} must map locales to strings")
    if required and not raw:
        raise TutorialFormatError(f"{where} is required")
    return dict(raw)


def validate_tutorial(tutorial: Tutorial, profile: SyntaxProfile, locale: str = "en") -> list[Diagnostic]:
    """Authoring check: restriction violations in initial task content,
    hidden code that does not outline cleanly, and duplicate ids.

    Spans are local to the offending block's code; the block id is named in
    the message.
    """
    findings: list[Diagnostic] = []
    seen: set[str] = set()
    for block in tutorial.blocks():
        if block.id in seen:
            findings.append(
                Diagnostic(
                    Severity.ERROR,
                    SourceSpan(0, 0),
                    "duplicate-id",
                    f"block id {block.id!r} is used more than once",
                    Layer.OUTER_SYNTAX,
                )
            )
        seen.add(block.id)

        if block.kind is BlockKind.TASK and block.initial:
            outlines, syntax = outline(tokenize(block.initial), locale)
            for diag in syntax + check_restrictions(outlines, profile, locale):
                findings.append(_tagged(diag, block.id))
        elif block.kind is BlockKind.HIDDEN:
            outlines, syntax = outline(tokenize(block.code), locale)
            for diag in syntax:
                findings.append(_tagged(diag, block.id))
    return findings


def _tagged(diag: Diagnostic, block_id: str) -> Diagnostic:
    return Diagnostic(
        diag.severity, diag.span, diag.code, f"block {block_id!r}: {diag.message}", diag.layer
    )


def hidden_code_is_complete(tutorial: Tutorial) -> bool:
    """True when every hidden block outlines without diagnostics."""
    for block in tutorial.blocks():
        if block.kind is BlockKind.HIDDEN:
            _, diags = outline(tokenize(block.code))
            if diags:
                return False
    return True
