"""Symbol table: glyphs, prover escapes, and ASCII abbreviations.

The table ships as a versioned data file (``data/symbols.tsv``), one record
per line::

    name<TAB>glyph<TAB>escape<TAB>abbreviation

The abbreviation column is optional. Blank lines and lines starting with
``#`` are ignored. Courses may extend the table but never redefine bundled
entries, so a completion result is reproducible across deployments.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable


class SymbolTableError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolEntry:
    name: str
    glyph: str
    escape: str
    abbreviation: str | None = None

    def __post_init__(self) -> None:
        if self.escape != f"\\<{self.name}>":
            raise SymbolTableError(
                f"symbol {self.name!r}: escape {self.escape!r} does not match the name"
            )


def parse_symbol_table(text: str, source: str = "<symbols>") -> list[SymbolEntry]:
    entries: list[SymbolEntry] = []
    seen_names: set[str] = set()
    seen_abbrevs: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 4):
            raise SymbolTableError(f"{source}:{lineno}: expected 3 or 4 tab-separated fields")
        name, glyph, escape = parts[0], parts[1], parts[2]
        abbreviation = parts[3] if len(parts) == 4 and parts[3] else None
        if name in seen_names:
            raise SymbolTableError(f"{source}:{lineno}: duplicate symbol name {name!r}")
        if abbreviation is not None:
            if abbreviation in seen_abbrevs:
                raise SymbolTableError(f"{source}:{lineno}: duplicate abbreviation {abbreviation!r}")
            seen_abbrevs.add(abbreviation)
        seen_names.add(name)
        entries.append(SymbolEntry(name, glyph, escape, abbreviation))
    return entries


def load_symbol_table(path: str | Path | None = None) -> list[SymbolEntry]:
    """Load a table from ``path``, or the bundled table when omitted."""
    if path is None:
        text = resources.files("proofbench.data").joinpath("symbols.tsv").read_text("utf-8")
        return parse_symbol_table(text, "data/symbols.tsv")
    path = Path(path)
    return parse_symbol_table(path.read_text("utf-8"), str(path))


def extend_symbol_table(
    base: Iterable[SymbolEntry], extra: Iterable[SymbolEntry]
) -> list[SymbolEntry]:
    """Course extension: new entries only, bundled names are immutable."""
    merged = list(base)
    names = {e.name for e in merged}
    abbrevs = {e.abbreviation for e in merged if e.abbreviation}
    for entry in extra:
        if entry.name in names:
            raise SymbolTableError(f"cannot redefine bundled symbol {entry.name!r}")
        if entry.abbreviation and entry.abbreviation in abbrevs:
            raise SymbolTableError(f"duplicate abbreviation {entry.abbreviation!r}")
        merged.append(entry)
        names.add(entry.name)
        if entry.abbreviation:
            abbrevs.add(entry.abbreviation)
    return merged


def lookup_symbol(entries: Iterable[SymbolEntry], query: str) -> list[SymbolEntry]:
    """Entries whose name, abbreviation, or glyph contains the query.

    Name matching is case-insensitive; the empty query matches everything.
    Results are ordered by name.
    """
    needle = query.lower()
    hits = [
        e
        for e in entries
        if needle in e.name.lower()
        or (e.abbreviation is not None and query in e.abbreviation)
        or query in e.glyph
    ]
    hits.sort(key=lambda e: e.name)
    return hits
