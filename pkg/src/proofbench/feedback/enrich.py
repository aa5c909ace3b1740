"""Turn raw prover messages into learner-facing feedback.

The raw prover text is never altered, only supplemented: each feedback item
labels it as prover output and may add hints from the first matching hint
rule (catalog order decides conflicts). Positions are mapped back to the
originating block; messages landing in hidden material become tutorial-level
notices so internal code stays invisible without failures disappearing.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..isar import outline, tokenize
from ..spans import SourceSpan
from ..tutorial import AssembledTheory, map_span
from ..isar.restrictions import SyntaxProfile
from ..prover.pool import ProverResult
from .catalog import HintRule, RuleEntry


@dataclass(frozen=True)
class FeedbackItem:
    severity: str  # error | warning | information
    origin_kind: str  # "block" | "tutorial"
    block_id: str | None
    local_span: SourceSpan | None
    raw_text: str  # prover output, verbatim
    hints: tuple[str, ...]
    kind: str  # outer-syntax | restriction | prover

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "origin_kind": self.origin_kind,
            "block_id": self.block_id,
            "local_span": self.local_span.to_dict() if self.local_span else None,
            "raw_text": self.raw_text,
            "hints": list(self.hints),
            "kind": self.kind,
            "source_label": "prover output" if self.kind == "prover" else "linter",
        }


def enrich(
    result: ProverResult,
    assembled: AssembledTheory,
    hint_catalog: list[HintRule],
    locale: str = "en",
) -> list[FeedbackItem]:
    """One feedback item per prover message, hint-enriched and block-mapped."""
    outlines, _ = outline(tokenize(assembled.text))
    items: list[FeedbackItem] = []
    for message in result.messages:
        command = _command_at(outlines, message.span.start)
        hints: tuple[str, ...] = ()
        for rule in hint_catalog:
            if rule.matches(message.text, message.severity, command):
                hints = rule.localized(locale)
                break
        origin = map_span(assembled, message.span)
        if origin.hidden:
            items.append(
                FeedbackItem(message.severity, "tutorial", None, None, message.text, hints, "prover")
            )
        else:
            items.append(
                FeedbackItem(
                    message.severity,
                    "block",
                    origin.block_id,
                    origin.local_span,
                    message.text,
                    hints,
                    "prover",
                )
            )
    return items


def _command_at(outlines, offset: int) -> str | None:
    for entry in outlines:
        if entry.span.start <= offset < entry.span.end:
            return entry.name
    return None


def list_rules(
    catalog: list[RuleEntry], profile: SyntaxProfile, category: str | None = None
) -> list[RuleEntry]:
    """Catalog filtered by profile and optional operator tag, ordered by
    category then display name."""
    entries = [
        e
        for e in catalog
        if e.display_name not in profile.forbidden_rules
        and e.prover_name not in profile.forbidden_rules
        and (category is None or e.category == category)
    ]
    entries.sort(key=lambda e: (e.category, e.display_name))
    return entries


def search_rules(catalog: list[RuleEntry], query: str) -> list[RuleEntry]:
    """Case-insensitive substring search over names and schema text."""
    needle = query.lower()
    hits = [
        e
        for e in catalog
        if needle in e.display_name.lower()
        or needle in e.prover_name.lower()
        or needle in e.schema.lower()
    ]
    hits.sort(key=lambda e: (e.category, e.display_name))
    return hits
