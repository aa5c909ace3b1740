"""Rule and hint catalogs.

Rules carry a didactic display name next to the prover's own name (andI vs
conjI); relabeling is presentation-only, theories always contain whatever
the student typed and the wire always carries prover output verbatim. Hints
attach suggestion lists to known failure patterns; both catalogs are TOML
data files teachers can edit (``[[rule]]`` / ``[[hint]]`` entries).
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class RuleEntry:
    display_name: str
    prover_name: str
    schema: str
    category: str
    description: Mapping[str, str] = field(default_factory=dict)

    def describe(self, locale: str) -> str:
        if locale in self.description:
            return self.description[locale]
        return self.description.get("en", "")

    def to_dict(self, locale: str = "en") -> dict:
        return {
            "display_name": self.display_name,
            "prover_name": self.prover_name,
            "schema": self.schema,
            "category": self.category,
            "description": self.describe(locale),
        }


@dataclass(frozen=True)
class HintRule:
    id: str
    pattern: str  # regex over the raw message text
    severities: frozenset[str] | None  # None: any severity
    commands: frozenset[str] | None  # None: any command at the span
    hints: Mapping[str, tuple[str, ...]]

    def matches(self, message_text: str, severity: str, command: str | None) -> bool:
        if self.severities is not None and severity not in self.severities:
            return False
        if self.commands is not None and (command is None or command not in self.commands):
            return False
        return re.search(self.pattern, message_text) is not None

    def localized(self, locale: str) -> tuple[str, ...]:
        if locale in self.hints:
            return self.hints[locale]
        return self.hints.get("en", ())


def parse_rule_catalog(text: str, source: str = "<rules>") -> list[RuleEntry]:
    data = _load_toml(text, source)
    entries: list[RuleEntry] = []
    display_seen: set[str] = set()
    prover_seen: set[str] = set()
    for index, raw in enumerate(data.get("rule", []), start=1):
        where = f"{source}: rule {index}"
        entry = RuleEntry(
            display_name=_need(raw, "display", where),
            prover_name=_need(raw, "prover", where),
            schema=_need(raw, "schema", where),
            category=_need(raw, "category", where),
            description=dict(raw.get("description", {})),
        )
        if entry.display_name in display_seen:
            raise CatalogError(f"{where}: duplicate display name {entry.display_name!r}")
        if entry.prover_name in prover_seen:
            raise CatalogError(f"{where}: duplicate prover name {entry.prover_name!r}")
        display_seen.add(entry.display_name)
        prover_seen.add(entry.prover_name)
        entries.append(entry)
    return entries


def parse_hint_catalog(text: str, source: str = "<hints>") -> list[HintRule]:
    data = _load_toml(text, source)
    entries: list[HintRule] = []
    for index, raw in enumerate(data.get("hint", []), start=1):
        where = f"{source}: hint {index}"
        hints_raw = raw.get("hints", {})
        hints = {
            locale: tuple(str(h) for h in texts) for locale, texts in hints_raw.items()
        }
        if not hints.get("en"):
            raise CatalogError(f"{where}: at least one English hint is required")
        severities = raw.get("severities")
        commands = raw.get("commands")
        entries.append(
            HintRule(
                id=_need(raw, "id", where),
                pattern=_need(raw, "pattern", where),
                severities=frozenset(severities) if severities is not None else None,
                commands=frozenset(commands) if commands is not None else None,
                hints=hints,
            )
        )
    return entries


def load_rule_catalog(path: str | Path | None = None) -> list[RuleEntry]:
    if path is None:
        text = resources.files("proofbench.data").joinpath("rules.toml").read_text("utf-8")
        return parse_rule_catalog(text, "data/rules.toml")
    return parse_rule_catalog(Path(path).read_text("utf-8"), str(path))


def load_hint_catalog(path: str | Path | None = None) -> list[HintRule]:
    if path is None:
        text = resources.files("proofbench.data").joinpath("hints.toml").read_text("utf-8")
        return parse_hint_catalog(text, "data/hints.toml")
    return parse_hint_catalog(Path(path).read_text("utf-8"), str(path))


def display_to_prover(catalog: list[RuleEntry], display_name: str) -> str | None:
    for entry in catalog:
        if entry.display_name == display_name:
            return entry.prover_name
    return None


def prover_to_display(catalog: list[RuleEntry], prover_name: str) -> str | None:
    for entry in catalog:
        if entry.prover_name == prover_name:
            return entry.display_name
    return None


def _load_toml(text: str, source: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise CatalogError(f"{source}: {exc}") from exc


def _need(raw: dict, key: str, where: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str) or not value:
        raise CatalogError(f"{where}: missing {key}")
    return value
