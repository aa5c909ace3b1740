"""Course-level syntax restriction profiles.

A profile forbids commands, proof methods, and rule names, and can pin each
logical operator to one permitted proof pattern. Matching is token-based and
position-aware: a name only violates the profile when it appears as a whole
identifier in a method or rule position, never inside a string literal or a
comment. That keeps enforcement predictable for students and trivially
testable against a plain token scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..spans import SourceSpan
from .diagnostics import Diagnostic, Layer, Severity
from .outline import CommandOutline
from .tokens import TokenKind

# Commands whose arguments name proof methods (by auto, apply simp, ...).
METHOD_COMMANDS = frozenset({"by", "apply"})
# Commands whose arguments cite facts or rules. Method commands qualify too:
# `by (rule conjI)` cites conjI.
RULE_COMMANDS = frozenset({"by", "apply", "using", "unfolding", "from", "with", "note", "thm", "lemmas"})

# Recognized pattern suffixes for the one-pattern-per-operator restriction:
# introduction, elimination, destruction, and their numbered variants.
_PATTERN_SUFFIXES = ("I", "E", "D", "I1", "I2", "E1", "E2", "CI", "CE")

RESTRICTION_KINDS = ("forbidden-method", "forbidden-rule", "forbidden-command", "pattern-restricted")

DEFAULT_TEMPLATES: dict[str, dict[str, str]] = {
    "forbidden-method": {
        "en": "the proof method '{name}' is not available in this course",
        "de": "die Beweismethode '{name}' ist in diesem Kurs nicht verfügbar",
    },
    "forbidden-rule": {
        "en": "the rule '{name}' is not available in this course",
        "de": "die Regel '{name}' ist in diesem Kurs nicht verfügbar",
    },
    "forbidden-command": {
        "en": "the command '{name}' is not available in this course",
        "de": "der Befehl '{name}' ist in diesem Kurs nicht verfügbar",
    },
    "pattern-restricted": {
        "en": "use '{expected}' for this operator instead of '{name}'",
        "de": "verwende für diesen Operator '{expected}' statt '{name}'",
    },
}


class ProfileError(ValueError):
    """A profile violates its own invariants."""


@dataclass(frozen=True)
class SyntaxProfile:
    """Per-course restriction rules.

    ``allowed_commands`` empty means every command is allowed. ``blocking``
    decides whether violations are errors (which stop a check request) or
    warnings; the choice is configuration, not grammar.
    """

    id: str
    allowed_commands: frozenset[str] = frozenset()
    forbidden_methods: frozenset[str] = frozenset()
    forbidden_rules: frozenset[str] = frozenset()
    pattern_restrictions: Mapping[str, str] = field(default_factory=dict)
    blocking: bool = True
    locales: tuple[str, ...] = ("en", "de")
    message_templates: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clash = self.allowed_commands & (self.forbidden_methods | self.forbidden_rules)
        if clash:
            raise ProfileError(f"profile {self.id!r}: names both allowed and forbidden: {sorted(clash)}")
        for kind in RESTRICTION_KINDS:
            for locale in self.locales:
                self.template(kind, locale)

    def template(self, kind: str, locale: str) -> str:
        custom = self.message_templates.get(kind, {})
        if locale in custom:
            return custom[locale]
        table = DEFAULT_TEMPLATES.get(kind)
        if table is None:
            raise ProfileError(f"profile {self.id!r}: unknown restriction kind {kind!r}")
        return table.get(locale, table["en"])

    @property
    def severity(self) -> Severity:
        return Severity.ERROR if self.blocking else Severity.WARNING


PERMISSIVE = SyntaxProfile(id="permissive", blocking=False)


def check_restrictions(
    outlines: list[CommandOutline], profile: SyntaxProfile, locale: str = "en"
) -> list[Diagnostic]:
    """Report one diagnostic per profile violation, ordered by span start."""
    found: list[Diagnostic] = []

    def report(kind: str, span, **names: str) -> None:
        message = profile.template(kind, locale).format(**names)
        found.append(Diagnostic(profile.severity, span, kind, message, Layer.RESTRICTION))

    for entry in outlines:
        if profile.allowed_commands and entry.name not in profile.allowed_commands:
            report("forbidden-command", _command_span(entry), name=entry.name)
        in_method_position = entry.name in METHOD_COMMANDS
        in_rule_position = entry.name in RULE_COMMANDS
        if not (in_method_position or in_rule_position):
            continue
        for token in entry.arguments:
            if token.kind not in (TokenKind.IDENTIFIER, TokenKind.LONG_IDENTIFIER):
                continue
            name = token.text
            if in_method_position and name in profile.forbidden_methods:
                report("forbidden-method", token.span, name=name)
                continue
            if in_rule_position and name in profile.forbidden_rules:
                report("forbidden-rule", token.span, name=name)
                continue
            if in_rule_position:
                restricted = _pattern_violation(name, profile.pattern_restrictions)
                if restricted is not None:
                    report("pattern-restricted", token.span, name=name, expected=restricted)

    found.sort(key=lambda d: (d.span.start, d.span.end, d.code))
    return found


def _command_span(entry: CommandOutline) -> SourceSpan:
    # The command keyword itself, not the whole argument span.
    return SourceSpan(entry.span.start, entry.span.start + len(entry.name.encode("utf-8")))


def _pattern_violation(name: str, restrictions: Mapping[str, str]) -> str | None:
    """Return the permitted pattern when ``name`` is a restricted sibling.

    Operators map to their single permitted pattern identifier. A name
    belongs to an operator's family when it is the operator prefix plus a
    recognized pattern suffix (andI, andE, ...); family members other than
    the permitted one are violations.
    """
    for operator, permitted in restrictions.items():
        if name == permitted:
            return None
        if name.startswith(operator) and name[len(operator):] in _PATTERN_SUFFIXES:
            return permitted
    return None
