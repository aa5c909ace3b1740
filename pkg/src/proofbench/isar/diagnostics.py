"""Diagnostics shared by the syntax, restriction, and prover layers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..spans import SourceSpan


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class Layer(str, Enum):
    OUTER_SYNTAX = "outer-syntax"
    RESTRICTION = "restriction"
    PROVER = "prover"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    span: SourceSpan
    code: str
    message: str
    layer: Layer

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "span": self.span.to_dict(),
            "code": self.code,
            "message": self.message,
            "layer": self.layer.value,
        }


# Localized messages for outer-syntax findings. Restriction messages come
# from the profile's templates instead, so teachers can reword them.
OUTER_MESSAGES: dict[str, dict[str, str]] = {
    "leading-garbage": {
        "en": "text before the first command is not part of any command",
        "de": "Text vor dem ersten Befehl gehört zu keinem Befehl",
    },
    "unterminated-string": {
        "en": "quoted string is never closed",
        "de": "Zeichenkette wird nicht geschlossen",
    },
    "unterminated-cartouche": {
        "en": "cartouche ‹...› is never closed",
        "de": "Cartouche ‹...› wird nicht geschlossen",
    },
    "unterminated-comment": {
        "en": "comment (* ... *) is never closed",
        "de": "Kommentar (* ... *) wird nicht geschlossen",
    },
}


def outer_message(code: str, locale: str) -> str:
    table = OUTER_MESSAGES[code]
    return table.get(locale, table["en"])
