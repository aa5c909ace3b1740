"""Deterministic structural checking for the mock prover.

The structural mode does not prove anything; it applies documented shape
rules to the outer syntax of a submitted theory and reports findings with
byte spans (see ``docs/prover-protocol.md``):

  S1  outer-syntax findings (leading garbage, unterminated regions)
  S2  every ``proof`` must be closed by a matching ``qed``; ``qed``
      without an open ``proof`` is an error
  S3  ``sorry`` and ``oops`` leave a proof unfinished
  S4  methods from the server's disabled list (default: auto, simp,
      blast) are rejected
  S5  ``rule``/``erule``/``drule``/``frule`` applied to a rule name the
      server does not know fails with a
      "Failed to apply initial proof method" error at the command keyword

Synthetic proof states: a goal command opens its proof with one pending
subgoal per progress command (assume, fix, have, show, by, apply, done,
qed) up to the end of its proof; each progress command then emits a state
with one subgoal fewer at the command's end position. The numbers are a
didactic fiction, but a deterministic one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..isar import CommandOutline, TokenKind, outline, tokenize
from ..isar.diagnostics import Severity

GOAL_COMMANDS = frozenset({"lemma", "theorem", "corollary", "proposition", "schematic_goal"})
PROGRESS_COMMANDS = frozenset({"assume", "fix", "have", "show", "by", "apply", "done", "qed"})
METHOD_WRAPPERS = frozenset({"rule", "erule", "drule", "frule"})

DEFAULT_DISABLED_METHODS = frozenset({"auto", "simp", "blast"})

# Rules the mock accepts, including the didactic aliases used by tutorials.
KNOWN_RULES = frozenset(
    {
        "conjI", "conjE", "conjunct1", "conjunct2",
        "disjI1", "disjI2", "disjE",
        "impI", "impE", "mp",
        "notI", "notE",
        "iffI", "iffE", "iffD1", "iffD2",
        "allI", "allE", "spec",
        "exI", "exE",
        "refl", "sym", "trans", "ssubst", "subst",
        "ccontr", "classical",
        "andI", "andE", "orI1", "orI2", "orE",
    }
)


@dataclass(frozen=True)
class StructuralMessage:
    severity: str  # error | warning | information
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class StructuralReport:
    status: str  # ok | failed
    messages: tuple[StructuralMessage, ...]
    proof_states: tuple[tuple[int, str, int], ...]  # (position, text, subgoals)


@dataclass
class StructuralConfig:
    disabled_methods: frozenset[str] = DEFAULT_DISABLED_METHODS
    known_rules: frozenset[str] = KNOWN_RULES


def check_structure(theory_text: str, config: StructuralConfig | None = None) -> StructuralReport:
    config = config or StructuralConfig()
    tokens = tokenize(theory_text)
    outlines, syntax_diags = outline(tokens)

    messages: list[StructuralMessage] = []
    for diag in syntax_diags:
        severity = "error" if diag.severity is Severity.ERROR else "warning"
        messages.append(
            StructuralMessage(severity, diag.span.start, diag.span.end, diag.message)
        )

    proof_stack: list[CommandOutline] = []
    for entry in outlines:
        if entry.name == "proof":
            proof_stack.append(entry)
        elif entry.name == "qed":
            if proof_stack:
                proof_stack.pop()
            else:
                messages.append(_at(entry, "error", "qed without a matching proof"))
        elif entry.name in ("sorry", "oops"):
            messages.append(_at(entry, "error", f"proof left unfinished by '{entry.name}'"))
        elif entry.name in ("by", "apply"):
            messages.extend(_check_method(entry, config))
    for open_proof in proof_stack:
        messages.append(_at(open_proof, "error", "proof block is never closed by qed"))

    states = _proof_states(outlines, theory_text)
    status = "failed" if any(m.severity == "error" for m in messages) else "ok"
    return StructuralReport(status, tuple(messages), tuple(states))


def _at(entry: CommandOutline, severity: str, text: str) -> StructuralMessage:
    end = entry.span.start + len(entry.name.encode("utf-8"))
    return StructuralMessage(severity, entry.span.start, end, text)


def _check_method(entry: CommandOutline, config: StructuralConfig) -> list[StructuralMessage]:
    found: list[StructuralMessage] = []
    names = [
        t for t in entry.arguments
        if t.kind in (TokenKind.IDENTIFIER, TokenKind.LONG_IDENTIFIER)
    ]
    for token in names:
        if token.text in config.disabled_methods:
            found.append(
                StructuralMessage(
                    "error",
                    token.span.start,
                    token.span.end,
                    f"method '{token.text}' is disabled on this prover",
                )
            )
    for wrapper, argument in zip(names, names[1:]):
        if wrapper.text in METHOD_WRAPPERS and argument.text not in config.known_rules:
            found.append(
                _at(
                    entry,
                    "error",
                    "Failed to apply initial proof method:\n"
                    f"unknown rule '{argument.text}'",
                )
            )
    return found


def _proof_states(outlines: list[CommandOutline], theory_text: str) -> list[tuple[int, str, int]]:
    states: list[tuple[int, str, int]] = []
    remaining = 0
    i = 0
    while i < len(outlines):
        entry = outlines[i]
        if entry.name in GOAL_COMMANDS:
            # pending work: progress commands until the next goal command
            pending = 0
            for later in outlines[i + 1 :]:
                if later.name in GOAL_COMMANDS:
                    break
                if later.name in PROGRESS_COMMANDS:
                    pending += 1
            remaining = max(pending, 1)
            states.append((entry.span.end, _render_state(remaining), remaining))
        elif entry.name in PROGRESS_COMMANDS and remaining > 0:
            remaining -= 1
            states.append((entry.span.end, _render_state(remaining), remaining))
        i += 1
    return states


def _render_state(subgoals: int) -> str:
    if subgoals == 0:
        return "No subgoals!"
    noun = "subgoal" if subgoals == 1 else "subgoals"
    return f"proof (prove)\ngoal ({subgoals} {noun}):"
