"""Keyword tables for the Isar outer syntax.

The outer syntax distinguishes *command* keywords, which begin a new toplevel
or proof command, from *minor* keywords, which only structure the argument
list of a command (``imports``, ``assumes``, ``and`` ...). The tables below
follow the published Isar token classes and cover the command subset that
teaching material actually uses; they are deliberately data, so a course can
extend them without touching the lexer.

``BUILTIN_METHODS`` is not part of the token grammar: method names lex as
plain identifiers. The set exists so completion can offer common proof
methods and so restriction profiles have a vocabulary to forbid.
"""

from __future__ import annotations

COMMANDS: frozenset[str] = frozenset(
    {
        # theory structure
        "theory",
        "end",
        "section",
        "subsection",
        "subsubsection",
        "paragraph",
        "text",
        "txt",
        # specifications
        "definition",
        "abbreviation",
        "fun",
        "function",
        "primrec",
        "datatype",
        "type_synonym",
        "record",
        "inductive",
        "inductive_set",
        "lemmas",
        "named_theorems",
        "declare",
        # goals
        "lemma",
        "theorem",
        "corollary",
        "proposition",
        "schematic_goal",
        "notepad",
        # diagnostics
        "value",
        "term",
        "typ",
        "prop",
        "thm",
        "find_theorems",
        # proof structure
        "proof",
        "qed",
        "by",
        "apply",
        "done",
        "oops",
        "sorry",
        "back",
        "defer",
        "prefer",
        "subgoal",
        # proof statements
        "assume",
        "presume",
        "fix",
        "show",
        "have",
        "from",
        "with",
        "then",
        "hence",
        "thus",
        "moreover",
        "ultimately",
        "also",
        "finally",
        "next",
        "obtain",
        "consider",
        "case",
        "let",
        "note",
        "using",
        "unfolding",
        "supply",
        "write",
    }
)

MINOR_KEYWORDS: frozenset[str] = frozenset(
    {
        "and",
        "imports",
        "begin",
        "assumes",
        "shows",
        "fixes",
        "defines",
        "obtains",
        "where",
        "for",
        "if",
        "is",
        "in",
        "when",
        "open",
        "infix",
        "infixl",
        "infixr",
        "binder",
    }
)

# Common proof methods, offered by completion and referenced by restriction
# profiles. Method names stay ordinary identifiers at the token level.
BUILTIN_METHODS: frozenset[str] = frozenset(
    {
        "auto",
        "simp",
        "simp_all",
        "blast",
        "force",
        "fastforce",
        "best",
        "metis",
        "meson",
        "arith",
        "linarith",
        "presburger",
        "algebra",
        "rule",
        "erule",
        "drule",
        "frule",
        "intro",
        "elim",
        "assumption",
        "fact",
        "cases",
        "induct",
        "induction",
        "insert",
        "unfold",
        "clarify",
        "clarsimp",
        "safe",
        "standard",
    }
)
