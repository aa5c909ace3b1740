"""Isar outer-syntax tooling: lexer, outline, restrictions, symbols.

Everything in this package is pure and prover-independent; values are safe
to share across threads.
"""

from .completion import Completion, complete
from .diagnostics import Diagnostic, Layer, Severity
from .outline import CommandOutline, outline
from .profile_loader import load_profiles, parse_profiles
from .restrictions import (
    PERMISSIVE,
    ProfileError,
    SyntaxProfile,
    check_restrictions,
)
from .symbols import (
    SymbolEntry,
    SymbolTableError,
    extend_symbol_table,
    load_symbol_table,
    lookup_symbol,
    parse_symbol_table,
)
from .tokens import Token, TokenKind, tokenize

__all__ = [
    "Completion",
    "CommandOutline",
    "Diagnostic",
    "Layer",
    "PERMISSIVE",
    "ProfileError",
    "Severity",
    "SymbolEntry",
    "SymbolTableError",
    "SyntaxProfile",
    "Token",
    "TokenKind",
    "check_restrictions",
    "complete",
    "extend_symbol_table",
    "load_profiles",
    "load_symbol_table",
    "lookup_symbol",
    "outline",
    "parse_profiles",
    "parse_symbol_table",
    "tokenize",
]
