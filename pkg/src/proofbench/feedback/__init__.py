"""Learner-facing feedback: rule catalogs, hints, enrichment."""

from .catalog import (
    CatalogError,
    HintRule,
    RuleEntry,
    display_to_prover,
    load_hint_catalog,
    load_rule_catalog,
    parse_hint_catalog,
    parse_rule_catalog,
    prover_to_display,
)
from .enrich import FeedbackItem, enrich, list_rules, search_rules

__all__ = [
    "CatalogError",
    "FeedbackItem",
    "HintRule",
    "RuleEntry",
    "display_to_prover",
    "enrich",
    "list_rules",
    "load_hint_catalog",
    "load_rule_catalog",
    "parse_hint_catalog",
    "parse_rule_catalog",
    "prover_to_display",
    "search_rules",
]
