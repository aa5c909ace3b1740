"""Tutorials: ordered blocks, theory assembly, and the span map."""

from .assembly import (
    AssembledTheory,
    MappedOrigin,
    Segment,
    SpanOutOfRange,
    assemble_theory,
    extract_task_text,
    map_span,
    reset_progress,
)
from .loader import (
    TutorialFormatError,
    hidden_code_is_complete,
    load_tutorial,
    load_tutorial_file,
    validate_tutorial,
)
from .model import (
    Block,
    BlockKind,
    Course,
    Outcome,
    Section,
    TheoryHeader,
    Tutorial,
    TutorialState,
    TutorialValidationError,
    check_state_matches,
    new_state,
)

__all__ = [
    "AssembledTheory",
    "Block",
    "BlockKind",
    "Course",
    "MappedOrigin",
    "Outcome",
    "Section",
    "Segment",
    "SpanOutOfRange",
    "TheoryHeader",
    "Tutorial",
    "TutorialFormatError",
    "TutorialState",
    "TutorialValidationError",
    "assemble_theory",
    "check_state_matches",
    "extract_task_text",
    "hidden_code_is_complete",
    "load_tutorial",
    "load_tutorial_file",
    "map_span",
    "new_state",
    "reset_progress",
    "validate_tutorial",
]
