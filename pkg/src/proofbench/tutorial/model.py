"""Courses, tutorials, blocks, and per-user tutorial state.

A tutorial is one underlying prover theory split into ordered blocks. Text
blocks are prose for the reader, example blocks are read-only code, task
blocks are the only editable kind, and hidden blocks carry mandatory code
students never see. The hidden header (theory line and imports) comes first
in assembly order and the hidden footer last.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Mapping


class BlockKind(str, Enum):
    TEXT = "text"
    EXAMPLE = "example"
    TASK = "task"
    HIDDEN = "hidden"


class Outcome(str, Enum):
    UNCHECKED = "unchecked"
    OK = "ok"
    FAILED = "failed"


class TutorialValidationError(ValueError):
    """A tutorial value violates a structural invariant."""

    def __init__(self, message: str, offending_id: str | None = None):
        super().__init__(message)
        self.offending_id = offending_id


@dataclass(frozen=True)
class Block:
    id: str
    kind: BlockKind
    # text blocks: prose per locale; other kinds ignore this field
    content: Mapping[str, str] = field(default_factory=dict)
    # example and hidden blocks: immutable code
    code: str = ""
    # task blocks: the content students start from
    initial: str = ""

    @property
    def editable(self) -> bool:
        return self.kind is BlockKind.TASK

    def localized(self, locale: str) -> str:
        if locale in self.content:
            return self.content[locale]
        return self.content.get("en", next(iter(self.content.values()), ""))


@dataclass(frozen=True)
class TheoryHeader:
    theory_name: str
    imports: tuple[str, ...] = ("Main",)

    @property
    def text(self) -> str:
        imports = " ".join(self.imports)
        return f"theory {self.theory_name} imports {imports} begin"


@dataclass(frozen=True)
class Section:
    title: Mapping[str, str]
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class Tutorial:
    id: str
    title: Mapping[str, str]
    header: TheoryHeader
    sections: tuple[Section, ...]
    footer_text: str = "end"
    profile_id: str = "permissive"

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for block in self.blocks():
            if block.id in seen:
                raise TutorialValidationError(
                    f"duplicate block id {block.id!r} in tutorial {self.id!r}", block.id
                )
            seen.add(block.id)

    def blocks(self) -> Iterator[Block]:
        for section in self.sections:
            yield from section.blocks

    def task_blocks(self) -> list[Block]:
        return [b for b in self.blocks() if b.kind is BlockKind.TASK]

    def block(self, block_id: str) -> Block:
        for b in self.blocks():
            if b.id == block_id:
                return b
        raise KeyError(block_id)

    def localized_title(self, locale: str) -> str:
        if locale in self.title:
            return self.title[locale]
        return self.title.get("en", self.id)


@dataclass(frozen=True)
class TutorialState:
    """A user's editable content and check outcomes for one tutorial."""

    user_id: str
    tutorial_id: str
    contents: Mapping[str, str]
    outcomes: Mapping[str, Outcome]

    def content_of(self, block_id: str) -> str:
        return self.contents[block_id]

    def with_content(self, block_id: str, text: str) -> "TutorialState":
        if block_id not in self.contents:
            raise KeyError(block_id)
        contents = dict(self.contents)
        contents[block_id] = text
        return replace(self, contents=contents)

    def with_outcome(self, block_id: str, outcome: Outcome) -> "TutorialState":
        if block_id not in self.outcomes:
            raise KeyError(block_id)
        outcomes = dict(self.outcomes)
        outcomes[block_id] = outcome
        return replace(self, outcomes=outcomes)

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "tutorial_id": self.tutorial_id,
            "contents": dict(self.contents),
            "outcomes": {k: v.value for k, v in self.outcomes.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TutorialState":
        return cls(
            user_id=data["user_id"],
            tutorial_id=data["tutorial_id"],
            contents=dict(data["contents"]),
            outcomes={k: Outcome(v) for k, v in data["outcomes"].items()},
        )


def new_state(tutorial: Tutorial, user_id: str) -> TutorialState:
    tasks = tutorial.task_blocks()
    return TutorialState(
        user_id=user_id,
        tutorial_id=tutorial.id,
        contents={b.id: b.initial for b in tasks},
        outcomes={b.id: Outcome.UNCHECKED for b in tasks},
    )


def check_state_matches(state: TutorialState, tutorial: Tutorial) -> None:
    """Raise unless the state belongs to the tutorial and covers its tasks."""
    if state.tutorial_id != tutorial.id:
        raise TutorialValidationError(
            f"state for tutorial {state.tutorial_id!r} does not match {tutorial.id!r}"
        )
    expected = {b.id for b in tutorial.task_blocks()}
    if set(state.contents) != expected:
        raise TutorialValidationError(
            f"state blocks {sorted(state.contents)} do not match tasks {sorted(expected)}"
        )


@dataclass(frozen=True)
class Course:
    id: str
    title: str
    locales: tuple[str, ...]
    profile_id: str
    tutorial_ids: tuple[str, ...]
    roster: frozenset[str]
    owner_id: str | None = None

    def __post_init__(self) -> None:
        if not self.locales:
            raise TutorialValidationError(f"course {self.id!r} has an empty locale set")
        if len(set(self.tutorial_ids)) != len(self.tutorial_ids):
            raise TutorialValidationError(f"course {self.id!r} lists a tutorial twice")
