"""Tutorial loading, validation, and the bundled fixtures."""

from __future__ import annotations

import pytest

from proofbench.isar import PERMISSIVE
from proofbench.tutorial import (
    Block,
    BlockKind,
    Section,
    TheoryHeader,
    Tutorial,
    TutorialFormatError,
    TutorialValidationError,
    load_tutorial,
    load_tutorial_file,
    validate_tutorial,
)

from .conftest import TUTORIALS

MINIMAL = """
id = "mini"
[title]
en = "Mini"
[header]
theory = "Mini"
imports = ["Main"]
[footer]
text = "end"
[[section]]
[[section.block]]
id = "t1"
kind = "text"
[section.block.content]
en = "hello"
[[section.block]]
id = "task1"
kind = "task"
initial = 'lemma a: "A"'
"""


def test_minimal_document_loads():
    tutorial = load_tutorial(MINIMAL)
    assert tutorial.id == "mini"
    assert len(tutorial.sections) == 1
    assert [b.kind.value for b in tutorial.blocks()] == ["text", "task"]
    assert tutorial.header.text == "theory Mini imports Main begin"
    assert tutorial.footer_text == "end"


def test_missing_footer_is_a_format_error():
    document = MINIMAL.replace('[footer]\ntext = "end"\n', "")
    with pytest.raises(TutorialFormatError, match="missing footer"):
        load_tutorial(document)


def test_missing_header_is_a_format_error():
    document = MINIMAL.replace('[header]\ntheory = "Mini"\nimports = ["Main"]\n', "")
    with pytest.raises(TutorialFormatError, match="missing header"):
        load_tutorial(document)


def test_toml_syntax_error_carries_position():
    with pytest.raises(TutorialFormatError, match=r"line \d+"):
        load_tutorial("id = ???")


def test_duplicate_block_id_reports_offender():
    document = MINIMAL.replace('id = "task1"', 'id = "t1"')
    with pytest.raises(TutorialValidationError) as err:
        load_tutorial(document)
    assert err.value.offending_id == "t1"


def test_unknown_block_kind_rejected():
    document = MINIMAL.replace('kind = "task"', 'kind = "quiz"')
    with pytest.raises(TutorialFormatError, match="quiz"):
        load_tutorial(document)


def test_conjunction_fixture_shape():
    tutorial = load_tutorial_file(TUTORIALS / "conjunction.toml")
    assert len(tutorial.sections) == 3
    assert len(tutorial.task_blocks()) == 5


@pytest.mark.parametrize("name", ["conjunction", "first_order", "lists"])
def test_bundled_fixtures_are_valid(name, profiles):
    tutorial = load_tutorial_file(TUTORIALS / f"{name}.toml")
    profile = profiles.get(tutorial.profile_id, PERMISSIVE)
    assert validate_tutorial(tutorial, profile) == []


def test_validate_flags_forbidden_initial_content(restrictive_profile):
    tutorial = Tutorial(
        id="x",
        title={"en": "x"},
        header=TheoryHeader("X"),
        sections=(
            Section(
                title={},
                blocks=(Block(id="t", kind=BlockKind.TASK, initial='lemma a: "A" by auto'),),
            ),
        ),
    )
    findings = validate_tutorial(tutorial, restrictive_profile)
    assert [f.code for f in findings] == ["forbidden-method"]
    assert "'t'" in findings[0].message


def test_validate_flags_broken_hidden_code(restrictive_profile):
    tutorial = Tutorial(
        id="x",
        title={"en": "x"},
        header=TheoryHeader("X"),
        sections=(
            Section(
                title={},
                blocks=(Block(id="h", kind=BlockKind.HIDDEN, code="text ‹never closed"),),
            ),
        ),
    )
    findings = validate_tutorial(tutorial, restrictive_profile)
    assert [f.code for f in findings] == ["unterminated-cartouche"]
