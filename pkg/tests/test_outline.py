"""Outline parsing: command grouping, leading garbage, unterminated regions."""

from __future__ import annotations

from proofbench.isar import outline, tokenize


def outline_of(document: str, locale: str = "en"):
    return outline(tokenize(document), locale)


def test_empty_document():
    assert outline_of("") == ([], [])


def test_two_commands_no_diagnostics():
    outlines, diags = outline_of('lemma l: "A" by assumption')
    assert [o.name for o in outlines] == ["lemma", "by"]
    assert diags == []
    assert [a.text for a in outlines[0].arguments] == ["l", ":", '"A"']
    assert [a.text for a in outlines[1].arguments] == ["assumption"]


def test_outlines_are_disjoint_and_ordered():
    outlines, _ = outline_of('theory T imports Main begin\nlemma a: "A"\n  by simp\nend')
    spans = [o.span for o in outlines]
    for left, right in zip(spans, spans[1:]):
        assert left.end <= right.start


def test_leading_garbage_span_covers_up_to_first_command():
    document = '"A" lemma l: "A"'
    _, diags = outline_of(document)
    garbage = [d for d in diags if d.code == "leading-garbage"]
    assert len(garbage) == 1
    # the span includes the trailing space before `lemma`
    assert (garbage[0].span.start, garbage[0].span.end) == (0, 4)


def test_garbage_only_document():
    outlines, diags = outline_of('"A" 42')
    assert outlines == []
    assert [d.code for d in diags] == ["leading-garbage"]


def test_whitespace_and_comments_are_not_garbage():
    _, diags = outline_of("  (* hello *)\nlemma l: \"A\"")
    assert diags == []


def test_unterminated_string_diagnostic():
    _, diags = outline_of('lemma "A')
    assert [d.code for d in diags] == ["unterminated-string"]


def test_escaped_final_quote_is_unterminated():
    _, diags = outline_of('lemma "A\\"')
    assert [d.code for d in diags] == ["unterminated-string"]


def test_unterminated_cartouche_diagnostic():
    _, diags = outline_of("text ‹abc")
    assert [d.code for d in diags] == ["unterminated-cartouche"]


def test_unterminated_comment_diagnostic():
    _, diags = outline_of("(* a (* b *)")
    assert [d.code for d in diags] == ["unterminated-comment"]


def test_terminated_regions_yield_no_diagnostics():
    _, diags = outline_of('lemma "A\\"B" (* c *) text ‹x ‹y› z›')
    assert diags == []


def test_diagnostics_ordered_by_span():
    _, diags = outline_of('"junk" lemma "open')
    starts = [d.span.start for d in diags]
    assert starts == sorted(starts)


def test_localized_messages():
    _, en = outline_of('lemma "A', "en")
    _, de = outline_of('lemma "A', "de")
    assert en[0].message != de[0].message
    assert "geschlossen" in de[0].message


def test_arguments_exclude_whitespace_and_comments():
    outlines, _ = outline_of("by (* why not *) auto")
    assert [a.text for a in outlines[0].arguments] == ["auto"]
