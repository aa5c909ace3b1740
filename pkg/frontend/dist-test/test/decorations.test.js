import { strict as assert } from "node:assert";
import { test } from "node:test";
import { buildHover, decorationsForBlock, hoverTextAt, tutorialLevelItems, } from "../src/decorations.js";
import { byteToCharIndex, charToByteIndex } from "../src/utf8.js";
function item(partial) {
    return {
        severity: "error",
        origin_kind: "block",
        block_id: "task-1",
        local_span: { start: 0, end: 2 },
        raw_text: "boom",
        hints: [],
        kind: "prover",
        source_label: "prover output",
        ...partial,
    };
}
test("hovering a decorated span shows the feedback text", () => {
    const content = 'lemma x: "A"\n  by bogus';
    const start = content.indexOf("by");
    const feedback = [
        item({
            local_span: { start, end: start + 2 },
            raw_text: "Failed to apply initial proof method",
            hints: ["Check the rule name"],
        }),
    ];
    const decorations = decorationsForBlock("task-1", content, feedback);
    assert.equal(decorations.length, 1);
    const hover = hoverTextAt(decorations, start);
    assert.ok(hover !== null);
    assert.match(hover, /Failed to apply initial proof method/);
    assert.match(hover, /Check the rule name/);
    assert.match(hover, /prover output/); // labeled as prover output
    assert.equal(hoverTextAt(decorations, 0), null); // outside the span
});
test("byte spans convert to JS string indices around multibyte glyphs", () => {
    const content = '∧∧ by x'; // ∧ is 3 UTF-8 bytes, 1 UTF-16 unit
    const byteStart = charToByteIndex(content, content.indexOf("by"));
    assert.equal(byteStart, 3 + 3 + 1);
    const feedback = [item({ local_span: { start: byteStart, end: byteStart + 2 } })];
    const decorations = decorationsForBlock("task-1", content, feedback);
    assert.equal(decorations[0].startChar, content.indexOf("by"));
    assert.equal(decorations[0].endChar, content.indexOf("by") + 2);
});
test("utf8 round trips at code point boundaries, astral included", () => {
    const text = "a∧🙂b";
    const boundaries = [0, 1, 2, 4, 5]; // index 3 is inside the surrogate pair
    for (const index of boundaries) {
        const byte = charToByteIndex(text, index);
        assert.equal(byteToCharIndex(text, byte), index);
    }
    // an index inside a surrogate pair clamps to the end of the pair
    assert.equal(byteToCharIndex(text, charToByteIndex(text, 3)), 4);
    assert.equal(charToByteIndex(text, text.length), 1 + 3 + 4 + 1);
});
test("decorations from other blocks and tutorial-level items are excluded", () => {
    const feedback = [
        item({ block_id: "other" }),
        item({ origin_kind: "tutorial", block_id: null, local_span: null }),
    ];
    assert.deepEqual(decorationsForBlock("task-1", "text", feedback), []);
    assert.equal(tutorialLevelItems(feedback).length, 1);
});
test("zero-length decorations match exactly at their position", () => {
    const feedback = [item({ local_span: { start: 4, end: 4 }, raw_text: "here" })];
    const decorations = decorationsForBlock("task-1", "somewhere", feedback);
    assert.equal(hoverTextAt(decorations, 4), buildHover(feedback[0]));
    assert.equal(hoverTextAt(decorations, 3), null);
    assert.equal(hoverTextAt(decorations, 5), null);
});
test("linter diagnostics decorate alongside prover feedback", () => {
    const content = "by auto";
    const decorations = decorationsForBlock("task-1", content, [], [
        {
            block_id: "task-1",
            severity: "error",
            span: { start: 3, end: 7 },
            code: "forbidden-method",
            message: "the proof method 'auto' is not available in this course",
            layer: "restriction",
        },
    ]);
    assert.equal(decorations.length, 1);
    assert.match(hoverTextAt(decorations, 3), /not available/);
});
