import { strict as assert } from "node:assert";
import { test } from "node:test";

import { renderProse, TutorialModel } from "../src/tutorial-model.js";
import type { TutorialView } from "../src/types.js";

const VIEW: TutorialView = {
  id: "conjunction",
  title: { en: "Conjunction" },
  course_id: "logic101",
  profile: "propositional-v1",
  sections: [
    {
      title: { en: "Intro" },
      blocks: [
        { id: "intro", kind: "text", content: { en: "# Hi\nuse `andI`" } },
        { id: "ex1", kind: "example", code: "lemma e: \"A\"" },
        { id: "t1", kind: "task", initial: "lemma a:", content: "lemma a: \"A\"", outcome: "unchecked" },
        { id: "t2", kind: "task", initial: "lemma b:", content: "lemma b:", outcome: "ok" },
      ],
    },
  ],
};

test("editors are created for example and task blocks only", () => {
  const model = new TutorialModel(VIEW);
  assert.deepEqual(new Set(model.editors.keys()), new Set(["ex1", "t1", "t2"]));
  assert.equal(model.editor("ex1").readOnly, true);
  assert.equal(model.editor("t1").readOnly, false);
  assert.equal(model.editor("t1").content, 'lemma a: "A"'); // saved content wins
  assert.equal(model.editor("t2").outcome, "ok");
});

test("read-only editors refuse edits", () => {
  const model = new TutorialModel(VIEW);
  assert.equal(model.setContent("ex1", "vandalism"), false);
  assert.equal(model.editor("ex1").content, 'lemma e: "A"');
  assert.equal(model.setContent("t1", "edited"), true);
  assert.equal(model.editor("t1").content, "edited");
});

test("check payload collects exactly the editable contents", () => {
  const model = new TutorialModel(VIEW);
  model.setContent("t1", "changed");
  assert.deepEqual(model.taskContents(), { t1: "changed", t2: "lemma b:" });
});

test("outcomes apply and reset restores initials", () => {
  const model = new TutorialModel(VIEW);
  model.applyOutcomes({
    request_id: "r",
    status: "finished-failed",
    feedback: [],
    proof_states: [],
    diagnostics: [],
    outcomes: { t1: "failed" },
  });
  assert.equal(model.editor("t1").outcome, "failed");
  model.applyReset({ t1: "lemma a:", t2: "lemma b:" });
  assert.equal(model.editor("t1").content, "lemma a:");
  assert.equal(model.editor("t1").outcome, "unchecked");
});

test("prose markup renders headings, emphasis, and code spans", () => {
  const html = renderProse("# Title\n\nuse `andI` and *think* about <tags>");
  assert.match(html, /<h3>Title<\/h3>/);
  assert.match(html, /<code>andI<\/code>/);
  assert.match(html, /<em>think<\/em>/);
  assert.match(html, /&lt;tags&gt;/); // raw HTML is escaped
});
