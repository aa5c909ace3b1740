import { strict as assert } from "node:assert";
import { test } from "node:test";

import { stateForCaret } from "../src/proofstate.js";
import type { ProofStateInfo } from "../src/types.js";

const CONTENT = 'lemma x: "A ⟹ A ∧ A"\n  apply (rule andI)\n  apply assumption\n  done';

function state(position: number, subgoals: number): ProofStateInfo {
  return { block_id: "task-1", position, text: `goal (${subgoals} subgoals)`, subgoals };
}

test("the state with the greatest position at or before the caret wins", () => {
  // positions are byte offsets; the ⟹/∧ glyphs in the lemma line shift them
  const states = [state(10, 3), state(40, 2), state(60, 1)];
  const atEnd = stateForCaret(states, "task-1", CONTENT, CONTENT.length);
  assert.equal(atEnd?.subgoals, 1);
  const early = stateForCaret(states, "task-1", CONTENT, 12);
  assert.equal(early?.subgoals, 3);
});

test("caret before any state yields the placeholder case", () => {
  const states = [state(10, 3)];
  assert.equal(stateForCaret(states, "task-1", CONTENT, 0), null);
});

test("states of other blocks are ignored", () => {
  const states: ProofStateInfo[] = [
    { block_id: "other", position: 0, text: "x", subgoals: 5 },
  ];
  assert.equal(stateForCaret(states, "task-1", CONTENT, 10), null);
});

test("successive progress steps show decreasing subgoal counts", () => {
  const states = [state(5, 2), state(25, 1)];
  const before = stateForCaret(states, "task-1", CONTENT, 6)!;
  const after = stateForCaret(states, "task-1", CONTENT, 30)!;
  assert.equal(after.subgoals, before.subgoals - 1);
});
