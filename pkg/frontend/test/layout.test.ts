import { strict as assert } from "node:assert";
import { test } from "node:test";

import { ALL_TABS, TabLayout, type StorageLike } from "../src/layout.js";

function memoryStorage(): StorageLike & { data: Map<string, string> } {
  const data = new Map<string, string>();
  return {
    data,
    getItem: (key) => data.get(key) ?? null,
    setItem: (key, value) => void data.set(key, value),
  };
}

test("default layout assigns every tab to exactly one side", () => {
  const layout = new TabLayout(memoryStorage());
  const assignment = layout.assignment();
  assert.deepEqual(new Set(Object.keys(assignment)), new Set(ALL_TABS));
  assert.deepEqual(
    [...layout.tabsOn("left"), ...layout.tabsOn("right")].sort(),
    [...ALL_TABS].sort(),
  );
});

test("tab docking persists across reload", () => {
  const storage = memoryStorage();
  const layout = new TabLayout(storage);
  layout.moveTab("output", "left");
  layout.setMinimized("right", true);

  // a "reload": a fresh layout over the same storage
  const reloaded = new TabLayout(storage);
  assert.equal(reloaded.sideOf("output"), "left");
  assert.equal(reloaded.isMinimized("right"), true);
  assert.equal(reloaded.isMinimized("left"), false);
});

test("moving a tab never loses any tab", () => {
  const layout = new TabLayout(memoryStorage());
  layout.moveTab("rules", "right");
  layout.moveTab("output", "left");
  layout.moveTab("rules", "left");
  const all = [...layout.tabsOn("left"), ...layout.tabsOn("right")];
  assert.deepEqual(new Set(all), new Set(ALL_TABS));
  assert.equal(all.length, ALL_TABS.length);
});

test("every tab remains reachable when a side is minimized", () => {
  const storage = memoryStorage();
  const layout = new TabLayout(storage);
  layout.setMinimized("left", true);
  // minimizing hides but never reassigns
  assert.deepEqual(
    new Set([...layout.tabsOn("left"), ...layout.tabsOn("right")]),
    new Set(ALL_TABS),
  );
});

test("corrupted persistence falls back to the default layout", () => {
  const storage = memoryStorage();
  storage.setItem("proofbench.layout", "{not json");
  const layout = new TabLayout(storage);
  assert.equal(layout.sideOf("explorer"), "left");
  storage.setItem("proofbench.layout", JSON.stringify({ tabs: { output: "nowhere" } }));
  const layout2 = new TabLayout(storage);
  assert.equal(layout2.sideOf("output"), "right");
});
