/** Browser shell: wires the API client, tutorial model, tab layout,
 * completion, decorations, and the check controller into the DOM. */

import { ApiClient } from "./api.js";
import { CheckController } from "./check.js";
import { applyCompletion, completionsFor, type Candidate } from "./completion.js";
import {
  decorationsForBlock,
  hoverTextAt,
  tutorialLevelItems,
  type EditorDecoration,
} from "./decorations.js";
import { ALL_TABS, TabLayout, type Side, type TabName } from "./layout.js";
import { renderPlaceholder, stateForCaret } from "./proofstate.js";
import { renderProse, TutorialModel } from "./tutorial-model.js";
import type { CheckPayload, RuleInfo, StreamMessage, SymbolInfo } from "./types.js";

const TAB_LABELS: Record<TabName, string> = {
  output: "Output",
  proofstate: "ProofState",
  rules: "Rules",
  explorer: "Explorer",
};

interface AppContext {
  api: ApiClient;
  layout: TabLayout;
  checks: CheckController;
  symbols: SymbolInfo[];
  rules: RuleInfo[];
  model: TutorialModel | null;
  courseId: string | null;
  activeBlock: string | null;
  lastPayload: CheckPayload | null;
  decorations: Map<string, EditorDecoration[]>;
  locale: string;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const stored = window.localStorage.getItem("proofbench.token");
  const token = stored ?? window.prompt("Bearer token") ?? "";
  window.localStorage.setItem("proofbench.token", token);
  const base = window.localStorage.getItem("proofbench.base") ?? window.location.origin;

  const context: AppContext = {
    api: new ApiClient(base, token),
    layout: new TabLayout(window.localStorage),
    checks: null as unknown as CheckController,
    symbols: [],
    rules: [],
    model: null,
    courseId: null,
    activeBlock: null,
    lastPayload: null,
    decorations: new Map(),
    locale: window.localStorage.getItem("proofbench.locale") ?? "en",
  };
  context.checks = new CheckController({
    submit: (request) => context.api.submitCheck(request),
  });

  context.api.openStream((message: StreamMessage) => {
    if (message.type !== "check-result" || message.request_id === null) return;
    if (context.checks.resolve(message.request_id)) {
      handleResult(context, message.payload as CheckPayload);
    }
  });

  try {
    context.symbols = await context.api.symbols();
  } catch {
    context.symbols = [];
  }

  renderChrome(context);
  await renderExplorer(context);
}

function renderChrome(context: AppContext): void {
  const root = byId("app");
  root.replaceChildren(
    el("header", { class: "topbar" },
      el("span", { class: "brand" }, "proofbench"),
      el("span", { class: "spacer" }),
      localeToggle(context),
    ),
    el("div", { class: "columns" },
      el("aside", { id: "side-left", class: "dock" }),
      el("main", { id: "content" }, el("p", {}, "Pick a tutorial in the Explorer tab.")),
      el("aside", { id: "side-right", class: "dock" }),
    ),
  );
  renderDocks(context);
}

function localeToggle(context: AppContext): HTMLElement {
  const button = el("button", { class: "locale" }, context.locale.toUpperCase());
  button.addEventListener("click", () => {
    context.locale = context.locale === "en" ? "de" : "en";
    window.localStorage.setItem("proofbench.locale", context.locale);
    button.textContent = context.locale.toUpperCase();
    if (context.model !== null) void openTutorial(context, context.model.view.id);
  });
  return button;
}

function renderDocks(context: AppContext): void {
  for (const side of ["left", "right"] as Side[]) {
    const dock = byId(`side-${side}`);
    dock.replaceChildren();
    dock.classList.toggle("minimized", context.layout.isMinimized(side));
    const bar = el("div", { class: "dockbar" });
    const minimize = el("button", { class: "mini" }, context.layout.isMinimized(side) ? "▸" : "▾");
    minimize.addEventListener("click", () => {
      context.layout.setMinimized(side, !context.layout.isMinimized(side));
      renderDocks(context);
    });
    bar.append(minimize);
    dock.append(bar);
    if (context.layout.isMinimized(side)) continue;
    for (const tab of context.layout.tabsOn(side)) {
      dock.append(renderTab(context, tab, side));
    }
  }
}

function renderTab(context: AppContext, tab: TabName, side: Side): HTMLElement {
  const head = el("div", { class: "tabhead", draggable: "true" }, TAB_LABELS[tab]);
  head.addEventListener("dragstart", (event) => {
    (event as DragEvent).dataTransfer?.setData("text/tab", tab);
  });
  const flip = el("button", { class: "flip", title: "move to the other side" }, "⇄");
  flip.addEventListener("click", () => {
    context.layout.moveTab(tab, side === "left" ? "right" : "left");
    renderDocks(context);
  });
  head.append(flip);
  const body = el("div", { class: "tabbody", id: `tab-${tab}` });
  const panel = el("section", { class: "tab" }, head, body);
  fillTab(context, tab, body);
  return panel;
}

function fillTab(context: AppContext, tab: TabName, body: HTMLElement): void {
  if (tab === "explorer") void fillExplorer(context, body);
  else if (tab === "rules") void fillRules(context, body);
  else if (tab === "output") fillOutput(context, body);
  else fillProofState(context, body);
}

async function renderExplorer(context: AppContext): Promise<void> {
  const body = document.getElementById("tab-explorer");
  if (body !== null) await fillExplorer(context, body);
}

async function fillExplorer(context: AppContext, body: HTMLElement): Promise<void> {
  body.replaceChildren("Loading courses…");
  try {
    const courses = await context.api.courses();
    body.replaceChildren(
      ...courses.map((course) =>
        el("div", { class: "course" },
          el("strong", {}, course.title),
          el("ul", {},
            ...course.tutorials.map((tid) => {
              const link = el("a", { href: "#" }, tid);
              link.addEventListener("click", (event) => {
                event.preventDefault();
                context.courseId = course.id;
                void openTutorial(context, tid);
              });
              return el("li", {}, link);
            }),
          ),
        ),
      ),
    );
  } catch (error) {
    body.replaceChildren(el("p", { class: "error" }, `cannot load courses: ${String(error)}`));
  }
}

async function fillRules(context: AppContext, body: HTMLElement): Promise<void> {
  const search = el("input", { type: "search", placeholder: "search rules" });
  const list = el("div", { class: "rulelist" });
  const refresh = async () => {
    if (context.courseId === null) {
      list.replaceChildren(el("p", {}, "open a tutorial first"));
      return;
    }
    const rules = await context.api.rules(context.courseId, search.value, context.locale);
    context.rules = rules;
    list.replaceChildren(
      ...rules.map((rule) => {
        const row = el("div", { class: "rule", title: rule.description },
          el("code", {}, rule.display_name), " ", el("small", {}, rule.schema));
        row.addEventListener("click", () => insertAtCaret(context, rule.display_name));
        return row;
      }),
    );
  };
  search.addEventListener("input", () => void refresh());
  body.replaceChildren(search, list);
  await refresh();

  const symbolSearch = el("input", { type: "search", placeholder: "search symbols" });
  const symbolList = el("div", { class: "symbollist" });
  const refreshSymbols = async () => {
    const symbols = await context.api.symbols(symbolSearch.value);
    symbolList.replaceChildren(
      ...symbols.map((sym) => {
        const chip = el("button", { class: "symbol", title: `${sym.name} (${sym.abbreviation ?? sym.escape})` }, sym.glyph);
        chip.addEventListener("click", () => insertAtCaret(context, sym.glyph));
        return chip;
      }),
    );
  };
  symbolSearch.addEventListener("input", () => void refreshSymbols());
  body.append(el("h4", {}, "Symbols"), symbolSearch, symbolList);
  await refreshSymbols();
}

function fillOutput(context: AppContext, body: HTMLElement): void {
  const payload = context.lastPayload;
  if (payload === null) {
    body.replaceChildren(el("p", {}, "no check yet"));
    return;
  }
  const entries: HTMLElement[] = [el("p", { class: `status-${payload.status}` }, `status: ${payload.status}`)];
  for (const item of payload.feedback) {
    entries.push(
      el("div", { class: `finding ${item.severity}` },
        el("span", { class: "label" }, item.source_label),
        el("pre", {}, item.raw_text),
        ...(item.hints.length > 0
          ? [el("ul", {}, ...item.hints.map((hint) => el("li", {}, hint)))]
          : []),
      ),
    );
  }
  for (const diag of payload.diagnostics) {
    entries.push(el("div", { class: `finding ${diag.severity}` },
      el("span", { class: "label" }, "linter"), el("pre", {}, diag.message)));
  }
  for (const item of tutorialLevelItems(payload.feedback)) {
    entries.push(el("div", { class: "finding banner" },
      "internal definition failed — contact the teacher", el("pre", {}, item.raw_text)));
  }
  body.replaceChildren(...entries);
}

function fillProofState(context: AppContext, body: HTMLElement): void {
  const payload = context.lastPayload;
  const model = context.model;
  if (payload === null || model === null || context.activeBlock === null) {
    body.replaceChildren(el("p", {}, renderPlaceholder()));
    return;
  }
  const editor = document.querySelector<HTMLTextAreaElement>(
    `textarea[data-block="${context.activeBlock}"]`,
  );
  const caret = editor?.selectionStart ?? 0;
  const content = model.editor(context.activeBlock).content;
  const state = stateForCaret(payload.proof_states, context.activeBlock, content, caret);
  if (state === null) {
    body.replaceChildren(el("p", {}, renderPlaceholder()));
    return;
  }
  body.replaceChildren(
    el("pre", {}, state.text),
    el("p", {}, `open subgoals: ${state.subgoals}`),
  );
}

async function openTutorial(context: AppContext, tutorialId: string): Promise<void> {
  const view = await context.api.tutorial(tutorialId, context.locale);
  context.model = new TutorialModel(view);
  context.lastPayload = null;
  context.decorations = new Map();
  renderTutorial(context);
}

function renderTutorial(context: AppContext): void {
  const model = context.model;
  if (model === null) return;
  const content = byId("content");
  const children: HTMLElement[] = [
    el("h2", {}, model.view.title[context.locale] ?? model.view.title["en"] ?? model.view.id),
  ];

  const checkButton = el("button", { id: "check", class: "check" }, "Check");
  checkButton.addEventListener("click", () => void runCheck(context, checkButton));
  const resetButton = el("button", { class: "reset" }, "Reset progress");
  resetButton.addEventListener("click", () => void runReset(context));
  children.push(el("div", { class: "actions" }, checkButton, resetButton));

  for (const section of model.view.sections) {
    const sectionTitle = section.title[context.locale] ?? section.title["en"];
    if (sectionTitle) children.push(el("h3", {}, sectionTitle));
    for (const block of section.blocks) {
      if (block.kind === "text") {
        const prose =
          typeof block.content === "string"
            ? block.content
            : block.content?.[context.locale] ?? block.content?.["en"] ?? "";
        const host = el("div", { class: "prose" });
        host.innerHTML = renderProse(prose);
        children.push(host);
      } else if (block.kind === "example" || block.kind === "task") {
        children.push(renderEditor(context, block.id, block.kind));
      }
    }
  }
  content.replaceChildren(...children);
  renderDocks(context);
}

function renderEditor(context: AppContext, blockId: string, kind: "example" | "task"): HTMLElement {
  const model = context.model;
  if (model === null) throw new Error("no tutorial open");
  const editor = model.editor(blockId);
  const area = el("textarea", {
    "data-block": blockId,
    class: kind,
    rows: String(Math.max(3, editor.content.split("\n").length + 1)),
    spellcheck: "false",
  }) as HTMLTextAreaElement;
  area.value = editor.content;
  if (editor.readOnly) area.readOnly = true;

  const badge = el("span", { class: `outcome ${editor.outcome}`, id: `outcome-${blockId}` }, editor.outcome);
  const hover = el("div", { class: "hovercard", hidden: "hidden" });
  const suggestions = el("div", { class: "suggestions" });

  area.addEventListener("focus", () => {
    context.activeBlock = blockId;
    refreshProofStateTab(context);
  });
  area.addEventListener("keyup", () => refreshProofStateTab(context));
  area.addEventListener("input", () => {
    if (!model.setContent(blockId, area.value)) {
      area.value = model.editor(blockId).content; // read-only: revert
      return;
    }
    renderSuggestions(context, area, suggestions);
  });
  area.addEventListener("keydown", (event) => {
    if (event.key === "Tab" && suggestions.childElementCount > 0) {
      event.preventDefault();
      (suggestions.firstElementChild as HTMLElement).click();
    }
  });
  area.addEventListener("mousemove", (event) => {
    const offset = caretFromPoint(area, event);
    const decorations = context.decorations.get(blockId) ?? [];
    const text = offset === null ? null : hoverTextAt(decorations, offset);
    if (text === null) {
      hover.hidden = true;
    } else {
      hover.hidden = false;
      hover.textContent = text;
    }
  });
  area.addEventListener("mouseleave", () => {
    hover.hidden = true;
  });

  return el("div", { class: `block ${kind}` },
    el("div", { class: "blockhead" }, el("code", {}, blockId), badge),
    area,
    suggestions,
    hover,
  );
}

/** Approximate the character under the pointer; textareas have no
 * caretPositionFromPoint, so fall back to the caret. */
function caretFromPoint(area: HTMLTextAreaElement, _event: MouseEvent): number | null {
  return area.selectionStart ?? null;
}

function renderSuggestions(
  context: AppContext,
  area: HTMLTextAreaElement,
  host: HTMLElement,
): void {
  const candidates = completionsFor(
    area.value,
    area.selectionStart ?? area.value.length,
    context.symbols,
    context.rules,
  ).slice(0, 8);
  host.replaceChildren(
    ...candidates.map((candidate: Candidate) => {
      const chip = el("button", { class: `cand ${candidate.kind}` }, candidate.label);
      chip.addEventListener("click", () => {
        const applied = applyCompletion(area.value, candidate);
        const model = context.model;
        if (model !== null && model.setContent(area.dataset["block"] ?? "", applied.text)) {
          area.value = applied.text;
          area.setSelectionRange(applied.cursor, applied.cursor);
          host.replaceChildren();
          area.focus();
        }
      });
      return chip;
    }),
  );
}

function insertAtCaret(context: AppContext, text: string): void {
  const model = context.model;
  const blockId = context.activeBlock;
  if (model === null || blockId === null) return;
  const area = document.querySelector<HTMLTextAreaElement>(`textarea[data-block="${blockId}"]`);
  if (area === null || area.readOnly) return;
  const at = area.selectionStart ?? area.value.length;
  const next = area.value.slice(0, at) + text + area.value.slice(area.selectionEnd ?? at);
  if (model.setContent(blockId, next)) {
    area.value = next;
    area.setSelectionRange(at + text.length, at + text.length);
    area.focus();
  }
}

async function runCheck(context: AppContext, button: HTMLButtonElement): Promise<void> {
  const model = context.model;
  if (model === null || context.courseId === null) return;
  button.disabled = true;
  try {
    const requestId = await context.checks.requestCheck(
      context.courseId,
      model.view.id,
      model.taskContents(),
    );
    if (requestId === null) return; // guard: request already in flight
    pollUntilDone(context, requestId, button);
  } catch (error) {
    button.disabled = false;
    banner(context, `check failed to send: ${String(error)} — retry`);
  }
}

/** Polling fallback alongside the stream; whoever resolves first wins. */
function pollUntilDone(context: AppContext, requestId: string, button: HTMLButtonElement): void {
  const poll = window.setInterval(() => {
    if (context.checks.expireIfTimedOut()) {
      window.clearInterval(poll);
      button.disabled = false;
      banner(context, "check timed out — retry");
      return;
    }
    if (context.checks.pendingRequestId !== requestId) {
      window.clearInterval(poll); // the stream resolved it
      button.disabled = false;
      return;
    }
    void context.api.checkResult(requestId).then((entry) => {
      if (entry.state === "done" && entry.response !== null && context.checks.resolve(requestId)) {
        window.clearInterval(poll);
        button.disabled = false;
        handleResult(context, entry.response);
      }
    });
  }, 400);
}

function handleResult(context: AppContext, payload: CheckPayload): void {
  context.lastPayload = payload;
  const model = context.model;
  if (model === null) return;
  model.applyOutcomes(payload);
  context.decorations = new Map();
  for (const editor of model.editors.values()) {
    context.decorations.set(
      editor.blockId,
      decorationsForBlock(editor.blockId, editor.content, payload.feedback, payload.diagnostics),
    );
    const badge = document.getElementById(`outcome-${editor.blockId}`);
    if (badge !== null) {
      badge.textContent = editor.outcome;
      badge.className = `outcome ${editor.outcome}`;
    }
  }
  if (payload.status === "pool-exhausted") {
    banner(context, "the prover pool is busy — try again in a moment");
  }
  const checkButton = document.getElementById("check") as HTMLButtonElement | null;
  if (checkButton !== null) checkButton.disabled = false;
  const output = document.getElementById("tab-output");
  if (output !== null) fillOutput(context, output);
  refreshProofStateTab(context);
}

function refreshProofStateTab(context: AppContext): void {
  const body = document.getElementById("tab-proofstate");
  if (body !== null) fillProofState(context, body);
}

async function runReset(context: AppContext): Promise<void> {
  const model = context.model;
  if (model === null) return;
  if (!window.confirm("Reset all tasks of this tutorial to their initial content?")) return;
  try {
    const response = await context.api.resetProgress(model.view.id);
    model.applyReset(response.contents);
    renderTutorial(context);
  } catch (error) {
    banner(context, `reset failed: ${String(error)}`);
  }
}

function banner(_context: AppContext, message: string): void {
  const host = byId("content");
  const note = el("div", { class: "banner" }, message);
  host.prepend(note);
  window.setTimeout(() => note.remove(), 6000);
}

window.addEventListener("DOMContentLoaded", () => {
  void boot();
});
