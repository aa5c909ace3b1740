/** Client-side tutorial state: editor contents, read-only enforcement,
 * outcomes, and the reset flow. */
export class TutorialModel {
    constructor(view) {
        this.view = view;
        this.editors = new Map();
        for (const section of view.sections) {
            for (const block of section.blocks) {
                if (block.kind === "task") {
                    this.editors.set(block.id, {
                        blockId: block.id,
                        readOnly: false,
                        content: block.content ?? block.initial ?? "",
                        outcome: block.outcome ?? "unchecked",
                    });
                }
                else if (block.kind === "example") {
                    this.editors.set(block.id, {
                        blockId: block.id,
                        readOnly: true,
                        content: block.code ?? "",
                        outcome: "unchecked",
                    });
                }
            }
        }
    }
    blocks() {
        return this.view.sections.flatMap((section) => section.blocks);
    }
    editor(blockId) {
        const editor = this.editors.get(blockId);
        if (editor === undefined)
            throw new Error(`no editor for block ${blockId}`);
        return editor;
    }
    /** Read-only editors silently refuse edits (the invariant, enforced in
     * the model so a DOM slip cannot bypass it). Returns acceptance. */
    setContent(blockId, content) {
        const editor = this.editor(blockId);
        if (editor.readOnly)
            return false;
        editor.content = content;
        return true;
    }
    /** Contents of every editable block, the payload of a check request. */
    taskContents() {
        const out = {};
        for (const editor of this.editors.values()) {
            if (!editor.readOnly)
                out[editor.blockId] = editor.content;
        }
        return out;
    }
    applyOutcomes(payload) {
        for (const [blockId, outcome] of Object.entries(payload.outcomes)) {
            const editor = this.editors.get(blockId);
            if (editor !== undefined)
                editor.outcome = outcome;
        }
    }
    /** Apply the server's reset response: initial contents, all unchecked. */
    applyReset(contents) {
        for (const [blockId, content] of Object.entries(contents)) {
            const editor = this.editors.get(blockId);
            if (editor !== undefined && !editor.readOnly) {
                editor.content = content;
                editor.outcome = "unchecked";
            }
        }
    }
}
/** Minimal prose markup: #-headings, *emphasis*, `code` spans. */
export function renderProse(text) {
    const escaped = text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;");
    return escaped
        .split(/\n{2,}/)
        .map((paragraph) => {
        const trimmed = paragraph.trim();
        if (trimmed.startsWith("# ")) {
            return `<h3>${inline(trimmed.slice(2))}</h3>`;
        }
        return `<p>${inline(trimmed)}</p>`;
    })
        .join("\n");
}
function inline(text) {
    return text
        .replace(/`([^`]+)`/g, "<code>$1</code>")
        .replace(/\*([^*\n]+)\*/g, "<em>$1</em>");
}
