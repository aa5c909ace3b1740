/** Inline decorations: block-local feedback spans with hover text.
 *
 * The server delivers block-local byte spans; this module converts them to
 * JS string indices and owns the hover content. The client does no span
 * arithmetic against hidden content — tutorial-level items never reach an
 * editor and are rendered as banners instead.
 */

import type { BlockDiagnostic, FeedbackItem } from "./types.js";
import { byteToCharIndex } from "./utf8.js";

export interface EditorDecoration {
  startChar: number;
  endChar: number;
  severity: string;
  hoverText: string;
}

export function buildHover(item: FeedbackItem): string {
  const lines = [`[${item.source_label}] ${item.raw_text}`];
  for (const hint of item.hints) lines.push(`• ${hint}`);
  return lines.join("\n");
}

export function decorationsForBlock(
  blockId: string,
  content: string,
  feedback: readonly FeedbackItem[],
  diagnostics: readonly BlockDiagnostic[] = [],
): EditorDecoration[] {
  const out: EditorDecoration[] = [];
  for (const item of feedback) {
    if (item.origin_kind !== "block" || item.block_id !== blockId || !item.local_span) continue;
    out.push({
      startChar: byteToCharIndex(content, item.local_span.start),
      endChar: byteToCharIndex(content, item.local_span.end),
      severity: item.severity,
      hoverText: buildHover(item),
    });
  }
  for (const diag of diagnostics) {
    if (diag.block_id !== blockId) continue;
    out.push({
      startChar: byteToCharIndex(content, diag.span.start),
      endChar: byteToCharIndex(content, diag.span.end),
      severity: diag.severity,
      hoverText: `[linter] ${diag.message}`,
    });
  }
  out.sort((a, b) => a.startChar - b.startChar || a.endChar - b.endChar);
  return out;
}

/** Hover text at a character offset, or null outside any decoration.
 * Zero-length decorations match at their exact position. */
export function hoverTextAt(
  decorations: readonly EditorDecoration[],
  charOffset: number,
): string | null {
  for (const deco of decorations) {
    const inside =
      deco.startChar === deco.endChar
        ? charOffset === deco.startChar
        : charOffset >= deco.startChar && charOffset < deco.endChar;
    if (inside) return deco.hoverText;
  }
  return null;
}

/** Items that belong to no editor (hidden-content failures etc.). */
export function tutorialLevelItems(feedback: readonly FeedbackItem[]): FeedbackItem[] {
  return feedback.filter((item) => item.origin_kind === "tutorial");
}
