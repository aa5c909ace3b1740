/** Autocomplete for the word or symbol sequence left of the cursor.
 *
 * Three sources, in display order: symbols (abbreviations like /\ expand
 * to glyphs), keywords, and rule names from the course catalog. An empty
 * prefix yields nothing, so completion never floods an idle editor.
 * Offsets here are JS string indices; no server round-trip is involved.
 */
/** Command and minor keywords offered by completion. Presentation aid
 * only; the server stays the authority on what is legal. */
export const KEYWORDS = [
    "apply", "assume", "by", "case", "datatype", "done", "fix", "from",
    "fun", "have", "hence", "imports", "lemma", "moreover", "next", "obtain",
    "proof", "qed", "show", "sorry", "theorem", "then", "thus", "ultimately",
    "unfolding", "using", "where",
];
const WORD = /[A-Za-z0-9_']/;
const SYMBOLIC = /[\\\/<>=+\-*!?@^&|~#$%.]/;
/** The contiguous word or symbol run ending at the cursor. */
export function prefixAt(text, cursor) {
    if (cursor <= 0 || cursor > text.length)
        return null;
    const before = text[cursor - 1];
    if (before === undefined)
        return null;
    let cls;
    if (WORD.test(before))
        cls = WORD;
    else if (SYMBOLIC.test(before))
        cls = SYMBOLIC;
    else
        return null;
    let start = cursor;
    while (start > 0) {
        const ch = text[start - 1];
        if (ch === undefined || !cls.test(ch))
            break;
        start -= 1;
    }
    return { start, prefix: text.slice(start, cursor) };
}
export function completionsFor(text, cursor, symbols, rules = [], keywords = KEYWORDS) {
    const at = prefixAt(text, cursor);
    if (at === null || at.prefix.length === 0)
        return [];
    const { start, prefix } = at;
    const lower = prefix.toLowerCase();
    const out = [];
    const seen = new Set();
    const push = (kind, insert, label) => {
        const key = `${kind}:${insert}`;
        if (seen.has(key))
            return;
        seen.add(key);
        out.push({ replaceStart: start, replaceEnd: cursor, insert, label, kind });
    };
    for (const sym of symbols) {
        if (sym.abbreviation !== null && sym.abbreviation.startsWith(prefix)) {
            push("symbol", sym.glyph, `${sym.abbreviation} → ${sym.glyph}`);
        }
        else if (prefix.length >= 2 && sym.escape.startsWith(prefix)) {
            push("symbol", sym.glyph, `${sym.escape} → ${sym.glyph}`);
        }
        else if (/[a-z]/i.test(prefix) && sym.name.toLowerCase().startsWith(lower)) {
            push("symbol", sym.glyph, `${sym.name} → ${sym.glyph}`);
        }
    }
    for (const word of keywords) {
        if (word.startsWith(prefix))
            push("keyword", word, word);
    }
    for (const rule of rules) {
        if (rule.display_name.startsWith(prefix)) {
            push("rule", rule.display_name, rule.display_name);
        }
        else if (rule.prover_name.startsWith(prefix)) {
            push("rule", rule.display_name, `${rule.prover_name} → ${rule.display_name}`);
        }
    }
    return out;
}
/** Apply a candidate, returning the new text and cursor position. */
export function applyCompletion(text, candidate) {
    const next = text.slice(0, candidate.replaceStart) +
        candidate.insert +
        text.slice(candidate.replaceEnd);
    return { text: next, cursor: candidate.replaceStart + candidate.insert.length };
}
