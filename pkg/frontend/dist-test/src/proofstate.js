/** ProofState tab: show the prover state for the caret position of the
 * active editor — the state whose position is the greatest one at or
 * before the caret within that block. */
import { charToByteIndex } from "./utf8.js";
export function stateForCaret(states, blockId, content, caretChar) {
    const caretByte = charToByteIndex(content, caretChar);
    let best = null;
    for (const state of states) {
        if (state.block_id !== blockId || state.position > caretByte)
            continue;
        if (best === null || state.position > best.position)
            best = state;
    }
    return best;
}
export function renderPlaceholder() {
    return "No proof state at this position — run a check and place the caret after a proof step.";
}
