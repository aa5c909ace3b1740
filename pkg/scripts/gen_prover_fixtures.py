#!/usr/bin/env python3
"""Regenerate tutorials/fixtures/conjunction_prover.json.

The fixture file keys canned prover responses by the SHA-256 of the
assembled theory text for the bundled correct and broken solutions of the
conjunction tutorial. Rerun after touching the tutorial file or the
solutions; the end-to-end tests assert the digests stay in sync.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from proofbench.prover.mock_server import theory_digest  # noqa: E402
from proofbench.spans import byte_len  # noqa: E402
from proofbench.tutorial import assemble_theory, load_tutorial_file, new_state  # noqa: E402


def build_state(tutorial, contents):
    state = new_state(tutorial, "fixture-user")
    for block_id, text in contents.items():
        state = state.with_content(block_id, text)
    return state


def main() -> int:
    tutorial = load_tutorial_file(ROOT / "tutorials" / "conjunction.toml")
    solutions = json.loads((ROOT / "tutorials" / "solutions" / "conjunction.json").read_text("utf-8"))

    fixtures: dict[str, dict] = {}

    correct = assemble_theory(tutorial, build_state(tutorial, solutions["correct"]))
    fixtures[theory_digest(correct.text)] = {
        "status": "ok",
        "messages": [],
        "proof_states": [],
    }

    broken = assemble_theory(tutorial, build_state(tutorial, solutions["broken"]))
    # error span: the `by` keyword of the broken task, in theory offsets
    task_segment = next(s for s in broken.segments if s.block_id == "task-swap")
    content = solutions["broken"]["task-swap"]
    local = content.index("by")
    start = task_segment.span.start + byte_len(content[:local])
    end = start + byte_len("by")
    fixtures[theory_digest(broken.text)] = {
        "status": "failed",
        "messages": [
            {
                "severity": "error",
                "start": start,
                "end": end,
                "text": (
                    "Failed to apply initial proof method:\n"
                    "goal (1 subgoal):\n 1. A ∧ B ⟹ B ∧ A"
                ),
            }
        ],
        "proof_states": [],
    }

    out = ROOT / "tutorials" / "fixtures" / "conjunction_prover.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixtures, indent=2, ensure_ascii=False) + "\n", "utf-8")
    print(f"wrote {out} ({len(fixtures)} entries)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
