"""Character-level edit scripts: retain / insert / delete.

Scripts are computed from a longest-common-subsequence alignment
(difflib.SequenceMatcher). The contract is correctness, not minimality:
applying the script to the old text must reproduce the new text exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from difflib import SequenceMatcher
from typing import Iterable, Union


@dataclass(frozen=True)
class Retain:
    length: int


@dataclass(frozen=True)
class Insert:
    text: str


@dataclass(frozen=True)
class Delete:
    length: int


EditOp = Union[Retain, Insert, Delete]


class EditScriptError(ValueError):
    """Script does not fit the text it is applied to."""


def compute_edit_script(old: str, new: str) -> list[EditOp]:
    """An edit script transforming ``old`` into ``new``."""
    ops: list[EditOp] = []
    matcher = SequenceMatcher(a=old, b=new, autojunk=False)
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            ops.append(Retain(i2 - i1))
        elif tag == "insert":
            ops.append(Insert(new[j1:j2]))
        elif tag == "delete":
            ops.append(Delete(i2 - i1))
        else:  # replace
            ops.append(Delete(i2 - i1))
            ops.append(Insert(new[j1:j2]))
    return ops


def apply_edit_script(base: str, ops: Iterable[EditOp]) -> str:
    """Apply a script; raises EditScriptError when it does not cover base."""
    out: list[str] = []
    pos = 0
    for op in ops:
        if isinstance(op, Retain):
            if pos + op.length > len(base):
                raise EditScriptError(f"retain {op.length} at {pos} exceeds text of {len(base)}")
            out.append(base[pos : pos + op.length])
            pos += op.length
        elif isinstance(op, Delete):
            if pos + op.length > len(base):
                raise EditScriptError(f"delete {op.length} at {pos} exceeds text of {len(base)}")
            pos += op.length
        else:
            out.append(op.text)
    if pos != len(base):
        raise EditScriptError(f"script consumed {pos} of {len(base)} characters")
    return "".join(out)


def is_noop(ops: Iterable[EditOp]) -> bool:
    return all(isinstance(op, Retain) for op in ops)


def ops_to_json(ops: Iterable[EditOp]) -> list[dict]:
    """Wire form: one single-key object per operation (see docs/export-format.md)."""
    out: list[dict] = []
    for op in ops:
        if isinstance(op, Retain):
            out.append({"retain": op.length})
        elif isinstance(op, Delete):
            out.append({"delete": op.length})
        else:
            out.append({"insert": op.text})
    return out


def ops_from_json(data: Iterable[dict]) -> list[EditOp]:
    ops: list[EditOp] = []
    for item in data:
        if "retain" in item:
            ops.append(Retain(int(item["retain"])))
        elif "insert" in item:
            ops.append(Insert(str(item["insert"])))
        elif "delete" in item:
            ops.append(Delete(int(item["delete"])))
        else:
            raise EditScriptError(f"unknown edit operation {item!r}")
    return ops
