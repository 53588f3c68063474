"""Edit plans: computation, serialization, parsing, application, validation.

An edit plan is an ordered list of Insert/Delete/Replace operations over token
spans (plus Keep in the fully annotated form used for fine-tuning inputs).
Plans computed here carry source positions; plans parsed back from their
serialized token form do not, because the grammar has no position slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _diffkern as kern
from .errors import AmbiguousInsert, MalformedPlan, SpanNotFound
from .tokens import (
    DELETE,
    DELETE_END,
    INSERT,
    INSERT_END,
    KEEP,
    KEEP_END,
    REPLACE_END,
    REPLACE_NEW,
    REPLACE_OLD,
    TokenSeq,
)

BACKEND_LONGEST_MATCH = "contiguous-longest-match"
BACKEND_MINIMAL = "minimal-levenshtein"
BACKENDS = (BACKEND_LONGEST_MATCH, BACKEND_MINIMAL)

POLICY_POSITIONAL = "positional"
POLICY_LEFTMOST = "leftmost-cursor"
POLICY_STRICT = "strict"
POLICIES = (POLICY_POSITIONAL, POLICY_LEFTMOST, POLICY_STRICT)


class OpKind(enum.Enum):
    INSERT = "insert"
    DELETE = "delete"
    REPLACE = "replace"
    KEEP = "keep"


@dataclass(frozen=True)
class EditOperation:
    kind: OpKind
    old: tuple[str, ...]
    new: tuple[str, ...]
    position: int | None = None

    def __post_init__(self):
        if self.kind is OpKind.INSERT and (self.old or not self.new):
            raise ValueError("insert needs an empty old span and a non-empty new span")
        if self.kind is OpKind.DELETE and (not self.old or self.new):
            raise ValueError("delete needs a non-empty old span and an empty new span")
        if self.kind is OpKind.REPLACE and (not self.old or not self.new):
            raise ValueError("replace needs non-empty old and new spans")
        if self.kind is OpKind.KEEP and (not self.old or self.old != self.new):
            raise ValueError("keep needs identical non-empty old and new spans")
        if self.position is not None and self.position < 0:
            raise ValueError("source position must be non-negative")


@dataclass(frozen=True)
class EditPlan:
    operations: tuple[EditOperation, ...] = ()

    def __post_init__(self):
        prev = None
        for op in self.operations:
            if op.position is None:
                continue
            if prev is not None and op.position < prev:
                raise ValueError("positional operations must be ordered by source position")
            prev = op.position

    @property
    def positional(self) -> bool:
        return all(op.position is not None for op in self.operations)

    def __len__(self) -> int:
        return len(self.operations)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    applied_result: TokenSeq | None = None
    divergence_index: int | None = None


def _intern(source: TokenSeq, target: TokenSeq) -> tuple[np.ndarray, np.ndarray, int]:
    ids: dict[str, int] = {}
    a = np.empty(len(source), dtype=np.int32)
    for i, t in enumerate(source):
        a[i] = ids.setdefault(t, len(ids))
    b = np.empty(len(target), dtype=np.int32)
    for i, t in enumerate(target):
        b[i] = ids.setdefault(t, len(ids))
    return a, b, len(ids)


def _opcodes_longest_match(source: TokenSeq, target: TokenSeq) -> list[tuple[str, int, int, int, int]]:
    """difflib-style opcodes from recursive longest matching blocks."""
    a, b, nsym = _intern(source, target)
    raw = kern.matching_blocks(a, b, nsym)
    blocks = sorted((int(r[0]), int(r[1]), int(r[2])) for r in raw)
    # Merge blocks that are adjacent in both sequences.
    merged: list[list[int]] = []
    for i1, j1, k1 in blocks:
        if merged and merged[-1][0] + merged[-1][2] == i1 and merged[-1][1] + merged[-1][2] == j1:
            merged[-1][2] += k1
        else:
            merged.append([i1, j1, k1])
    merged.append([len(source), len(target), 0])
    opcodes = []
    i = j = 0
    for ai, bj, size in merged:
        if i < ai and j < bj:
            opcodes.append(("replace", i, ai, j, bj))
        elif i < ai:
            opcodes.append(("delete", i, ai, j, bj))
        elif j < bj:
            opcodes.append(("insert", i, ai, j, bj))
        if size:
            opcodes.append(("equal", ai, ai + size, bj, bj + size))
        i, j = ai + size, bj + size
    return opcodes


def _opcodes_minimal(source: TokenSeq, target: TokenSeq) -> list[tuple[str, int, int, int, int]]:
    """Opcodes from the minimal-Levenshtein step sequence."""
    a, b, _ = _intern(source, target)
    steps = kern.levenshtein_steps(a, b)
    tags = {kern.STEP_MATCH: "equal", kern.STEP_DELETE: "delete",
            kern.STEP_INSERT: "insert", kern.STEP_REPLACE: "replace"}
    opcodes = []
    i = j = 0
    k = 0
    n = len(steps)
    while k < n:
        step = steps[k]
        run = k
        while run < n and steps[run] == step:
            run += 1
        count = run - k
        tag = tags[int(step)]
        if tag == "equal" or tag == "replace":
            opcodes.append((tag, i, i + count, j, j + count))
            i += count
            j += count
        elif tag == "delete":
            opcodes.append((tag, i, i + count, j, j))
            i += count
        else:
            opcodes.append((tag, i, i, j, j + count))
            j += count
        k = run
    return opcodes


def _aligned_operations(source: TokenSeq, target: TokenSeq, backend: str) -> list[EditOperation]:
    if backend == BACKEND_LONGEST_MATCH:
        opcodes = _opcodes_longest_match(source, target)
    elif backend == BACKEND_MINIMAL:
        opcodes = _opcodes_minimal(source, target)
    else:
        raise ValueError(f"unknown diff backend: {backend!r}")
    ops = []
    for tag, i1, i2, j1, j2 in opcodes:
        old = tuple(source[i1:i2])
        new = tuple(target[j1:j2])
        if tag == "equal":
            ops.append(EditOperation(OpKind.KEEP, old, new, position=i1))
        elif tag == "replace":
            ops.append(EditOperation(OpKind.REPLACE, old, new, position=i1))
        elif tag == "delete":
            ops.append(EditOperation(OpKind.DELETE, old, (), position=i1))
        else:
            ops.append(EditOperation(OpKind.INSERT, (), new, position=i1))
    return ops


def _coalesce(ops: list[EditOperation]) -> list[EditOperation]:
    """Merge adjacent same-kind operations whose spans touch."""
    out: list[EditOperation] = []
    for op in ops:
        if out:
            prev = out[-1]
            touching = (
                prev.kind is op.kind
                and prev.position is not None
                and op.position is not None
                and prev.position + len(prev.old) == op.position
            )
            if touching:
                out[-1] = EditOperation(prev.kind, prev.old + op.old, prev.new + op.new, prev.position)
                continue
        out.append(op)
    return out


def compute_edit_script(source: TokenSeq, target: TokenSeq,
                        backend: str = BACKEND_LONGEST_MATCH) -> EditPlan:
    """Positional plan turning source into target; empty iff source == target."""
    aligned = _aligned_operations(source, target, backend)
    edits = _coalesce([op for op in aligned if op.kind is not OpKind.KEEP])
    return EditPlan(tuple(edits))


_OPENERS = {
    INSERT: (OpKind.INSERT, INSERT_END),
    DELETE: (OpKind.DELETE, DELETE_END),
    KEEP: (OpKind.KEEP, KEEP_END),
}

_MARKER_TOKENS = frozenset(
    (INSERT, INSERT_END, DELETE, DELETE_END, REPLACE_OLD, REPLACE_NEW, REPLACE_END, KEEP, KEEP_END)
)


def serialize_plan(plan: EditPlan) -> TokenSeq:
    """Flatten a plan into the marker grammar; source positions are dropped."""
    out: TokenSeq = []
    for op in plan.operations:
        if op.kind is OpKind.REPLACE:
            out.append(REPLACE_OLD)
            out.extend(op.old)
            out.append(REPLACE_NEW)
            out.extend(op.new)
            out.append(REPLACE_END)
        elif op.kind is OpKind.INSERT:
            out.append(INSERT)
            out.extend(op.new)
            out.append(INSERT_END)
        elif op.kind is OpKind.DELETE:
            out.append(DELETE)
            out.extend(op.old)
            out.append(DELETE_END)
        else:
            out.append(KEEP)
            out.extend(op.old)
            out.append(KEEP_END)
    return out


def _take_span(tokens: TokenSeq, pos: int, terminators: tuple[str, ...]) -> tuple[tuple[str, ...], int, str]:
    span: list[str] = []
    while pos < len(tokens):
        tok = tokens[pos]
        if tok in terminators:
            return tuple(span), pos + 1, tok
        if tok in _MARKER_TOKENS:
            raise MalformedPlan(pos, f"unexpected marker {tok} inside a span")
        span.append(tok)
        pos += 1
    raise MalformedPlan(len(tokens), "unterminated operation")


def parse_plan(tokens: TokenSeq) -> EditPlan:
    """Recover a (non-positional) plan from its serialized token form."""
    ops: list[EditOperation] = []
    pos = 0
    while pos < len(tokens):
        opener = tokens[pos]
        start = pos
        pos += 1
        if opener == REPLACE_OLD:
            old, pos, _ = _take_span(tokens, pos, (REPLACE_NEW,))
            if not old:
                raise MalformedPlan(start, "replace has an empty old span")
            new, pos, _ = _take_span(tokens, pos, (REPLACE_END,))
            if not new:
                raise MalformedPlan(start, "replace has an empty new span")
            ops.append(EditOperation(OpKind.REPLACE, old, new))
        elif opener in _OPENERS:
            kind, end = _OPENERS[opener]
            span, pos, _ = _take_span(tokens, pos, (end,))
            if not span:
                raise MalformedPlan(start, f"{opener} has an empty span")
            if kind is OpKind.INSERT:
                ops.append(EditOperation(kind, (), span))
            elif kind is OpKind.DELETE:
                ops.append(EditOperation(kind, span, ()))
            else:
                ops.append(EditOperation(kind, span, span))
        else:
            raise MalformedPlan(start, f"token {opener!r} outside any operation")
    return EditPlan(tuple(ops))


def _splice_at(out: TokenSeq, source: TokenSeq, op: EditOperation,
               op_index: int, cursor: int, pos: int) -> int:
    """Copy source up to pos, validate the old span there, emit the new span."""
    if pos < cursor or pos > len(source):
        raise SpanNotFound(op_index, f"position {pos} not reachable")
    if tuple(source[pos:pos + len(op.old)]) != op.old:
        raise SpanNotFound(op_index, f"old span does not match source at {pos}")
    out.extend(source[cursor:pos])
    out.extend(op.new)
    return pos + len(op.old)


def apply_plan(plan: EditPlan, source: TokenSeq, policy: str = POLICY_LEFTMOST) -> TokenSeq:
    """Apply a plan to a source sequence.

    positional: splice every operation at its recorded position (the plan
    must be positional). leftmost-cursor: operations that carry a position
    are spliced exactly; position-free Delete/Replace/Keep spans are matched
    at the leftmost occurrence at or after a cursor, and position-free
    Inserts land at the current cursor. strict: like leftmost-cursor, but a
    position-free Insert with no anchoring operation before it is an error.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown apply policy: {policy!r}")
    if policy == POLICY_POSITIONAL and not plan.positional:
        raise ValueError("positional policy requires a positional plan")
    out: TokenSeq = []
    cursor = 0
    anchored = False
    for idx, op in enumerate(plan.operations):
        if op.position is not None:
            cursor = _splice_at(out, source, op, idx, cursor, op.position)
            anchored = True
        elif op.kind is OpKind.INSERT:
            if policy == POLICY_STRICT and not anchored:
                raise AmbiguousInsert(idx)
            out.extend(op.new)
        else:
            found = -1
            for i in range(cursor, len(source) - len(op.old) + 1):
                if tuple(source[i:i + len(op.old)]) == op.old:
                    found = i
                    break
            if found < 0:
                raise SpanNotFound(idx)
            cursor = _splice_at(out, source, op, idx, cursor, found)
            anchored = True
    out.extend(source[cursor:])
    return out


def check_consistency(plan: EditPlan, source: TokenSeq, target: TokenSeq) -> ConsistencyReport:
    """Report whether applying the plan to the source reproduces the target.

    Application errors are folded into an inconsistent report rather than
    raised, so fallacious plans never crash evaluation.
    """
    try:
        applied = apply_plan(plan, source, POLICY_LEFTMOST)
    except (SpanNotFound, AmbiguousInsert):
        return ConsistencyReport(consistent=False)
    if applied == target:
        return ConsistencyReport(consistent=True, applied_result=applied)
    limit = min(len(applied), len(target))
    divergence = limit
    for i in range(limit):
        if applied[i] != target[i]:
            divergence = i
            break
    return ConsistencyReport(consistent=False, applied_result=applied, divergence_index=divergence)


def to_keep_annotated(source: TokenSeq, target: TokenSeq,
                      backend: str = BACKEND_LONGEST_MATCH) -> TokenSeq:
    """Serialize the full alignment of two sequences, Keep spans included."""
    aligned = _coalesce(_aligned_operations(source, target, backend))
    return serialize_plan(EditPlan(tuple(aligned)))
