"""Fine-tuning input construction, output post-processing, copy rate.

Input segments are joined with the "<s>" separator; the segment count is
fixed per task so the layout is unambiguous. The editable portion (what a
lazy model would copy verbatim) is task-defined and drives copy_rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .edits import BACKEND_LONGEST_MATCH, to_keep_annotated
from .errors import LengthMismatch
from .tokens import SEPARATOR, TokenSeq


@dataclass(frozen=True)
class CommentUpdateExample:
    old_comment: TokenSeq
    old_code: TokenSeq
    new_code: TokenSeq
    new_comment: TokenSeq

    def __post_init__(self):
        if not self.old_comment:
            raise ValueError("old_comment must be non-empty")
        if not self.old_code or not self.new_code:
            raise ValueError("old_code and new_code must be non-empty")


@dataclass(frozen=True)
class BugFixExample:
    buggy: TokenSeq
    guidance: TokenSeq
    context: TokenSeq
    fixed: TokenSeq

    def __post_init__(self):
        if not self.buggy:
            raise ValueError("buggy code must be non-empty")


@dataclass(frozen=True)
class CodeReviewExample:
    code_before: TokenSeq
    review_comment: TokenSeq
    code_after: TokenSeq

    def __post_init__(self):
        if not self.code_before or not self.review_comment:
            raise ValueError("code_before and review_comment must be non-empty")


def build_comment_update_input(ex: CommentUpdateExample,
                               backend: str = BACKEND_LONGEST_MATCH) -> TokenSeq:
    """old comment, separator, Keep-annotated code diff."""
    return list(ex.old_comment) + [SEPARATOR] + to_keep_annotated(ex.old_code, ex.new_code, backend)


def build_bugfix_input(ex: BugFixExample) -> TokenSeq:
    """buggy code, separator, guidance, separator, context (segments may be empty)."""
    return list(ex.buggy) + [SEPARATOR] + list(ex.guidance) + [SEPARATOR] + list(ex.context)


def build_code_review_input(ex: CodeReviewExample) -> TokenSeq:
    """code before review, separator, reviewer comment."""
    return list(ex.code_before) + [SEPARATOR] + list(ex.review_comment)


class ExtractedTarget(NamedTuple):
    tokens: TokenSeq
    missing_separator: bool


def extract_target(model_output: TokenSeq) -> ExtractedTarget:
    """Tokens strictly after the first separator; flagged fallback without one.

    Malformed outputs still need scoring, so a missing separator is reported
    rather than raised and the whole sequence is returned.
    """
    for i, tok in enumerate(model_output):
        if tok == SEPARATOR:
            return ExtractedTarget(list(model_output[i + 1:]), False)
    return ExtractedTarget(list(model_output), True)


def copy_rate(predictions: list[TokenSeq], editable_inputs: list[TokenSeq]) -> float:
    """Fraction of predictions that copy the editable input token-for-token."""
    if len(predictions) != len(editable_inputs):
        raise LengthMismatch("predictions vs editable inputs", len(predictions), len(editable_inputs))
    if not predictions:
        return 0.0
    copied = sum(1 for p, s in zip(predictions, editable_inputs) if list(p) == list(s))
    return copied / len(predictions)


@dataclass(frozen=True)
class TaskSpec:
    """Field layout of one downstream task's JSONL records."""

    name: str
    fields: tuple[str, ...]
    editable_field: str
    reference_field: str


TASKS = {
    "comment-update": TaskSpec(
        name="comment-update",
        fields=("old_comment", "old_code", "new_code", "new_comment"),
        editable_field="old_comment",
        reference_field="new_comment",
    ),
    "bugfix": TaskSpec(
        name="bugfix",
        fields=("buggy", "guidance", "context", "fixed"),
        editable_field="buggy",
        reference_field="fixed",
    ),
    "code-review": TaskSpec(
        name="code-review",
        fields=("code_before", "review_comment", "code_after"),
        editable_field="code_before",
        reference_field="code_after",
    ),
}


def build_task_input(task: str, record: dict[str, TokenSeq]) -> TokenSeq:
    """Dispatch to the task's input builder from a tokenized JSONL record."""
    if task == "comment-update":
        return build_comment_update_input(CommentUpdateExample(
            record["old_comment"], record["old_code"], record["new_code"], record["new_comment"]))
    if task == "bugfix":
        return build_bugfix_input(BugFixExample(
            record["buggy"], record["guidance"], record["context"], record["fixed"]))
    if task == "code-review":
        return build_code_review_input(CodeReviewExample(
            record["code_before"], record["review_comment"], record["code_after"]))
    raise ValueError(f"unknown task: {task!r}")
