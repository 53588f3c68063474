"""Exception types shared across the toolkit.

Every error raised by library code derives from CoditkitError so the CLI can
map any module failure to a single structured exit path.
"""

from __future__ import annotations


class CoditkitError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


class UnknownToken(CoditkitError):
    """A token cannot be realized by the tokenizer."""

    code = "unknown-token"

    def __init__(self, token: str):
        super().__init__(f"token cannot be realized: {token!r}")
        self.token = token


class MissingMarker(CoditkitError):
    """A reserved marker is absent from a vocabulary file."""

    code = "missing-marker"

    def __init__(self, marker: str):
        super().__init__(f"vocabulary is missing reserved marker {marker!r}")
        self.marker = marker


class ParseError(CoditkitError):
    """A tokenizer/config file is malformed."""

    code = "parse-error"


class MalformedPlan(CoditkitError):
    """A serialized edit plan violates the plan grammar."""

    code = "malformed-plan"

    def __init__(self, position: int, reason: str):
        super().__init__(f"malformed plan at token {position}: {reason}")
        self.position = position
        self.reason = reason


class SpanNotFound(CoditkitError):
    """An operation's old span could not be located in the source."""

    code = "span-not-found"

    def __init__(self, op_index: int, detail: str = ""):
        msg = f"operation {op_index}: old span not found"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.op_index = op_index


class AmbiguousInsert(CoditkitError):
    """Strict application hit an insert with no anchoring context."""

    code = "ambiguous-insert"

    def __init__(self, op_index: int):
        super().__init__(f"operation {op_index}: insert position is ambiguous")
        self.op_index = op_index


class EmptyCorpus(CoditkitError):
    """An operation that needs at least one example got none."""

    code = "empty-corpus"


class EmptyStats(CoditkitError):
    """No edits were observed, so span statistics are undefined."""

    code = "empty-stats"


class SpecOutOfBounds(CoditkitError):
    """A noise spec does not fit the sequence it is applied to."""

    code = "spec-out-of-bounds"


class LengthMismatch(CoditkitError):
    """Two aligned corpora have different lengths."""

    code = "length-mismatch"

    def __init__(self, what: str, left: int, right: int):
        super().__init__(f"{what}: {left} vs {right}")


class ZeroLength(CoditkitError):
    """Length normalization needs a strictly positive length."""

    code = "zero-length"


class MissingCrossScore(CoditkitError):
    """A candidate lacks the other model's score, so it cannot be reranked."""

    code = "missing-cross-score"

    def __init__(self, index: int):
        super().__init__(f"candidate {index} has no cross-model score")
        self.index = index
