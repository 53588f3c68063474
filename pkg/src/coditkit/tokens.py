"""Tokenizer abstraction and token-sequence primitives.

A token sequence is a plain ``list[str]``; every other module operates on
these lists. Two tokenizer kinds are supported: a whitespace tokenizer (the
default) and a byte-pair-encoding tokenizer loaded from vocabulary/merge
files. Both keep the reserved marker tokens atomic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingMarker, ParseError, UnknownToken

TokenSeq = list[str]

MASK = "[MASK]"
SEPARATOR = "<s>"
INSERT = "<Insert>"
INSERT_END = "<InsertEnd>"
DELETE = "<Delete>"
DELETE_END = "<DeleteEnd>"
REPLACE_OLD = "<ReplaceOld>"
REPLACE_NEW = "<ReplaceNew>"
REPLACE_END = "<ReplaceEnd>"
KEEP = "<Keep>"
KEEP_END = "<KeepEnd>"

OPERATION_MARKERS = (
    INSERT,
    INSERT_END,
    DELETE,
    DELETE_END,
    REPLACE_OLD,
    REPLACE_NEW,
    REPLACE_END,
    KEEP,
    KEEP_END,
)

# Every reserved token that must survive tokenization unsplit and must never
# occur in sanitized corpus text.
ALL_MARKERS = (MASK, SEPARATOR) + OPERATION_MARKERS

_MARKER_SET = frozenset(ALL_MARKERS)

_ESCAPE_RE = re.compile("|".join(re.escape(m) for m in ALL_MARKERS))


def _escape_marker(marker: str) -> str:
    return re.sub(r"([<>\[\]])", r"\\\1", marker)


def sanitize_text(text: str) -> str:
    """Escape literal marker occurrences so corpus text cannot fake plan syntax."""
    return _ESCAPE_RE.sub(lambda m: _escape_marker(m.group(0)), text)


@dataclass(frozen=True)
class Tokenizer:
    """Immutable tokenizer; safe to share across workers.

    ``kind`` is "whitespace" or "bpe". The vocabulary maps token text to id
    (ids are unused by the edit algebra but kept for model tooling). Merge
    rules apply in file order within each whitespace-delimited word.
    """

    kind: str = "whitespace"
    vocab: dict[str, int] = field(default_factory=dict)
    merges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in ("whitespace", "bpe"):
            raise ValueError(f"unknown tokenizer kind: {self.kind!r}")

    @classmethod
    def whitespace(cls) -> "Tokenizer":
        return cls(kind="whitespace")


def _bpe_word(word: str, merges: tuple[tuple[str, str], ...]) -> list[str]:
    symbols = list(word)
    for left, right in merges:
        i = 0
        merged: list[str] = []
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
                merged.append(left + right)
                i += 2
            else:
                merged.append(symbols[i])
                i += 1
        symbols = merged
    return symbols


def tokenize(text: str, tok: Tokenizer | None = None) -> TokenSeq:
    """Split raw text into tokens; marker tokens always come out whole."""
    tok = tok or Tokenizer.whitespace()
    words = text.split()
    if tok.kind == "whitespace":
        return words
    out: TokenSeq = []
    for i, word in enumerate(words):
        if i > 0:
            out.append(" ")
        if word in _MARKER_SET:
            out.append(word)
        else:
            out.extend(_bpe_word(word, tok.merges))
    return out


def detokenize(seq: TokenSeq, tok: Tokenizer | None = None) -> str:
    """Inverse of tokenize for producible token sequences."""
    tok = tok or Tokenizer.whitespace()
    if tok.kind == "whitespace":
        for t in seq:
            if not t or t.split() != [t]:
                raise UnknownToken(t)
        return " ".join(seq)
    for t in seq:
        if not t or (t != " " and any(c.isspace() for c in t)):
            raise UnknownToken(t)
    return "".join(seq)


def load_tokenizer(vocab_file: str | Path, merges_file: str | Path | None = None) -> Tokenizer:
    """Build a tokenizer from a vocabulary file and optional merges file.

    Vocabulary: one token per line, line number = id. Merges: one
    "left right" pair per line, priority = line order. A merges file selects
    the bpe kind; without one the tokenizer splits on whitespace.
    """
    vocab: dict[str, int] = {}
    with open(vocab_file, encoding="utf-8") as f:
        for i, line in enumerate(f):
            token = line.rstrip("\n")
            if not token:
                raise ParseError(f"{vocab_file}: empty token at line {i + 1}")
            if token in vocab:
                raise ParseError(f"{vocab_file}: duplicate token {token!r} at line {i + 1}")
            vocab[token] = i
    for marker in ALL_MARKERS:
        if marker not in vocab:
            raise MissingMarker(marker)
    if merges_file is None:
        return Tokenizer(kind="whitespace", vocab=vocab)
    merges: list[tuple[str, str]] = []
    with open(merges_file, encoding="utf-8") as f:
        for i, line in enumerate(f):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ParseError(f"{merges_file}: bad merge rule at line {i + 1}: {line!r}")
            merges.append((parts[0], parts[1]))
    return Tokenizer(kind="bpe", vocab=vocab, merges=tuple(merges))
