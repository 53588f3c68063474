"""Corruption pipeline: span statistics, noise sampling, pretraining triples.

Corruption kinds invert the reconstruction edits: masking a span asks for a
Replace, inserting a stray [MASK] asks for a Delete, and deleting a span asks
for an Insert. Sampling distributions are maximum-entropy choices for the
mean-only statistics (geometric span lengths, Poisson span counts) and are
recorded in run manifests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .edits import BACKEND_LONGEST_MATCH, OpKind, apply_plan, compute_edit_script, serialize_plan
from .errors import EmptyCorpus, EmptyStats, SpecOutOfBounds
from .tokens import MASK, TokenSeq

MIN_PRETRAIN_LEN = 3
MAX_PRETRAIN_LEN = 512

PROB_TOLERANCE = 1e-9


class NoiseKind(enum.Enum):
    MASK_SPAN = "mask-span"
    INSERT_MASK = "insert-mask"
    DELETE_SPAN = "delete-span"


@dataclass(frozen=True)
class NoiseSpan:
    start: int
    length: int
    kind: NoiseKind

    def __post_init__(self):
        if self.start < 0 or self.length < 0:
            raise ValueError("span start/length must be non-negative")
        if self.kind is NoiseKind.INSERT_MASK and self.length != 0:
            raise ValueError("insert-mask spans have length 0")
        if self.kind is not NoiseKind.INSERT_MASK and self.length < 1:
            raise ValueError(f"{self.kind.value} spans need length >= 1")


@dataclass(frozen=True)
class NoiseSpec:
    spans: tuple[NoiseSpan, ...] = ()

    def __post_init__(self):
        end = 0
        for span in self.spans:
            if span.start < end:
                raise ValueError("noise spans must be sorted and non-overlapping")
            end = span.start + span.length


@dataclass(frozen=True)
class SpanStats:
    p_insert: float
    p_delete: float
    p_replace: float
    mean_span_len: float
    mean_spans_per_seq: float

    def __post_init__(self):
        probs = (self.p_insert, self.p_delete, self.p_replace)
        if any(p < 0 or p > 1 for p in probs):
            raise ValueError("operation probabilities must lie in [0, 1]")
        if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
            raise ValueError("operation probabilities must sum to 1")
        if self.mean_span_len <= 0 or self.mean_spans_per_seq <= 0:
            raise ValueError("span statistics means must be positive")

    def to_dict(self) -> dict:
        return {
            "p_insert": self.p_insert,
            "p_delete": self.p_delete,
            "p_replace": self.p_replace,
            "mean_span_len": self.mean_span_len,
            "mean_spans_per_seq": self.mean_spans_per_seq,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpanStats":
        return cls(
            p_insert=float(d["p_insert"]),
            p_delete=float(d["p_delete"]),
            p_replace=float(d["p_replace"]),
            mean_span_len=float(d["mean_span_len"]),
            mean_spans_per_seq=float(d["mean_spans_per_seq"]),
        )


@dataclass(frozen=True)
class PretrainExample:
    id: str
    corrupted: TokenSeq
    edit_plan: TokenSeq
    target: TokenSeq


def compute_span_stats(pairs: list[tuple[TokenSeq, TokenSeq]],
                       backend: str = BACKEND_LONGEST_MATCH) -> SpanStats:
    """Collect edit statistics over (source, target) pairs.

    The span length of an edit is the size of its span in the post-edit
    sequence (old-span size for deletes), matching what the corruption
    sampler consumes. Raises EmptyStats when no pair contains any edit.
    """
    if not pairs:
        raise EmptyCorpus("no pairs to collect statistics from")
    counts = {OpKind.INSERT: 0, OpKind.DELETE: 0, OpKind.REPLACE: 0}
    total_span_tokens = 0
    total_ops = 0
    for source, target in pairs:
        plan = compute_edit_script(source, target, backend)
        for op in plan.operations:
            counts[op.kind] += 1
            total_span_tokens += len(op.new) if op.kind is not OpKind.DELETE else len(op.old)
            total_ops += 1
    if total_ops == 0:
        raise EmptyStats("no edits observed in any pair")
    return SpanStats(
        p_insert=counts[OpKind.INSERT] / total_ops,
        p_delete=counts[OpKind.DELETE] / total_ops,
        p_replace=counts[OpKind.REPLACE] / total_ops,
        mean_span_len=total_span_tokens / total_ops,
        mean_spans_per_seq=total_ops / len(pairs),
    )


# Reconstruction-edit probability -> corruption kind producing that edit.
_KIND_ORDER = (NoiseKind.MASK_SPAN, NoiseKind.INSERT_MASK, NoiseKind.DELETE_SPAN)


def sample_noise_spec(stats: SpanStats, seq_len: int, rng: np.random.Generator) -> NoiseSpec:
    """Draw non-overlapping corruption spans matching the configured statistics.

    Sequences shorter than 2 tokens get an empty spec; drawn span lengths are
    clamped so that at least one original token always survives. Start
    positions are uniform over the valid non-overlapping arrangements.
    """
    if seq_len < 1:
        raise ValueError("seq_len must be >= 1")
    if seq_len < 2:
        return NoiseSpec()
    count = int(rng.poisson(stats.mean_spans_per_seq))
    if count == 0:
        return NoiseSpec()
    probs = (stats.p_replace, stats.p_delete, stats.p_insert)
    p_len = min(1.0, 1.0 / stats.mean_span_len)
    capacity = seq_len - 1
    chosen: list[tuple[NoiseKind, int]] = []
    for _ in range(count):
        kind = _KIND_ORDER[int(rng.choice(3, p=probs))]
        if kind is NoiseKind.INSERT_MASK:
            chosen.append((kind, 0))
            continue
        if capacity < 1:
            continue
        length = min(int(rng.geometric(p_len)), capacity)
        capacity -= length
        chosen.append((kind, length))
    if not chosen:
        return NoiseSpec()
    free = seq_len - sum(length for _, length in chosen)
    # Stars and bars: a uniform composition of the free tokens into gaps.
    k = len(chosen)
    bars = np.sort(rng.choice(free + k, size=k, replace=False))
    gaps = [int(bars[0])] + [int(bars[i] - bars[i - 1] - 1) for i in range(1, k)]
    spans = []
    at = 0
    for (kind, length), gap in zip(chosen, gaps):
        at += gap
        spans.append(NoiseSpan(at, length, kind))
        at += length
    return NoiseSpec(tuple(spans))


def corrupt(seq: TokenSeq, spec: NoiseSpec) -> TokenSeq:
    """Apply a noise spec; edits run right-to-left so indices stay valid."""
    for span in spec.spans:
        if span.start + span.length > len(seq) or span.start > len(seq):
            raise SpecOutOfBounds(f"span {span} does not fit a {len(seq)}-token sequence")
    out = list(seq)
    for span in reversed(spec.spans):
        if span.kind is NoiseKind.MASK_SPAN:
            out[span.start:span.start + span.length] = [MASK]
        elif span.kind is NoiseKind.INSERT_MASK:
            out[span.start:span.start] = [MASK]
        else:
            del out[span.start:span.start + span.length]
    return out


def length_filter(seq: TokenSeq) -> bool:
    return MIN_PRETRAIN_LEN <= len(seq) <= MAX_PRETRAIN_LEN


def make_pretrain_example(seq: TokenSeq, stats: SpanStats, rng: np.random.Generator,
                          id: str, spec: NoiseSpec | None = None,
                          backend: str = BACKEND_LONGEST_MATCH,
                          verify: bool = False) -> PretrainExample:
    """Corrupt one clean sequence and emit the (corrupted, plan, target) triple."""
    if not length_filter(seq):
        raise ValueError(f"sequence length {len(seq)} is outside [{MIN_PRETRAIN_LEN}, {MAX_PRETRAIN_LEN}]")
    if spec is None:
        spec = sample_noise_spec(stats, len(seq), rng)
    corrupted = corrupt(seq, spec)
    plan = compute_edit_script(corrupted, seq, backend)
    if verify:
        applied = apply_plan(plan, corrupted, "positional")
        if applied != list(seq):
            raise AssertionError(f"reconstruction failed for example {id}")
    return PretrainExample(id=id, corrupted=corrupted, edit_plan=serialize_plan(plan), target=list(seq))


def example_rng(seed: int, index: int) -> np.random.Generator:
    """Per-example stream so output is independent of worker scheduling."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
