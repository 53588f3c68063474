"""Edit-aware evaluation: xMatch, BLEU-4, GLEU, SARI, and bootstrap tests.

Variant choices (arithmetic-mean BLEU per the averaging convention, the
source-penalized GEC formulation of GLEU, SARI's empty-set conventions) are
exposed in METRIC_VARIANTS so reports are self-describing. METEOR is out of
scope and reported as not computed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .tokens import TokenSeq

NGRAM_ORDER = 4

METRIC_NAMES = ("xmatch", "bleu4", "gleu", "sari")

METRIC_VARIANTS = {
    "bleu4": "brevity-penalty * arithmetic mean of 1..4-gram precisions; empty orders skipped; 0 on zero unigram precision",
    "gleu": "source-penalized n-gram precisions (candidate n-grams absent from the reference but present in the source subtract from matches), geometric mean, brevity penalty",
    "sari": "mean over non-degenerate 1..4-gram levels of (keep F1 + delete precision + add F1) / 3; empty-vs-empty components score 1",
    "meteor": "not computed",
}


def _ngrams(seq: TokenSeq, n: int) -> Counter:
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def xmatch(pred: TokenSeq, ref: TokenSeq) -> float:
    return 1.0 if list(pred) == list(ref) else 0.0


def _brevity_penalty(pred_len: int, ref_len: int) -> float:
    if pred_len > ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / pred_len)


def bleu4(pred: TokenSeq, ref: TokenSeq) -> float:
    """Brevity penalty times the arithmetic mean of clipped n-gram precisions."""
    if not pred:
        return 1.0 if not ref else 0.0
    precisions = []
    for n in range(1, NGRAM_ORDER + 1):
        cand = _ngrams(pred, n)
        total = sum(cand.values())
        if total == 0:
            continue
        matched = sum((cand & _ngrams(ref, n)).values())
        precisions.append(matched / total)
    if precisions[0] == 0.0:
        return 0.0
    return _brevity_penalty(len(pred), len(ref)) * sum(precisions) / len(precisions)


def gleu(pred: TokenSeq, ref: TokenSeq, source: TokenSeq) -> float:
    """BLEU-like score that penalizes candidate n-grams kept from the source
    but absent from the reference."""
    if not pred:
        return 1.0 if not ref else 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, NGRAM_ORDER + 1):
        cand = _ngrams(pred, n)
        total = sum(cand.values())
        if total == 0:
            continue
        ref_grams = _ngrams(ref, n)
        src_grams = _ngrams(source, n)
        matched = sum((cand & ref_grams).values())
        penalty = sum(min(c, src_grams[g]) for g, c in cand.items() if ref_grams[g] == 0)
        numer = max(matched - penalty, 0)
        if numer == 0:
            return 0.0
        log_sum += math.log(numer / total)
        orders += 1
    return _brevity_penalty(len(pred), len(ref)) * math.exp(log_sum / orders)


def _component_f1(good: int, cand: int, gold: int) -> float:
    if cand == 0 and gold == 0:
        return 1.0
    if cand == 0 or gold == 0:
        return 0.0
    precision = good / cand
    recall = good / gold
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _component_precision(good: int, cand: int, gold: int) -> float:
    if cand == 0:
        return 1.0 if gold == 0 else 0.0
    return good / cand


def sari(pred: TokenSeq, ref: TokenSeq, source: TokenSeq) -> float:
    """Mean of add-F1, keep-F1 and delete-precision over n-gram levels.

    Levels where none of the three sequences has an n-gram are skipped; if
    every level degenerates (all sequences empty) the score is 1.
    """
    scores = []
    for n in range(1, NGRAM_ORDER + 1):
        if max(len(source), len(pred), len(ref)) < n:
            continue
        s = _ngrams(source, n)
        c = _ngrams(pred, n)
        r = _ngrams(ref, n)
        keep_cand = s & c
        keep_gold = s & r
        keep_good = keep_cand & r
        del_cand = s - c
        del_gold = s - r
        del_good = del_cand & del_gold
        add_cand = c - s
        add_gold = r - s
        add_good = add_cand & add_gold
        f1_keep = _component_f1(sum(keep_good.values()), sum(keep_cand.values()), sum(keep_gold.values()))
        p_del = _component_precision(sum(del_good.values()), sum(del_cand.values()), sum(del_gold.values()))
        f1_add = _component_f1(sum(add_good.values()), sum(add_cand.values()), sum(add_gold.values()))
        scores.append((f1_keep + p_del + f1_add) / 3.0)
    if not scores:
        return 1.0
    return sum(scores) / len(scores)


@dataclass(frozen=True)
class MetricsReport:
    count: int
    corpus: dict[str, float]
    per_example: dict[str, list[float]]
    metadata: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "corpus": self.corpus,
            "per_example": self.per_example,
            "metadata": self.metadata,
        }


def evaluate_corpus(preds: list[TokenSeq], refs: list[TokenSeq],
                    sources: list[TokenSeq] | None = None,
                    metric_names: tuple[str, ...] = METRIC_NAMES) -> MetricsReport:
    """Score a corpus; the corpus score is the mean of per-example scores."""
    if len(preds) != len(refs):
        raise LengthMismatch("predictions vs references", len(preds), len(refs))
    for name in metric_names:
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric: {name!r}")
    needs_source = any(name in ("gleu", "sari") for name in metric_names)
    if needs_source:
        if sources is None:
            raise ValueError("gleu and sari need source sequences")
        if len(sources) != len(preds):
            raise LengthMismatch("predictions vs sources", len(preds), len(sources))
    per_example: dict[str, list[float]] = {name: [] for name in metric_names}
    for i, (pred, ref) in enumerate(zip(preds, refs)):
        for name in metric_names:
            if name == "xmatch":
                score = xmatch(pred, ref)
            elif name == "bleu4":
                score = bleu4(pred, ref)
            elif name == "gleu":
                score = gleu(pred, ref, sources[i])
            else:
                score = sari(pred, ref, sources[i])
            per_example[name].append(score)
    n = len(preds)
    corpus = {name: (sum(scores) / n if n else 0.0) for name, scores in per_example.items()}
    metadata = {k: METRIC_VARIANTS[k] for k in (*metric_names, "meteor") if k in METRIC_VARIANTS}
    return MetricsReport(count=n, corpus=corpus, per_example=per_example, metadata=metadata)


@dataclass(frozen=True)
class SignificanceResult:
    observed_delta: float
    p_value: float
    iterations: int
    confidence: float = 0.95

    def to_dict(self) -> dict:
        return {
            "observed_delta": self.observed_delta,
            "p_value": self.p_value,
            "iterations": self.iterations,
            "confidence": self.confidence,
        }


def bootstrap_test(scores_a: list[float], scores_b: list[float], iterations: int,
                   rng: np.random.Generator, confidence: float = 0.95) -> SignificanceResult:
    """Paired bootstrap over example indices.

    The p-value is twice the fraction of resamples whose mean delta flips
    sign relative to the observed delta, clamped to [0, 1]; a zero observed
    delta cannot flip and yields 1.0.
    """
    if len(scores_a) != len(scores_b):
        raise LengthMismatch("score lists", len(scores_a), len(scores_b))
    if len(scores_a) < 2:
        raise ValueError("bootstrap needs at least 2 paired scores")
    if iterations < 1000:
        raise ValueError("bootstrap needs at least 1000 iterations")
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    observed = float(a.mean() - b.mean())
    if observed == 0.0:
        return SignificanceResult(observed_delta=0.0, p_value=1.0,
                                  iterations=iterations, confidence=confidence)
    n = len(a)
    diff = a - b
    flips = 0
    remaining = iterations
    while remaining > 0:
        chunk = min(remaining, 4096)
        idx = rng.integers(0, n, size=(chunk, n))
        deltas = diff[idx].mean(axis=1)
        if observed > 0:
            flips += int((deltas < 0).sum())
        else:
            flips += int((deltas > 0).sum())
        remaining -= chunk
    p = min(1.0, 2.0 * flips / iterations)
    return SignificanceResult(observed_delta=observed, p_value=p,
                              iterations=iterations, confidence=confidence)
