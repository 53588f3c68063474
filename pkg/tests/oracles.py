"""Independent brute-force oracles used to freeze expected test values.

Everything here recomputes results from first principles with plain loops and
dicts, sharing no code with the package, so the tests stay a genuine second
route to the same answers.
"""

from __future__ import annotations

import math


def levenshtein_distance(a: list[str], b: list[str]) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def ngram_counts(seq: list[str], n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(seq) - n + 1):
        gram = tuple(seq[i:i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def bleu4_oracle(pred: list[str], ref: list[str]) -> float:
    if not pred:
        return 1.0 if not ref else 0.0
    precisions = []
    for n in (1, 2, 3, 4):
        cand = ngram_counts(pred, n)
        total = sum(cand.values())
        if total == 0:
            continue
        refs = ngram_counts(ref, n)
        matched = 0
        for gram, count in cand.items():
            matched += min(count, refs.get(gram, 0))
        precisions.append(matched / total)
    if precisions[0] == 0:
        return 0.0
    bp = 1.0 if len(pred) > len(ref) else math.exp(1.0 - len(ref) / len(pred))
    return bp * sum(precisions) / len(precisions)


def gleu_oracle(pred: list[str], ref: list[str], source: list[str]) -> float:
    if not pred:
        return 1.0 if not ref else 0.0
    logs = []
    for n in (1, 2, 3, 4):
        cand = ngram_counts(pred, n)
        total = sum(cand.values())
        if total == 0:
            continue
        refs = ngram_counts(ref, n)
        srcs = ngram_counts(source, n)
        matched = 0
        penalty = 0
        for gram, count in cand.items():
            matched += min(count, refs.get(gram, 0))
            if gram not in refs:
                penalty += min(count, srcs.get(gram, 0))
        numer = matched - penalty
        if numer <= 0:
            return 0.0
        logs.append(math.log(numer / total))
    bp = 1.0 if len(pred) > len(ref) else math.exp(1.0 - len(ref) / len(pred))
    return bp * math.exp(sum(logs) / len(logs))


def _multiset_and(x: dict, y: dict) -> dict:
    return {g: min(c, y[g]) for g, c in x.items() if g in y and min(c, y[g]) > 0}


def _multiset_sub(x: dict, y: dict) -> dict:
    out = {}
    for g, c in x.items():
        d = c - y.get(g, 0)
        if d > 0:
            out[g] = d
    return out


def _size(x: dict) -> int:
    return sum(x.values())


def _f1(good: int, cand: int, gold: int) -> float:
    if cand == 0 and gold == 0:
        return 1.0
    if cand == 0 or gold == 0:
        return 0.0
    p = good / cand
    r = good / gold
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def sari_oracle(pred: list[str], ref: list[str], source: list[str]) -> float:
    levels = []
    for n in (1, 2, 3, 4):
        if max(len(source), len(pred), len(ref)) < n:
            continue
        s = ngram_counts(source, n)
        c = ngram_counts(pred, n)
        r = ngram_counts(ref, n)
        keep = _f1(_size(_multiset_and(_multiset_and(s, c), r)),
                   _size(_multiset_and(s, c)),
                   _size(_multiset_and(s, r)))
        del_cand = _multiset_sub(s, c)
        del_gold = _multiset_sub(s, r)
        del_good = _size(_multiset_and(del_cand, del_gold))
        if _size(del_cand) == 0:
            deletion = 1.0 if _size(del_gold) == 0 else 0.0
        else:
            deletion = del_good / _size(del_cand)
        add = _f1(_size(_multiset_and(_multiset_sub(c, s), _multiset_sub(r, s))),
                  _size(_multiset_sub(c, s)),
                  _size(_multiset_sub(r, s)))
        levels.append((keep + deletion + add) / 3.0)
    if not levels:
        return 1.0
    return sum(levels) / len(levels)
