"""Compiled inner loops for the two diff backends.

Tokens are interned to dense int32 ids before entering these kernels; the
wrappers in edits.py own all span/operation semantics. Both kernels are pure
functions of their inputs.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Backtrack step codes shared with edits.py.
STEP_MATCH = 0
STEP_DELETE = 1
STEP_INSERT = 2
STEP_REPLACE = 3


@njit(cache=True)
def levenshtein_steps(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimal edit script between int sequences as per-token step codes.

    Unit costs for insert/delete/replace. Backtracking prefers matches, then
    deletes, then inserts, then replaces, which keeps edits as far left as
    possible and makes the script deterministic.
    """
    n = len(a)
    m = len(b)
    d = np.empty((n + 1, m + 1), dtype=np.int32)
    for i in range(n + 1):
        d[i, 0] = i
    for j in range(m + 1):
        d[0, j] = j
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            c = d[i - 1, j - 1]
            if ai != b[j - 1]:
                c += 1
                if d[i - 1, j] + 1 < c:
                    c = d[i - 1, j] + 1
                if d[i, j - 1] + 1 < c:
                    c = d[i, j - 1] + 1
            d[i, j] = c
    steps = np.empty(n + m, dtype=np.int8)
    k = n + m
    i = n
    j = m
    while i > 0 or j > 0:
        k -= 1
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and d[i, j] == d[i - 1, j - 1]:
            steps[k] = STEP_MATCH
            i -= 1
            j -= 1
        elif i > 0 and d[i, j] == d[i - 1, j] + 1:
            steps[k] = STEP_DELETE
            i -= 1
        elif j > 0 and d[i, j] == d[i, j - 1] + 1:
            steps[k] = STEP_INSERT
            j -= 1
        else:
            steps[k] = STEP_REPLACE
            i -= 1
            j -= 1
    return steps[k:]


@njit(cache=True)
def matching_blocks(a: np.ndarray, b: np.ndarray, nsym: int) -> np.ndarray:
    """Contiguous longest-match blocks, no junk heuristics.

    Recursively takes the longest matching block (earliest in ``a``, then in
    ``b`` on ties) and splits around it. Returns an array of (a_start,
    b_start, size) rows in arbitrary order; callers sort.
    """
    n = len(a)
    m = len(b)
    cap = min(n, m) + 1
    blocks = np.empty((cap, 3), dtype=np.int32)
    nblocks = 0
    if n == 0 or m == 0:
        return blocks[:0]
    # CSR index of positions per symbol in b.
    counts = np.zeros(nsym + 1, dtype=np.int32)
    for j in range(m):
        counts[b[j] + 1] += 1
    for s in range(nsym):
        counts[s + 1] += counts[s]
    pos = np.empty(m, dtype=np.int32)
    fill = counts[:nsym].copy()
    for j in range(m):
        pos[fill[b[j]]] = j
        fill[b[j]] += 1
    j2len = np.zeros(m + 1, dtype=np.int32)
    newj2len = np.zeros(m + 1, dtype=np.int32)
    stack = np.empty((2 * cap + 4, 4), dtype=np.int32)
    top = 0
    stack[top, 0] = 0
    stack[top, 1] = n
    stack[top, 2] = 0
    stack[top, 3] = m
    top += 1
    while top > 0:
        top -= 1
        alo = stack[top, 0]
        ahi = stack[top, 1]
        blo = stack[top, 2]
        bhi = stack[top, 3]
        besti = alo
        bestj = blo
        bestsize = 0
        for j in range(blo, bhi + 1):
            j2len[j] = 0
        for i in range(alo, ahi):
            sym = a[i]
            for j in range(blo, bhi + 1):
                newj2len[j] = 0
            for t in range(counts[sym], counts[sym + 1]):
                j = pos[t]
                if j < blo:
                    continue
                if j >= bhi:
                    break
                if j > blo:
                    k = j2len[j - 1] + 1
                else:
                    k = 1
                newj2len[j] = k
                if k > bestsize:
                    besti = i - k + 1
                    bestj = j - k + 1
                    bestsize = k
            tmp = j2len
            j2len = newj2len
            newj2len = tmp
        if bestsize > 0:
            blocks[nblocks, 0] = besti
            blocks[nblocks, 1] = bestj
            blocks[nblocks, 2] = bestsize
            nblocks += 1
            if alo < besti and blo < bestj:
                stack[top, 0] = alo
                stack[top, 1] = besti
                stack[top, 2] = blo
                stack[top, 3] = bestj
                top += 1
            if besti + bestsize < ahi and bestj + bestsize < bhi:
                stack[top, 0] = besti + bestsize
                stack[top, 1] = ahi
                stack[top, 2] = bestj + bestsize
                stack[top, 3] = bhi
                top += 1
    return blocks[:nblocks]


def warm_up() -> None:
    """Trigger JIT compilation so timed paths run at steady state."""
    a = np.array([0, 1, 2], dtype=np.int32)
    b = np.array([0, 2], dtype=np.int32)
    levenshtein_steps(a, b)
    matching_blocks(a, b, 3)
