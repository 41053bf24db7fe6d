"""Hot integer kernels.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version. ``_accel.USE_NUMBA`` picks one at import time; both
must return identical results (the test suite runs them against each other).

Matrices are ``int64`` arrow-multiplicity matrices: ``A[u, v]`` counts arrows
``u -> v``.
"""

from __future__ import annotations

import numpy as np

from . import _accel

# Entries are multiplied pairwise during mutation; keep both factors below
# 2**31 so the product cannot leave int64.
MULT_LIMIT = 2**31


# --------------------------------------------------------------------------
# mutation


@_accel.njit
def _mutate_loops(A, k, frozen):
    n = A.shape[0]
    for i in range(n):
        if A[i, k] >= MULT_LIMIT or A[k, i] >= MULT_LIMIT:
            raise OverflowError("arrow multiplicity too large to mutate")
    B = A.copy()
    # step 1: i -> k -> j contributes A[i, k] * A[k, j] arrows i -> j
    for i in range(n):
        a = A[i, k]
        if a == 0:
            continue
        for j in range(n):
            b = A[k, j]
            if b != 0 and i != j:
                B[i, j] += a * b
    # steps 2 and 3: reverse everything touching k
    for i in range(n):
        B[i, k] = A[k, i]
        B[k, i] = A[i, k]
    # step 4: cancel 2-cycles, drop frozen-frozen arrows
    for i in range(n):
        for j in range(i + 1, n):
            if frozen[i] and frozen[j]:
                B[i, j] = 0
                B[j, i] = 0
                continue
            m = min(B[i, j], B[j, i])
            if m > 0:
                B[i, j] -= m
                B[j, i] -= m
    return B


def _mutate_numpy(A, k, frozen):
    col = A[:, k]
    row = A[k, :]
    if col.max(initial=0) >= MULT_LIMIT or row.max(initial=0) >= MULT_LIMIT:
        raise OverflowError("arrow multiplicity too large to mutate")
    B = A + np.outer(col, row)
    np.fill_diagonal(B, 0)
    B[:, k] = row
    B[k, :] = col
    B -= np.minimum(B, B.T)
    B[np.ix_(frozen, frozen)] = 0
    return B


# --------------------------------------------------------------------------
# colouring


@_accel.njit
def _colour_codes_loops(A, nonfrozen, frozen):
    # 1 = green, 2 = red, 0 = neither, 3 = both
    out = np.zeros(nonfrozen.shape[0], dtype=np.int64)
    n = A.shape[0]
    for p in range(nonfrozen.shape[0]):
        v = nonfrozen[p]
        into = False
        outof = False
        for f in range(n):
            if frozen[f]:
                if A[f, v] != 0:
                    into = True
                if A[v, f] != 0:
                    outof = True
        green = not into
        red = not outof
        if green and red:
            out[p] = 3
        elif green:
            out[p] = 1
        elif red:
            out[p] = 2
    return out


def _colour_codes_numpy(A, nonfrozen, frozen):
    into = (A[np.ix_(frozen, nonfrozen)] != 0).any(axis=0)
    outof = (A[np.ix_(nonfrozen, frozen)] != 0).any(axis=1)
    green = ~into
    red = ~outof
    return green.astype(np.int64) + 2 * red.astype(np.int64)


# --------------------------------------------------------------------------
# exhaustive DFS without memoisation


@_accel.njit
def _count_mgs_loops(A0, nonfrozen, frozen, depth_bound):
    n = A0.shape[0]
    m = nonfrozen.shape[0]
    stack = np.empty((depth_bound + 1, n, n), dtype=np.int64)
    cursor = np.zeros(depth_bound + 1, dtype=np.int64)
    counts = np.zeros(depth_bound + 1, dtype=np.int64)
    stack[0] = A0
    depth = 0
    visited = 1
    pruned = 0
    bad = 0
    entering = True
    while depth >= 0:
        cur = stack[depth]
        if entering:
            entering = False
            codes = _colour_codes_loops(cur, nonfrozen, frozen)
            any_green = False
            for p in range(m):
                if codes[p] == 0 or codes[p] == 3:
                    bad += 1
                if codes[p] == 1:
                    any_green = True
            if not any_green:
                counts[depth] += 1
                depth -= 1
                continue
            if depth == depth_bound:
                pruned += 1
                depth -= 1
                continue
            cursor[depth] = 0
        p = cursor[depth]
        found = -1
        while p < m:
            v = nonfrozen[p]
            p += 1
            is_green = True
            for f in range(n):
                if frozen[f] and cur[f, v] != 0:
                    is_green = False
                    break
            if is_green:
                found = v
                break
        cursor[depth] = p
        if found < 0:
            depth -= 1
            continue
        stack[depth + 1] = _mutate_loops(cur, found, frozen)
        depth += 1
        visited += 1
        entering = True
    return counts, visited, pruned, bad


def _count_mgs_numpy(A0, nonfrozen, frozen, depth_bound):
    counts = np.zeros(depth_bound + 1, dtype=np.int64)
    tally = {"visited": 0, "pruned": 0, "bad": 0}

    def walk(A, depth):
        tally["visited"] += 1
        codes = _colour_codes_numpy(A, nonfrozen, frozen)
        tally["bad"] += int(np.count_nonzero((codes == 0) | (codes == 3)))
        greens = nonfrozen[codes == 1]
        if greens.size == 0:
            counts[depth] += 1
            return
        if depth == depth_bound:
            tally["pruned"] += 1
            return
        for v in greens:
            walk(_mutate_numpy(A, int(v), frozen), depth + 1)

    walk(A0, 0)
    return counts, tally["visited"], tally["pruned"], tally["bad"]


# --------------------------------------------------------------------------
# exact integer rank (fraction-free elimination)


@_accel.njit
def _int_rank_loops(M):
    A = M.copy()
    rows, cols = A.shape
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                A[i, j] = (A[r, c] * A[i, j] - A[i, c] * A[r, j]) // prev
            A[i, c] = 0
        prev = A[r, c]
        r += 1
    return r


def _int_rank_numpy(M):
    A = np.array(M, dtype=np.int64)
    rows, cols = A.shape
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r + 1 :, c + 1 :] = (
            A[r, c] * A[r + 1 :, c + 1 :] - np.outer(A[r + 1 :, c], A[r, c + 1 :])
        ) // prev
        A[r + 1 :, c] = 0
        prev = int(A[r, c])
        r += 1
    return r


# --------------------------------------------------------------------------
# public dispatch

if _accel.USE_NUMBA:
    mutate_arrows = _mutate_loops
    colour_codes = _colour_codes_loops
    count_mgs = _count_mgs_loops
    int_rank = _int_rank_loops
else:
    mutate_arrows = _mutate_numpy
    colour_codes = _colour_codes_numpy
    count_mgs = _count_mgs_numpy
    int_rank = _int_rank_numpy

IMPLEMENTATIONS = {
    "loops": {
        "mutate_arrows": _mutate_loops,
        "colour_codes": _colour_codes_loops,
        "count_mgs": _count_mgs_loops,
        "int_rank": _int_rank_loops,
    },
    "numpy": {
        "mutate_arrows": _mutate_numpy,
        "colour_codes": _colour_codes_numpy,
        "count_mgs": _count_mgs_numpy,
        "int_rank": _int_rank_numpy,
    },
}
