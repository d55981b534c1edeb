"""Compiled inner loop for the dimension-1 coboundary reduction.

The algorithm is identical to the pure-python path in homology.py
(_reduce_columns specialised to edge columns): emergent-pair shortcut,
working column as a min-heap of packed integer keys with mod-2
multiplicity, V-columns (generator edge lists) stored per pivot.  It exists
because cascade-heavy inputs (large near-surface clouds) spend all their
time in heap operations, which the interpreter makes ~100x slower than
necessary.  Key packing: key = filtration_rank * base + lexicographic
triangle code, with base = n**3; callers must ensure keys fit in int64.
"""

import numpy as np
from numba import njit, types
from numba.typed import Dict


@njit(cache=True)
def _heap_push(heap, size, val):
    if size == heap.shape[0]:
        bigger = np.empty(2 * heap.shape[0], np.int64)
        bigger[:size] = heap
        heap = bigger
    i = size
    heap[i] = val
    size += 1
    while i > 0:
        parent = (i - 1) // 2
        if heap[parent] <= heap[i]:
            break
        heap[parent], heap[i] = heap[i], heap[parent]
        i = parent
    return heap, size


@njit(cache=True)
def _heap_pop(heap, size):
    val = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        smallest = i
        if left < size and heap[left] < heap[smallest]:
            smallest = left
        if right < size and heap[right] < heap[smallest]:
            smallest = right
        if smallest == i:
            break
        heap[i], heap[smallest] = heap[smallest], heap[i]
        i = smallest
    return val, size


@njit(cache=True)
def reduce_edge_columns(ei, ej, rank_e, rank_m, adj, cols, cand, base, n):
    """Reduce the edge (dimension-1) coboundary columns.

    ei, ej, rank_e: per-edge endpoints and filtration rank.
    rank_m: per-pair filtration rank of the distance matrix (valid wherever
    adj is True).  cols: indices of the columns to reduce, already in
    decreasing (filtration, lex) order.  cand: per-edge emergent candidate
    key or -1.  Returns (birth ranks, death ranks with -1 for infinite
    bars, pivot keys).
    """
    n_cols = cols.shape[0]
    births = np.empty(n_cols, np.int64)
    deaths = np.empty(n_cols, np.int64)
    n_pairs = 0

    pivots = Dict.empty(types.int64, types.int64)
    # V-columns live back to back in vbuf; column c is vbuf[vpos[c]:vpos[c+1]]
    vbuf = np.empty(1024, np.int64)
    vpos = np.empty(n_cols + 1, np.int64)
    vpos[0] = 0
    n_stored = 0

    heap = np.empty(1024, np.int64)
    red = np.empty(1024, np.int64)

    for ci in range(n_cols):
        idx = cols[ci]
        ck = cand[idx]
        if ck >= 0 and ck not in pivots:
            # emergent pair: close the column with no reduction work
            if vpos[n_stored] + 1 > vbuf.shape[0]:
                bigger = np.empty(2 * vbuf.shape[0], np.int64)
                bigger[:vpos[n_stored]] = vbuf[:vpos[n_stored]]
                vbuf = bigger
            vbuf[vpos[n_stored]] = idx
            vpos[n_stored + 1] = vpos[n_stored] + 1
            pivots[ck] = n_stored
            n_stored += 1
            continue

        birth_rank = rank_e[idx]
        size = 0
        a = ei[idx]
        b = ej[idx]
        for k in range(n):
            if adj[a, k] and adj[b, k]:
                fr = max(birth_rank, max(rank_m[a, k], rank_m[b, k]))
                ia = min(k, a)
                ic = max(k, b)
                ib = a + b + k - ia - ic
                heap, size = _heap_push(
                    heap, size, fr * base + (ia * n + ib) * n + ic)
        red[0] = idx
        red_len = 1

        while True:
            # pop the minimal key with odd multiplicity
            key = np.int64(-1)
            while size > 0:
                top, size = _heap_pop(heap, size)
                count = 1
                while size > 0 and heap[0] == top:
                    _, size = _heap_pop(heap, size)
                    count += 1
                if count & 1:
                    key = top
                    break
            if key == -1:
                births[n_pairs] = birth_rank
                deaths[n_pairs] = -1
                n_pairs += 1
                break
            if key in pivots:
                # XOR in the stored column; push the pivot back so it
                # cancels against its odd count in the expansion
                heap, size = _heap_push(heap, size, key)
                sidx = pivots[key]
                for si in range(vpos[sidx], vpos[sidx + 1]):
                    g = vbuf[si]
                    if red_len == red.shape[0]:
                        bigger = np.empty(2 * red.shape[0], np.int64)
                        bigger[:red_len] = red
                        red = bigger
                    red[red_len] = g
                    red_len += 1
                    ga = ei[g]
                    gb = ej[g]
                    gr = rank_e[g]
                    for k in range(n):
                        if adj[ga, k] and adj[gb, k]:
                            fr = max(gr, max(rank_m[ga, k], rank_m[gb, k]))
                            ia = min(k, ga)
                            ic = max(k, gb)
                            ib = ga + gb + k - ia - ic
                            heap, size = _heap_push(
                                heap, size, fr * base + (ia * n + ib) * n + ic)
            else:
                # store the reduction column, cancelled mod 2
                rr = np.sort(red[:red_len])
                start = vpos[n_stored]
                out_len = 0
                i = 0
                while i < red_len:
                    j = i + 1
                    while j < red_len and rr[j] == rr[i]:
                        j += 1
                    if (j - i) & 1:
                        if start + out_len >= vbuf.shape[0]:
                            bigger = np.empty(2 * vbuf.shape[0], np.int64)
                            bigger[:start + out_len] = vbuf[:start + out_len]
                            vbuf = bigger
                        vbuf[start + out_len] = rr[i]
                        out_len += 1
                    i = j
                vpos[n_stored + 1] = start + out_len
                pivots[key] = n_stored
                n_stored += 1
                death_rank = key // base
                if death_rank > birth_rank:
                    births[n_pairs] = birth_rank
                    deaths[n_pairs] = death_rank
                    n_pairs += 1
                break

    pivot_keys = np.empty(len(pivots), np.int64)
    t = 0
    for k in pivots:
        pivot_keys[t] = k
        t += 1
    return births[:n_pairs], deaths[:n_pairs], pivot_keys
