"""Pure-Python kernels.

Reference semantics for the compiled ``_ckernels`` module: both consume
random numbers in the same order from the same SplitMix64 stream, so for
equal inputs they return equal outputs. Variables are compact 0-based
indices; constraints are given in CSR form (``offsets``, ``lvars``,
``lvals``).
"""

from __future__ import annotations

import heapq
from math import comb

import numpy as np

from ..rng import SplitMix64

BACKEND = "python"

SAT, EXHAUSTED, BUDGET = 0, 1, 2


def rng_stream(state: int, n: int, bound: int):
    g = SplitMix64(state)
    out = np.array(g.stream(n, bound), dtype=np.int64)
    return out, g.state


def resample(offsets, lvars, lvals, inc_off, inc_con, inc_val, nv, d, state, budget):
    """Sequential resampling; always fixes the violated constraint of least index.

    Returns ``(status, resamples, assignment, state)`` where status is
    ``SAT`` or ``BUDGET``.
    """
    g = SplitMix64(state)
    offsets = offsets.tolist()
    lvars = lvars.tolist()
    lvals = lvals.tolist()
    inc_off = inc_off.tolist()
    inc_con = inc_con.tolist()
    inc_val = inc_val.tolist()
    m = len(offsets) - 1

    a = [g.below(d) for _ in range(nv)]
    nsat = [0] * m
    heap = []
    for c in range(m):
        s = 0
        for p in range(offsets[c], offsets[c + 1]):
            if a[lvars[p]] != lvals[p]:
                s += 1
        nsat[c] = s
        if s == 0:
            heap.append(c)
    heapq.heapify(heap)

    resamples = 0
    while True:
        while heap and nsat[heap[0]] != 0:
            heapq.heappop(heap)
        if not heap:
            return SAT, resamples, np.array(a, dtype=np.int32), g.state
        if resamples >= budget:
            return BUDGET, resamples, np.array(a, dtype=np.int32), g.state
        c = heap[0]
        resamples += 1
        for p in range(offsets[c], offsets[c + 1]):
            v = lvars[p]
            old = a[v]
            new = g.below(d)
            if new == old:
                continue
            a[v] = new
            for q in range(inc_off[v], inc_off[v + 1]):
                c2 = inc_con[q]
                b = inc_val[q]
                if old == b:
                    nsat[c2] += 1
                elif new == b:
                    nsat[c2] -= 1
                    if nsat[c2] == 0:
                        heapq.heappush(heap, c2)


def backtrack(offsets, lvars, lvals, nv, d, node_budget, count_all):
    """Chronological backtracking over variables 0..nv-1 in index order.

    A constraint is checked once its highest-indexed variable is set.
    Returns ``(status, nodes, count, assignment)``.
    """
    offsets = offsets.tolist()
    lvars = lvars.tolist()
    lvals = lvals.tolist()
    m = len(offsets) - 1
    watch = [[] for _ in range(nv)]
    for c in range(m):
        lits = [(lvars[p], lvals[p]) for p in range(offsets[c], offsets[c + 1])]
        if not lits:
            return EXHAUSTED, 0, 0, np.zeros(nv, dtype=np.int32)
        watch[max(v for v, _ in lits)].append(lits)

    a = [-1] * nv
    nodes = 0
    count = 0
    v = 0
    while v >= 0:
        if v == nv:
            count += 1
            if not count_all:
                return SAT, nodes, count, np.array(a, dtype=np.int32)
            v -= 1
            continue
        x = a[v] + 1
        advanced = False
        while x < d:
            if nodes >= node_budget:
                return BUDGET, nodes, count, np.array(a, dtype=np.int32)
            nodes += 1
            a[v] = x
            ok = True
            for lits in watch[v]:
                for u, b in lits:
                    if a[u] != b:
                        break
                else:
                    ok = False
                    break
            if ok:
                advanced = True
                break
            x += 1
        if advanced:
            v += 1
        else:
            a[v] = -1
            v -= 1
    return EXHAUSTED, nodes, count, np.zeros(nv, dtype=np.int32)


def _binom_table(n, k):
    return [[comb(a, b) for b in range(k + 1)] for a in range(n + 1)]


def _sub_ranks(s, ell, B):
    """Colex ranks of every ell-subset of the sorted tuple ``s``."""
    k = len(s)
    idx = list(range(ell))
    while True:
        yield sum(B[s[idx[i]]][i + 1] for i in range(ell))
        i = ell - 1
        while i >= 0 and idx[i] == k - ell + i:
            i -= 1
        if i < 0:
            return
        idx[i] += 1
        for j in range(i + 1, ell):
            idx[j] = idx[j - 1] + 1


def greedy_packing(n, k, ell, state, limit, stall, enumerate_all):
    """Random-order greedy maximal ell-disjoint family of k-subsets of 0..n-1.

    Phase A draws uniform k-sets and keeps the compatible ones until
    ``stall`` consecutive rejections. Phase B lists every still-compatible
    k-set, shuffles the list and runs one greedy pass over it. Skipped
    sets never become compatible again, so the output is distributed as
    a greedy pass over a uniformly random order of all k-sets.

    The shuffle is inside-out Fisher-Yates, fused with the enumeration:
    the i-th listed set draws ``below(i + 1)``.

    Returns ``(edges, maximal, state)``; ``edges`` is an ``(m, k)`` int32
    array of sorted 1-based rows in acceptance order.
    """
    g = SplitMix64(state)
    B = _binom_table(n, k)
    covered = set()
    edges = []

    def fits(s):
        return not any(r in covered for r in _sub_ranks(s, ell, B))

    def take(s):
        covered.update(_sub_ranks(s, ell, B))
        edges.append(s)

    def done():
        return limit >= 0 and len(edges) >= limit

    def result(maximal):
        arr = np.array(edges, dtype=np.int32).reshape(len(edges), k) + 1
        return arr, maximal, g.state

    if done():
        return result(False)
    fails = 0
    while fails < stall:
        chosen = set()
        for j in range(n - k, n):
            t = g.below(j + 1)
            chosen.add(j if t in chosen else t)
        s = tuple(sorted(chosen))
        if fits(s):
            take(s)
            fails = 0
            if done():
                return result(False)
        else:
            fails += 1
    if not enumerate_all:
        return result(False)

    # Phase B: lexicographic DFS with prefix pruning.
    cands = []
    pref = [0] * k
    sub = [[] for _ in range(k + 1)]  # sub[j]: ranks of (ell-1)-subsets of pref[:j]
    sub[0] = [0] if ell == 1 else []

    def extend(j, start):
        for e in range(start, n - (k - j) + 1):
            if j + 1 >= ell and any(r + B[e][ell] in covered for r in sub[j]):
                continue
            pref[j] = e
            if j + 1 == k:
                i = len(cands)
                jj = g.below(i + 1)
                if jj == i:
                    cands.append(tuple(pref))
                else:
                    cands.append(cands[jj])
                    cands[jj] = tuple(pref)
                continue
            # (ell-1)-subsets of pref[:j+1]: old ones plus new ones ending in e.
            if ell == 1:
                sub[j + 1] = [0]
            else:
                new = [r + B[e][ell - 1] for r in _prefix_ranks(pref, j, ell - 2, B)]
                sub[j + 1] = sub[j] + new
            extend(j + 1, e + 1)

    extend(0, 0)
    for s in cands:
        if fits(s):
            take(s)
            if done():
                return result(False)
    return result(True)


def _prefix_ranks(pref, j, r, B):
    """Colex ranks of all r-subsets of pref[:j] (r may be 0)."""
    if r == 0:
        yield 0
        return
    if j < r:
        return
    yield from _sub_ranks(tuple(pref[:j]), r, B)


def find_overlap(edges, n, ell):
    """A pair (i, j), i < j, of rows sharing >= ell entries, else (-1, -1).

    j is the first row that overlaps some earlier row; i is one of those.

    Rows must be sorted, entries in 1..n.
    """
    m, k = edges.shape
    if m < 2 or ell > k:
        return -1, -1
    B = _binom_table(n, k)
    owner = {}
    for j, row in enumerate(edges.tolist()):
        seen = set()
        for r in _sub_ranks(tuple(x - 1 for x in row), ell, B):
            i = owner.get(r)
            if i is not None and i != j:
                return i, j
            if r not in seen:
                seen.add(r)
                owner[r] = j
    return -1, -1
