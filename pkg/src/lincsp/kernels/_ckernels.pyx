# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same contracts and random streams as ``_pykernels``."""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint32_t, uint64_t
from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memcpy, memset

BACKEND = "cython"

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    static int lincsp_ctz64(unsigned long long x) {
        unsigned long i; _BitScanForward64(&i, x); return (int)i;
    }
    #else
    static int lincsp_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    #endif
    """
    int lincsp_ctz64(unsigned long long x) noexcept nogil

DEF SAT = 0
DEF EXHAUSTED = 1
DEF BUDGET = 2


cdef inline uint64_t _next64(uint64_t* s) noexcept nogil:
    cdef uint64_t z
    s[0] += <uint64_t>0x9E3779B97F4A7C15
    z = s[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint32_t _below(uint64_t* s, uint32_t bound) noexcept nogil:
    cdef uint64_t r = _next64(s) >> 32
    cdef uint64_t m = r * bound
    cdef uint32_t low = <uint32_t>m
    cdef uint32_t t
    if low < bound:
        t = (<uint32_t>(-bound)) % bound
        while low < t:
            r = _next64(s) >> 32
            m = r * bound
            low = <uint32_t>m
    return <uint32_t>(m >> 32)


def rng_stream(uint64_t state, Py_ssize_t n, uint32_t bound):
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = _below(&state, bound)
    return out, state


def resample(const int64_t[::1] offsets, const int32_t[::1] lvars, const int32_t[::1] lvals,
             const int64_t[::1] inc_off, const int32_t[::1] inc_con, const int32_t[::1] inc_val,
             Py_ssize_t nv, uint32_t d, uint64_t state, int64_t budget):
    cdef Py_ssize_t m = offsets.shape[0] - 1
    assignment = np.empty(nv, dtype=np.int32)
    cdef int32_t[::1] a = assignment
    nsat_arr = np.zeros(m, dtype=np.int32)
    cdef int32_t[::1] nsat = nsat_arr
    cdef Py_ssize_t v, c, c2, p, q, lo
    cdef int32_t s, old, new, b
    cdef int64_t resamples = 0
    cdef int status

    with nogil:
        for v in range(nv):
            a[v] = _below(&state, d)
        lo = m
        for c in range(m):
            s = 0
            for p in range(offsets[c], offsets[c + 1]):
                if a[lvars[p]] != lvals[p]:
                    s += 1
            nsat[c] = s
            if s == 0 and c < lo:
                lo = c
        while True:
            # lo is a lower bound on the least violated index.
            while lo < m and nsat[lo] != 0:
                lo += 1
            if lo == m:
                status = SAT
                break
            if resamples >= budget:
                status = BUDGET
                break
            c = lo
            resamples += 1
            for p in range(offsets[c], offsets[c + 1]):
                v = lvars[p]
                old = a[v]
                new = _below(&state, d)
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
                        if nsat[c2] == 0 and c2 < lo:
                            lo = c2
    return status, resamples, assignment, state


def backtrack(const int64_t[::1] offsets, const int32_t[::1] lvars, const int32_t[::1] lvals,
              Py_ssize_t nv, int32_t d, int64_t node_budget, bint count_all):
    cdef Py_ssize_t m = offsets.shape[0] - 1
    cdef Py_ssize_t c, p, v, i
    cdef int32_t last
    # Group constraints by their highest variable (CSR over variables).
    w_off_arr = np.zeros(nv + 1, dtype=np.int64)
    cdef int64_t[::1] w_off = w_off_arr
    lastv_arr = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] lastv = lastv_arr
    for c in range(m):
        if offsets[c + 1] == offsets[c]:
            return EXHAUSTED, 0, 0, np.zeros(nv, dtype=np.int32)
        last = -1
        for p in range(offsets[c], offsets[c + 1]):
            if lvars[p] > last:
                last = lvars[p]
        lastv[c] = last
        w_off[last + 1] += 1
    for v in range(nv):
        w_off[v + 1] += w_off[v]
    watch_arr = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] watch = watch_arr
    fill_arr = np.array(w_off_arr[:nv], copy=True) if nv > 0 else np.zeros(0, dtype=np.int64)
    cdef int64_t[::1] fill = fill_arr
    for c in range(m):
        watch[fill[lastv[c]]] = c
        fill[lastv[c]] += 1

    assignment = np.full(nv, -1, dtype=np.int32)
    cdef int32_t[::1] a = assignment
    cdef int64_t nodes = 0, count = 0
    cdef int32_t x
    cdef bint advanced, ok, viol
    cdef int status = EXHAUSTED
    with nogil:
        v = 0
        while v >= 0:
            if v == nv:
                count += 1
                if not count_all:
                    status = SAT
                    break
                v -= 1
                continue
            x = a[v] + 1
            advanced = False
            while x < d:
                if nodes >= node_budget:
                    status = BUDGET
                    break
                nodes += 1
                a[v] = x
                ok = True
                for i in range(w_off[v], w_off[v + 1]):
                    c = watch[i]
                    viol = True
                    for p in range(offsets[c], offsets[c + 1]):
                        if a[lvars[p]] != lvals[p]:
                            viol = False
                            break
                    if viol:
                        ok = False
                        break
                if ok:
                    advanced = True
                    break
                x += 1
            if status == BUDGET:
                break
            if advanced:
                v += 1
            else:
                a[v] = -1
                v -= 1
    if status == EXHAUSTED:
        assignment = np.zeros(nv, dtype=np.int32)
    return status, nodes, count, assignment


cdef inline bint _next_comb(int32_t* idx, int r, int k) noexcept nogil:
    cdef int i = r - 1
    cdef int j
    while i >= 0 and idx[i] == k - r + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, r):
        idx[j] = idx[j - 1] + 1
    return True


cdef class _Packer:
    """Covered ell-subsets as a byte map over colex ranks.

    For n <= 64 it also keeps, per (ell-1)-subset S, a bitmask of the
    elements e with S + {e} covered, so the DFS can skip them in bulk.
    """
    cdef int n, k, ell
    cdef int64_t* B          # B[a * (k + 1) + b] = C(a, b)
    cdef unsigned char* covered
    cdef uint64_t* mask      # NULL when n > 64
    cdef int32_t* idx
    cdef int32_t* edges
    cdef Py_ssize_t m, cap

    def __cinit__(self, int n, int k, int ell, int64_t ncov):
        cdef int a, b
        self.n = n
        self.k = k
        self.ell = ell
        self.B = <int64_t*>malloc((n + 1) * (k + 1) * sizeof(int64_t))
        self.covered = <unsigned char*>malloc(ncov if ncov > 0 else 1)
        self.idx = <int32_t*>malloc((k + 1) * sizeof(int32_t))
        self.cap = 64
        self.m = 0
        self.edges = <int32_t*>malloc(self.cap * k * sizeof(int32_t))
        self.mask = NULL
        if not self.B or not self.covered or not self.idx or not self.edges:
            raise MemoryError()
        memset(self.covered, 0, ncov if ncov > 0 else 1)
        for a in range(n + 1):
            for b in range(k + 1):
                if b == 0:
                    self.B[a * (k + 1)] = 1
                elif a == 0:
                    self.B[b] = 0
                else:
                    self.B[a * (k + 1) + b] = self.B[(a - 1) * (k + 1) + b - 1] + self.B[(a - 1) * (k + 1) + b]
        if n <= 64:
            self.mask = <uint64_t*>malloc(self.B[n * (k + 1) + ell - 1] * sizeof(uint64_t))
            if not self.mask:
                raise MemoryError()
            memset(self.mask, 0, self.B[n * (k + 1) + ell - 1] * sizeof(uint64_t))

    def __dealloc__(self):
        free(self.B)
        free(self.covered)
        free(self.idx)
        free(self.edges)
        free(self.mask)

    cdef inline int64_t binom(self, int a, int b) noexcept nogil:
        return self.B[a * (self.k + 1) + b]

    cdef bint fits(self, int32_t* s) noexcept nogil:
        cdef int i
        cdef int64_t r
        for i in range(self.ell):
            self.idx[i] = i
        while True:
            r = 0
            for i in range(self.ell):
                r += self.binom(s[self.idx[i]], i + 1)
            if self.covered[r]:
                return False
            if not _next_comb(self.idx, self.ell, self.k):
                return True

    cdef int reserve(self, Py_ssize_t want) noexcept nogil:
        cdef int32_t* grown
        cdef Py_ssize_t cap = self.cap
        while cap < want:
            cap *= 2
        if cap != self.cap:
            grown = <int32_t*>realloc(self.edges, cap * self.k * sizeof(int32_t))
            if not grown:
                return -1
            self.edges = grown
            self.cap = cap
        return 0

    cdef int take(self, int32_t* s) noexcept nogil:
        cdef int i, p
        cdef int64_t r
        cdef int32_t* grown
        for i in range(self.ell):
            self.idx[i] = i
        while True:
            r = 0
            for i in range(self.ell):
                r += self.binom(s[self.idx[i]], i + 1)
            self.covered[r] = 1
            if self.mask != NULL:
                for p in range(self.ell):
                    r = 0
                    for i in range(p):
                        r += self.binom(s[self.idx[i]], i + 1)
                    for i in range(p + 1, self.ell):
                        r += self.binom(s[self.idx[i]], i)
                    self.mask[r] |= (<uint64_t>1) << s[self.idx[p]]
            if not _next_comb(self.idx, self.ell, self.k):
                break
        if self.m == self.cap:
            grown = <int32_t*>realloc(self.edges, 2 * self.cap * self.k * sizeof(int32_t))
            if not grown:
                return -1
            self.edges = grown
            self.cap *= 2
        for i in range(self.k):
            self.edges[self.m * self.k + i] = s[i] + 1
        self.m += 1
        return 0

    def export(self):
        out = np.empty((self.m, self.k), dtype=np.int32)
        cdef int32_t[:, ::1] o = out
        if self.m > 0:
            memcpy(&o[0, 0], self.edges, self.m * self.k * sizeof(int32_t))
        return out


cdef inline uint64_t _span(int lo, int hi) noexcept nogil:
    """Bits lo..hi set; 0 <= lo, hi <= 63."""
    if lo > hi:
        return 0
    return ((~(<uint64_t>0)) >> (63 - hi)) & ((~(<uint64_t>0)) << lo)


cdef inline void _sort_small(int32_t* s, int k) noexcept nogil:
    cdef int i, j
    cdef int32_t t
    for i in range(1, k):
        t = s[i]
        j = i - 1
        while j >= 0 and s[j] > t:
            s[j + 1] = s[j]
            j -= 1
        s[j + 1] = t


cdef int _prefix_sub_ranks(_Packer pk, int32_t* pref, int j, int r,
                           int64_t* out, int32_t* idx) noexcept nogil:
    """Write colex ranks of all r-subsets of pref[:j] into out; return count."""
    cdef int cnt = 0, i
    cdef int64_t rank
    if r == 0:
        out[0] = 0
        return 1
    if j < r:
        return 0
    for i in range(r):
        idx[i] = i
    while True:
        rank = 0
        for i in range(r):
            rank += pk.binom(pref[idx[i]], i + 1)
        out[cnt] = rank
        cnt += 1
        if not _next_comb(idx, r, j):
            return cnt


cdef tuple _shuffled_ksets(int n, int k, uint64_t* state, int64_t limit):
    """Every k-subset, 1-based, in inside-out Fisher-Yates order.

    Same draws and result as phase B when nothing is covered and ell == k.
    """
    cdef int64_t total = 1
    cdef int i
    for i in range(k):
        total = total * (n - i) // (i + 1)
    out = np.empty((total, k), dtype=np.int32)
    cdef int32_t[:, ::1] o = out
    cdef int32_t* base = &o[0, 0]
    cdef int32_t* idx = <int32_t*>malloc(k * sizeof(int32_t))
    cdef int64_t pos = 0, jj
    if not idx:
        raise MemoryError()
    for i in range(k):
        idx[i] = i
    with nogil:
        while True:
            jj = _below(state, <uint32_t>(pos + 1))
            if jj != pos:
                memcpy(base + pos * k, base + jj * k, k * sizeof(int32_t))
            for i in range(k):
                base[jj * k + i] = idx[i] + 1
            pos += 1
            if not _next_comb(idx, k, n):
                break
    free(idx)
    if limit >= 0 and total >= limit:
        return out[:limit].copy(), False
    return out, True


def greedy_packing(int n, int k, int ell, uint64_t state, int64_t limit,
                   int64_t stall, bint enumerate_all):
    cdef int64_t ncov = 1
    cdef int i, j, cnt
    for i in range(ell):
        ncov = ncov * (n - i) // (i + 1)
    cdef _Packer pk = _Packer(n, k, ell, ncov)
    cdef int32_t* s = <int32_t*>malloc((k + 1) * sizeof(int32_t))
    cdef int64_t fails = 0
    cdef uint32_t t
    cdef bint dup
    cdef Py_ssize_t ncand = 0, capc = 0, ii, jj
    cdef int32_t* cands = NULL
    cdef int32_t* grown
    cdef int32_t* tmp
    cdef int32_t* pref
    cdef int64_t** sub
    cdef int* nsub
    cdef int64_t* scratch
    cdef int32_t* idx2
    cdef int32_t* starts
    cdef int depth, e
    cdef bint bad, finished = False
    cdef int maxsub
    cdef uint64_t* allowed

    if limit >= 0 and pk.m >= limit:
        free(s)
        return pk.export(), False, state
    try:
        with nogil:
            while fails < stall:
                # Floyd's sampling of a uniform k-subset.
                cnt = 0
                for j in range(n - k, n):
                    t = _below(&state, j + 1)
                    dup = False
                    for i in range(cnt):
                        if s[i] == <int32_t>t:
                            dup = True
                            break
                    s[cnt] = j if dup else <int32_t>t
                    cnt += 1
                _sort_small(s, k)
                if pk.fits(s):
                    if pk.take(s) != 0:
                        with gil:
                            raise MemoryError()
                    fails = 0
                    if limit >= 0 and pk.m >= limit:
                        finished = True
                        break
                else:
                    fails += 1
        if finished or not enumerate_all:
            return pk.export(), False, state
        if ell == k and pk.m == 0:
            return _shuffled_ksets(n, k, &state, limit) + (state,)

        # Phase B: lexicographic DFS with prefix pruning, then shuffle.
        maxsub = 1
        for i in range(1, k + 1):
            cnt = 1
            for j in range(min(ell - 1, i)):
                cnt = cnt * (i - j) // (j + 1)
            if cnt > maxsub:
                maxsub = cnt
        pref = <int32_t*>malloc((k + 1) * sizeof(int32_t))
        starts = <int32_t*>malloc((k + 1) * sizeof(int32_t))
        idx2 = <int32_t*>malloc((k + 1) * sizeof(int32_t))
        nsub = <int*>malloc((k + 1) * sizeof(int))
        sub = <int64_t**>malloc((k + 1) * sizeof(int64_t*))
        scratch = <int64_t*>malloc((maxsub + 1) * sizeof(int64_t))
        allowed = <uint64_t*>malloc((k + 1) * sizeof(uint64_t))
        for i in range(k + 1):
            sub[i] = <int64_t*>malloc((maxsub + 1) * sizeof(int64_t))
        try:
            with nogil:
                nsub[0] = 0
                if ell == 1:
                    sub[0][0] = 0
                    nsub[0] = 1
                depth = 0
                starts[0] = 0
                if pk.mask != NULL:
                    allowed[0] = _span(0, n - k)
                    if ell == 1:
                        allowed[0] &= ~pk.mask[0]
                while pk.mask != NULL and depth >= 0:
                    if allowed[depth] == 0:
                        depth -= 1
                        continue
                    e = lincsp_ctz64(allowed[depth])
                    allowed[depth] &= allowed[depth] - 1
                    pref[depth] = e
                    if depth + 1 == k:
                        if ncand == capc:
                            capc = 1024 if capc == 0 else 2 * capc
                            grown = <int32_t*>realloc(cands, capc * k * sizeof(int32_t))
                            if not grown:
                                with gil:
                                    raise MemoryError()
                            cands = grown
                        jj = _below(&state, <uint32_t>(ncand + 1))
                        if jj != ncand:
                            memcpy(cands + ncand * k, cands + jj * k, k * sizeof(int32_t))
                        for i in range(k):
                            cands[jj * k + i] = pref[i]
                        ncand += 1
                        continue
                    if ell == 1:
                        sub[depth + 1][0] = 0
                        nsub[depth + 1] = 1
                    else:
                        for i in range(nsub[depth]):
                            sub[depth + 1][i] = sub[depth][i]
                        cnt = _prefix_sub_ranks(pk, pref, depth, ell - 2, scratch, idx2)
                        for i in range(cnt):
                            sub[depth + 1][nsub[depth] + i] = scratch[i] + pk.binom(e, ell - 1)
                        nsub[depth + 1] = nsub[depth] + cnt
                    depth += 1
                    allowed[depth] = _span(e + 1, n - (k - depth))
                    for i in range(nsub[depth]):
                        allowed[depth] &= ~pk.mask[sub[depth][i]]
                if pk.mask != NULL:
                    depth = -1
                while depth >= 0:
                    e = starts[depth]
                    if e > n - (k - depth):
                        depth -= 1
                        if depth >= 0:
                            starts[depth] += 1
                        continue
                    bad = False
                    if depth + 1 >= ell:
                        for i in range(nsub[depth]):
                            if pk.covered[sub[depth][i] + pk.binom(e, ell)]:
                                bad = True
                                break
                    if bad:
                        starts[depth] = e + 1
                        continue
                    pref[depth] = e
                    if depth + 1 == k:
                        if ncand == capc:
                            capc = 1024 if capc == 0 else 2 * capc
                            grown = <int32_t*>realloc(cands, capc * k * sizeof(int32_t))
                            if not grown:
                                with gil:
                                    raise MemoryError()
                            cands = grown
                        # inside-out Fisher-Yates, fused with the listing
                        jj = _below(&state, <uint32_t>(ncand + 1))
                        if jj != ncand:
                            memcpy(cands + ncand * k, cands + jj * k, k * sizeof(int32_t))
                        for i in range(k):
                            cands[jj * k + i] = pref[i]
                        ncand += 1
                        starts[depth] = e + 1
                        continue
                    if ell == 1:
                        sub[depth + 1][0] = 0
                        nsub[depth + 1] = 1
                    else:
                        for i in range(nsub[depth]):
                            sub[depth + 1][i] = sub[depth][i]
                        cnt = _prefix_sub_ranks(pk, pref, depth, ell - 2, scratch, idx2)
                        for i in range(cnt):
                            sub[depth + 1][nsub[depth] + i] = scratch[i] + pk.binom(e, ell - 1)
                        nsub[depth + 1] = nsub[depth] + cnt
                    depth += 1
                    starts[depth] = e + 1

                if ell == k:
                    # Distinct k-sets never conflict: the pass accepts everything.
                    if limit >= 0 and pk.m + ncand >= limit:
                        ncand = limit - pk.m
                        finished = True
                    if pk.reserve(pk.m + ncand) != 0:
                        with gil:
                            raise MemoryError()
                    tmp = pk.edges + pk.m * k
                    for ii in range(ncand * k):
                        tmp[ii] = cands[ii] + 1
                    pk.m += ncand
                    ncand = 0
                for ii in range(ncand):
                    tmp = cands + ii * k
                    if pk.fits(tmp):
                        if pk.take(tmp) != 0:
                            with gil:
                                raise MemoryError()
                        if limit >= 0 and pk.m >= limit:
                            finished = True
                            break
        finally:
            for i in range(k + 1):
                free(sub[i])
            free(sub)
            free(allowed)
            free(nsub)
            free(scratch)
            free(idx2)
            free(starts)
            free(pref)
            free(cands)
        return pk.export(), not finished, state
    finally:
        free(s)


cdef inline int64_t _row_rank(const int32_t* row, const int32_t* idx, int r,
                              const int64_t* B, int w) noexcept nogil:
    # colex rank of the r-subset row[idx[.]]; B[v * w + b] = C(v - 1, b)
    cdef int64_t rank = 0
    cdef int i
    for i in range(r):
        rank += B[row[idx[i]] * w + i + 1]
    return rank


def find_overlap(const int32_t[:, ::1] edges, int n, int ell):
    """First pair (i, j), i < j, of rows sharing >= ell entries, else (-1, -1).

    Rows must be sorted, entries in 1..n. A byte map marks seen
    ell-subsets; the earlier row of a collision is found by a rescan.
    """
    cdef Py_ssize_t m = edges.shape[0]
    cdef int k = edges.shape[1]
    cdef int w = ell + 1
    cdef int64_t ncov = 1
    cdef int i, a, b
    if m < 2 or ell > k:
        return -1, -1
    if k > 64:
        raise ValueError("rows longer than 64 entries")
    for i in range(ell):
        ncov = ncov * (n - i) // (i + 1)
    seen_arr = np.zeros(ncov, dtype=np.uint8)
    cdef unsigned char[::1] seen = seen_arr
    cdef int64_t* B = <int64_t*>malloc((n + 1) * w * sizeof(int64_t))
    if not B:
        raise MemoryError()
    for a in range(n + 1):
        for b in range(w):
            if a == 0:
                B[b] = 0
            elif b == 0:
                B[a * w] = 1
            elif a == 1:
                B[a * w + b] = 0
            else:
                B[a * w + b] = B[(a - 1) * w + b - 1] + B[(a - 1) * w + b]
    cdef int32_t idx[64]
    cdef const int32_t* row
    cdef Py_ssize_t j, t
    cdef int64_t r, hit_r = -1
    cdef Py_ssize_t hit_i = -1, hit_j = -1
    with nogil:
        for i in range(ell):
            idx[i] = i
        for j in range(m):
            row = &edges[j, 0]
            if ell == k:
                r = _row_rank(row, idx, ell, B, w)
                if seen[r]:
                    hit_r, hit_j = r, j
                    break
                seen[r] = 1
                continue
            while True:
                r = _row_rank(row, idx, ell, B, w)
                if seen[r]:
                    hit_r, hit_j = r, j
                    break
                seen[r] = 1
                if not _next_comb(idx, ell, k):
                    break
            for i in range(ell):
                idx[i] = i
            if hit_j >= 0:
                break
        if hit_j >= 0:
            for t in range(hit_j):
                row = &edges[t, 0]
                for i in range(ell):
                    idx[i] = i
                while True:
                    if _row_rank(row, idx, ell, B, w) == hit_r:
                        hit_i = t
                        break
                    if not _next_comb(idx, ell, k):
                        break
                if hit_i >= 0:
                    break
    free(B)
    return hit_i, hit_j
