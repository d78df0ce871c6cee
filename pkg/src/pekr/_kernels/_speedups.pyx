# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: enumeration counting and clique branch-and-bound.

Mirror of pekr._kernels.fallback, operation for operation.  The two must
return identical values (including node counts) for identical inputs; the
test suite enforces this.  Searches run with the GIL released, so the
thread-pool driver gets real parallelism from this implementation.
"""

from libc.stdlib cimport calloc, free
from libc.stdint cimport uint64_t, int64_t
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

IMPL = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

DEF DEADLINE_STRIDE = 4096


cdef inline double _now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


# --- enumeration counting ----------------------------------------------------

cdef void _walk(int k, int n, int nblocks, int nsingle, int64_t* sizes,
                int64_t* total, int64_t* sf) noexcept nogil:
    cdef int j
    cdef int64_t sj
    if k == n:
        total[0] += 1
        if nsingle == 0:
            sf[0] += 1
        return
    for j in range(nblocks):
        sj = sizes[j]
        sizes[j] = sj + 1
        _walk(k + 1, n, nblocks, nsingle - 1 if sj == 1 else nsingle, sizes, total, sf)
        sizes[j] = sj
    sizes[nblocks] = 1
    _walk(k + 1, n, nblocks + 1, nsingle + 1, sizes, total, sf)
    sizes[nblocks] = 0


def enumeration_counts(int n):
    """(number of partitions of [n], number of singleton-free ones), by DFS."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > 25:
        raise ValueError(f"n = {n} would overflow the 64-bit counters")
    cdef int64_t* sizes = <int64_t*> calloc(n + 1, sizeof(int64_t))
    if sizes == NULL:
        raise MemoryError()
    cdef int64_t total = 0, sf = 0
    try:
        with nogil:
            _walk(0, n, 0, 0, sizes, &total, &sf)
    finally:
        free(sizes)
    return total, sf


# --- clique search -----------------------------------------------------------

cdef struct Ctx:
    uint64_t* adj        # V rows of W words
    uint64_t* sig        # V sigma masks (ground set fits one word)
    int V
    int W
    int t
    bint constrained
    double deadline
    int64_t nodes
    int64_t best
    bint timed_out
    uint64_t* cand_stack   # (V+2) rows of W words
    uint64_t* un_scratch   # (V+2) rows of W words
    uint64_t* cur_scratch  # (V+2) rows of W words
    int* order_stack       # (V+2) rows of V ints
    int* color_stack       # (V+2) rows of V ints


cdef inline int _popcount_words(uint64_t* w, int W) noexcept nogil:
    cdef int i, c = 0
    for i in range(W):
        c += __builtin_popcountll(w[i])
    return c


cdef inline bint _is_empty(uint64_t* w, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        if w[i]:
            return False
    return True


cdef bint _sigma_reducible(Ctx* s, uint64_t* cand, uint64_t mask) noexcept nogil:
    """Can AND-ing candidate sigma masks into mask drop below t bits?"""
    cdef uint64_t and_all = mask
    cdef uint64_t w, b
    cdef int wi, v
    for wi in range(s.W):
        w = cand[wi]
        while w:
            b = w & (~w + 1)
            v = wi * 64 + __builtin_ctzll(w)
            and_all &= s.sig[v]
            if __builtin_popcountll(and_all) < s.t:
                return True
            w ^= b
    return False


cdef int _color_order(Ctx* s, int depth, uint64_t* cand) noexcept nogil:
    """Greedy coloring, identical to the pure version (first-fit equals a
    class-by-class ascending sweep).  Fills order/color rows; returns count."""
    cdef uint64_t* un = s.un_scratch + depth * s.W
    cdef uint64_t* cur = s.cur_scratch + depth * s.W
    cdef int* order = s.order_stack + depth * s.V
    cdef int* colors = s.color_stack + depth * s.V
    cdef int wi, v, cnt = 0, class_id = 0
    cdef uint64_t w, b
    cdef uint64_t* av
    cdef bint conflict
    cdef int k
    for wi in range(s.W):
        un[wi] = cand[wi]
    while not _is_empty(un, s.W):
        class_id += 1
        for wi in range(s.W):
            cur[wi] = 0
        for wi in range(s.W):
            w = un[wi]
            while w:
                b = w & (~w + 1)
                w ^= b
                v = wi * 64 + __builtin_ctzll(b)
                av = s.adj + v * s.W
                conflict = False
                for k in range(s.W):
                    if av[k] & cur[k]:
                        conflict = True
                        break
                if not conflict:
                    cur[v >> 6] |= (<uint64_t>1) << (v & 63)
                    un[v >> 6] ^= (<uint64_t>1) << (v & 63)
                    order[cnt] = v
                    colors[cnt] = class_id
                    cnt += 1
    return cnt


cdef void _expand(Ctx* s, int depth, int ksize, uint64_t mask) noexcept nogil:
    cdef uint64_t* cand = s.cand_stack + depth * s.W
    cdef uint64_t* child = s.cand_stack + (depth + 1) * s.W
    cdef int* order = s.order_stack + depth * s.V
    cdef int* colors = s.color_stack + depth * s.V
    cdef int cnt, i, v, wi
    cdef uint64_t* av

    s.nodes += 1
    if s.nodes % DEADLINE_STRIDE == 0 and _now() > s.deadline:
        s.timed_out = True
        return
    if s.constrained and __builtin_popcountll(mask) >= s.t:
        if not _sigma_reducible(s, cand, mask):
            return
    if _is_empty(cand, s.W):
        if ksize > s.best and (not s.constrained or __builtin_popcountll(mask) < s.t):
            s.best = ksize
        return
    cnt = _color_order(s, depth, cand)
    for i in range(cnt - 1, -1, -1):
        if ksize + colors[i] <= s.best:
            return
        v = order[i]
        av = s.adj + v * s.W
        for wi in range(s.W):
            child[wi] = cand[wi] & av[wi]
        _expand(s, depth + 1, ksize + 1, mask & s.sig[v])
        if s.timed_out:
            return
        cand[v >> 6] ^= (<uint64_t>1) << (v & 63)


cdef bint _exists(Ctx* s, int depth, int need, uint64_t mask) noexcept nogil:
    cdef uint64_t* cand = s.cand_stack + depth * s.W
    cdef uint64_t* child = s.cand_stack + (depth + 1) * s.W
    cdef int* order = s.order_stack + depth * s.V
    cdef int* colors = s.color_stack + depth * s.V
    cdef int cnt, i, v, wi
    cdef uint64_t* av

    s.nodes += 1
    if s.nodes % DEADLINE_STRIDE == 0 and _now() > s.deadline:
        s.timed_out = True
        return False
    if need == 0:
        return not s.constrained or __builtin_popcountll(mask) < s.t
    if _popcount_words(cand, s.W) < need:
        return False
    if s.constrained and __builtin_popcountll(mask) >= s.t:
        if not _sigma_reducible(s, cand, mask):
            return False
    cnt = _color_order(s, depth, cand)
    if cnt > 0 and colors[cnt - 1] < need:
        return False
    for i in range(cnt - 1, -1, -1):
        if colors[i] < need:
            return False
        v = order[i]
        av = s.adj + v * s.W
        for wi in range(s.W):
            child[wi] = cand[wi] & av[wi]
        if _exists(s, depth + 1, need - 1, mask & s.sig[v]):
            return True
        if s.timed_out:
            return False
        cand[v >> 6] ^= (<uint64_t>1) << (v & 63)
    return False


cdef class CliqueKernel:
    """Exact clique search over one compatibility graph (compiled twin of
    pekr._kernels.fallback.CliqueKernel)."""

    cdef uint64_t* adj
    cdef uint64_t* sig
    cdef int V
    cdef int W
    cdef int t

    def __cinit__(self, adj, sigma, int t):
        cdef int V = len(adj)
        cdef int W = (V + 63) // 64 if V else 1
        self.V = V
        self.W = W
        self.t = t
        self.adj = <uint64_t*> calloc(max(V, 1) * W, sizeof(uint64_t))
        self.sig = <uint64_t*> calloc(max(V, 1), sizeof(uint64_t))
        if self.adj == NULL or self.sig == NULL:
            raise MemoryError()
        cdef int v, wi
        cdef object x
        for v in range(V):
            x = adj[v]
            for wi in range(W):
                self.adj[v * W + wi] = <uint64_t> (x & 0xFFFFFFFFFFFFFFFF)
                x >>= 64
            if x:
                raise ValueError("adjacency bitset wider than vertex count")
            if sigma[v] >> 64:
                raise ValueError("sigma mask must fit in 64 bits")
            self.sig[v] = <uint64_t> sigma[v]

    def __dealloc__(self):
        free(self.adj)
        free(self.sig)

    cdef Ctx* _make_ctx(self, bint constrained, double deadline) except NULL:
        cdef Ctx* s = <Ctx*> calloc(1, sizeof(Ctx))
        if s == NULL:
            raise MemoryError()
        s.adj = self.adj
        s.sig = self.sig
        s.V = self.V
        s.W = self.W
        s.t = self.t
        s.constrained = constrained
        s.deadline = deadline
        cdef int rows = self.V + 2
        s.cand_stack = <uint64_t*> calloc(rows * self.W, sizeof(uint64_t))
        s.un_scratch = <uint64_t*> calloc(rows * self.W, sizeof(uint64_t))
        s.cur_scratch = <uint64_t*> calloc(rows * self.W, sizeof(uint64_t))
        s.order_stack = <int*> calloc(rows * max(self.V, 1), sizeof(int))
        s.color_stack = <int*> calloc(rows * max(self.V, 1), sizeof(int))
        if (s.cand_stack == NULL or s.un_scratch == NULL or s.cur_scratch == NULL
                or s.order_stack == NULL or s.color_stack == NULL):
            self._free_ctx(s)
            raise MemoryError()
        return s

    cdef void _free_ctx(self, Ctx* s):
        if s == NULL:
            return
        free(s.cand_stack)
        free(s.un_scratch)
        free(s.cur_scratch)
        free(s.order_stack)
        free(s.color_stack)
        free(s)

    cdef void _load_mask(self, uint64_t* row, object mask_py):
        cdef int wi
        cdef object x = mask_py
        for wi in range(self.W):
            row[wi] = <uint64_t> (x & 0xFFFFFFFFFFFFFFFF)
            x >>= 64
        if x:
            raise ValueError("bitset wider than vertex count")

    def branch_max(self, int root, object cand, long long lb, bint constrained,
                   double deadline):
        """Best qualifying clique size among {root} + subsets of cand, given
        incumbent lb.  Returns (best, nodes, completed)."""
        cdef Ctx* s = self._make_ctx(constrained, deadline)
        cdef uint64_t mask = self.sig[root]
        cdef long long best, nodes
        cdef bint completed
        try:
            self._load_mask(s.cand_stack, cand)
            s.best = lb
            with nogil:
                _expand(s, 0, 1, mask)
            best = s.best
            nodes = s.nodes
            completed = not s.timed_out
        finally:
            self._free_ctx(s)
        return best, nodes, completed

    def exists(self, object cand, int need, object mask, bint constrained,
               double deadline):
        """Is there a clique of size exactly `need` inside cand whose final
        sigma-AND with `mask` qualifies?  Returns (found, nodes, completed)."""
        if mask >> 64:
            raise ValueError("sigma mask must fit in 64 bits")
        cdef Ctx* s = self._make_ctx(constrained, deadline)
        cdef uint64_t m = <uint64_t> mask
        cdef bint found, completed
        cdef long long nodes
        try:
            self._load_mask(s.cand_stack, cand)
            with nogil:
                found = _exists(s, 0, need, m)
            nodes = s.nodes
            completed = not s.timed_out
        finally:
            self._free_ctx(s)
        return found, nodes, completed
