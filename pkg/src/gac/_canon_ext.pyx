# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled canonical labeling kernel; same contract as ``_canon_py``."""


cdef enum:
    MAXN = 16


cdef struct Search:
    int n
    long long *flat
    int *colors
    int *slots
    long long *code
    long long *best
    int *perm
    int *best_perm
    int *used
    int have_best
    long updates


cdef void rec(Search *s, int k, int state) nogil:
    cdef int n = s.n
    cdef int off = k * k
    cdef int width = 2 * k + 1
    cdef int want = s.slots[k]
    cdef int v, j, pos, st, cmp, t
    cdef long before
    for v in range(n):
        if s.used[v] or s.colors[v] != want:
            continue
        s.perm[k] = v
        pos = off
        for j in range(k + 1):
            s.code[pos] = s.flat[v * n + s.perm[j]]
            pos += 1
        for j in range(k):
            s.code[pos] = s.flat[s.perm[j] * n + v]
            pos += 1
        st = state
        if s.have_best and st == 0:
            cmp = 0
            for t in range(off, off + width):
                if s.code[t] != s.best[t]:
                    cmp = -1 if s.code[t] < s.best[t] else 1
                    break
            if cmp > 0:
                continue
            st = cmp
        if k == n - 1:
            if not s.have_best or st < 0:
                for t in range(n * n):
                    s.best[t] = s.code[t]
                for t in range(n):
                    s.best_perm[t] = s.perm[t]
                s.have_best = 1
                s.updates += 1
                state = 0
            continue
        before = s.updates
        s.used[v] = 1
        rec(s, k + 1, st)
        s.used[v] = 0
        if s.updates != before:
            state = 0


def canonical_code(int n, flat, colors):
    if n == 0:
        return (), ()
    if n > MAXN:
        raise ValueError(f"compiled kernel supports at most {MAXN} vertices")
    cdef Search s
    cdef long long c_flat[MAXN * MAXN]
    cdef long long c_code[MAXN * MAXN]
    cdef long long c_best[MAXN * MAXN]
    cdef int c_colors[MAXN]
    cdef int c_slots[MAXN]
    cdef int c_perm[MAXN]
    cdef int c_best_perm[MAXN]
    cdef int c_used[MAXN]
    cdef int i
    slots = sorted(colors)
    for i in range(n * n):
        c_flat[i] = flat[i]
        c_code[i] = 0
    for i in range(n):
        c_colors[i] = colors[i]
        c_slots[i] = slots[i]
        c_used[i] = 0
    s.n = n
    s.flat = c_flat
    s.colors = c_colors
    s.slots = c_slots
    s.code = c_code
    s.best = c_best
    s.perm = c_perm
    s.best_perm = c_best_perm
    s.used = c_used
    s.have_best = 0
    s.updates = 0
    with nogil:
        rec(&s, 0, 0)
    return (tuple([c_best[i] for i in range(n * n)]),
            tuple([c_best_perm[i] for i in range(n)]))
