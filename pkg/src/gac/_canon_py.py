"""Pure-Python canonical labeling kernel (fallback for ``_canon_ext``).

The code of a vertex ordering p is read off shell by shell: for k = 0..n-1,
row entries ``M[p_k][p_0..p_k]`` followed by column entries
``M[p_0..p_{k-1}][p_k]``.  A prefix of the ordering therefore fixes a prefix
of the code, which lets the search prune by lexicographic comparison.  Only
orderings that list vertices in nondecreasing color are considered.
"""


def canonical_code(n, flat, colors):
    """Lexicographically least code over color-respecting vertex orders.

    ``flat`` is the n*n row-major matrix of ints, ``colors`` one int per
    vertex.  Returns ``(code, perm)`` as tuples, ``perm[k]`` being the vertex
    placed at position k.
    """
    if n == 0:
        return (), ()
    slots = sorted(colors)
    code = [0] * (n * n)
    best = None
    best_perm = None
    perm = [0] * n
    used = [False] * n
    updates = 0

    def rec(k, state):
        nonlocal best, best_perm, updates
        off = k * k
        width = 2 * k + 1
        want = slots[k]
        for v in range(n):
            if used[v] or colors[v] != want:
                continue
            perm[k] = v
            pos = off
            row = v * n
            for j in range(k + 1):
                code[pos] = flat[row + perm[j]]
                pos += 1
            for j in range(k):
                code[pos] = flat[perm[j] * n + v]
                pos += 1
            st = state
            if best is not None and st == 0:
                cmp = 0
                for t in range(off, off + width):
                    if code[t] != best[t]:
                        cmp = -1 if code[t] < best[t] else 1
                        break
                if cmp > 0:
                    continue
                st = cmp
            if k == n - 1:
                if best is None or st < 0:
                    best = code[:]
                    best_perm = perm[:]
                    updates += 1
                    state = 0
                continue
            before = updates
            used[v] = True
            rec(k + 1, st)
            used[v] = False
            if updates != before:
                state = 0

    rec(0, 0)
    return tuple(best), tuple(best_perm)
