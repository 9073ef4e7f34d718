"""Canonical forms of graphs for search deduplication.

The permutation search runs in a compiled kernel when the extension was
built; otherwise the pure-Python kernel is used.  Set ``GAC_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os
from typing import Tuple

from gac import _canon_py
from gac.graph import INF, Graph

try:
    if os.environ.get("GAC_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from gac import _canon_ext as _kernel
    BACKEND = "compiled"
except ImportError:
    _kernel = _canon_py
    BACKEND = "python"

INF_CODE = -1

CanonKey = Tuple[int, Tuple[int, ...]]


def _encode(m) -> int:
    return INF_CODE if m == INF else int(m)


def refine_colors(n: int, flat) -> list:
    """Color refinement; colors are ranks of isomorphism-invariant signatures."""
    colors = [0] * n
    while True:
        sigs = []
        for v in range(n):
            out_sig = sorted((colors[w], flat[v * n + w]) for w in range(n) if w != v)
            in_sig = sorted((colors[u], flat[u * n + v]) for u in range(n) if u != v)
            sigs.append((colors[v], flat[v * n + v], tuple(out_sig), tuple(in_sig)))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(g: Graph, kernel=None) -> Tuple[CanonKey, Tuple[str, ...]]:
    """Return ``(key, order)``: an isomorphism-invariant key and the vertex
    order realizing it.  Two graphs are isomorphic iff their keys are equal."""
    kernel = kernel or _kernel
    n = len(g)
    flat = [_encode(m) for row in g.mult for m in row]
    colors = refine_colors(n, flat)
    code, perm = kernel.canonical_code(n, flat, colors)
    return (n, tuple(code)), tuple(g.vertices[i] for i in perm)


def canonical_key(g: Graph, kernel=None) -> CanonKey:
    return canonical_form(g, kernel)[0]
