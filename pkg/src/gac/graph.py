"""Directed graphs with finitely many vertices and edge multiplicities in N u {inf}.

A :class:`Graph` stores its vertex matrix directly: ``mult[i][j]`` is the
number of edges from ``vertices[i]`` to ``vertices[j]``, either a
nonnegative ``int`` or :data:`INF`.  Graphs are immutable and hashable.

Text format::

    # comment
    vertices: u v
    edge u u 1
    edge u v inf

A JSON mirror ``{"vertices": [...], "edges": [{"src", "dst", "mult"}]}``
with ``"inf"`` as the infinity sentinel is accepted wherever text is.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

INF = math.inf

Mult = Union[int, float]

DEFAULT_MAX_VERTICES = 10


class GraphFormatError(ValueError):
    """Raised when graph text or JSON cannot be parsed."""


class BoundExceeded(ValueError):
    """Raised when an input is larger than a configured desk-scale bound."""


def max_vertices_bound() -> int:
    """Global vertex bound, overridable through ``GAC_MAX_VERTICES``."""
    raw = os.environ.get("GAC_MAX_VERTICES")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise BoundExceeded(f"GAC_MAX_VERTICES must be an integer, got {raw!r}")
        if value < 1:
            raise BoundExceeded("GAC_MAX_VERTICES must be positive")
        return value
    return DEFAULT_MAX_VERTICES


def mult_str(m: Mult) -> str:
    return "inf" if m == INF else str(int(m))


def parse_mult(token: str) -> Mult:
    if token in ("inf", "∞"):
        return INF
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"bad multiplicity {token!r}")
    if value < 0:
        raise GraphFormatError(f"negative multiplicity {value}")
    return value


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    mult: Tuple[Tuple[Mult, ...], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise GraphFormatError("duplicate vertex")
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise GraphFormatError("multiplicity matrix does not match the vertex list")
        for row in self.mult:
            for m in row:
                if m != INF and (m < 0 or int(m) != m):
                    raise GraphFormatError(f"bad multiplicity {m!r}")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[Mult]],
                    vertices: Optional[Sequence[str]] = None) -> "Graph":
        n = len(matrix)
        if vertices is None:
            vertices = [f"v{i}" for i in range(n)]
        rows = tuple(tuple(INF if m == INF else int(m) for m in row) for row in matrix)
        return cls(tuple(vertices), rows)

    @classmethod
    def from_edges(cls, vertices: Sequence[str],
                   edges: Mapping[Tuple[str, str], Mult]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise GraphFormatError("duplicate vertex")
        rows = [[0] * len(vertices) for _ in vertices]
        for (s, d), m in edges.items():
            if s not in index or d not in index:
                raise GraphFormatError(f"undeclared vertex in edge {s} -> {d}")
            rows[index[s]][index[d]] = m
        return cls.from_matrix(rows, vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def multiplicity(self, v: str, w: str) -> Mult:
        return self.mult[self.index(v)][self.index(w)]

    def out_total(self, i: int) -> Mult:
        return sum(self.mult[i])

    def in_total(self, j: int) -> Mult:
        return sum(row[j] for row in self.mult)

    @property
    def is_finite(self) -> bool:
        return all(m != INF for row in self.mult for m in row)

    def edge_count(self) -> Mult:
        return sum(sum(row) for row in self.mult)

    def relabel(self, mapping: Mapping[str, str]) -> "Graph":
        return Graph(tuple(mapping.get(v, v) for v in self.vertices), self.mult)

    def reorder(self, order: Sequence[str]) -> "Graph":
        idx = [self.index(v) for v in order]
        if sorted(idx) != list(range(len(self))):
            raise ValueError("order must be a permutation of the vertices")
        return Graph(tuple(order), tuple(tuple(self.mult[i][j] for j in idx) for i in idx))

    def same_labeled(self, other: "Graph") -> bool:
        """Equality up to vertex order (same labels, same multiplicities)."""
        if set(self.vertices) != set(other.vertices):
            return False
        return other.reorder(self.vertices) == self

    def __str__(self) -> str:
        return serialize_graph(self)


# ---------------------------------------------------------------------------
# parsing / serialization


def parse_graph(text: str) -> Graph:
    """Parse the line format (or its JSON mirror) into a :class:`Graph`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(json.loads(stripped))

    vertices: Optional[List[str]] = None
    edges: Dict[Tuple[str, str], Mult] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            if vertices is not None:
                raise GraphFormatError(f"line {lineno}: second 'vertices:' line")
            vertices = line[len("vertices:"):].split()
            if len(set(vertices)) != len(vertices):
                raise GraphFormatError(f"line {lineno}: duplicate vertex")
            continue
        parts = line.split()
        if parts[0] != "edge" or len(parts) != 4:
            raise GraphFormatError(f"line {lineno}: syntax error: {raw!r}")
        _, src, dst, tok = parts
        if vertices is None or src not in vertices or dst not in vertices:
            missing = src if vertices is None or src not in vertices else dst
            raise GraphFormatError(f"line {lineno}: undeclared vertex {missing!r}")
        try:
            m = parse_mult(tok)
        except GraphFormatError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
        if m == 0:
            raise GraphFormatError(f"line {lineno}: multiplicity must be positive")
        if (src, dst) in edges:
            raise GraphFormatError(f"line {lineno}: repeated edge {src} -> {dst}")
        edges[(src, dst)] = m
    if vertices is None:
        raise GraphFormatError("missing 'vertices:' line")
    return Graph.from_edges(vertices, edges)


def serialize_graph(g: Graph) -> str:
    lines = ["vertices: " + " ".join(g.vertices)]
    for i, v in enumerate(g.vertices):
        for j, w in enumerate(g.vertices):
            m = g.mult[i][j]
            if m:
                lines.append(f"edge {v} {w} {mult_str(m)}")
    return "\n".join(lines)


def graph_to_json(g: Graph) -> dict:
    edges = []
    for i, v in enumerate(g.vertices):
        for j, w in enumerate(g.vertices):
            m = g.mult[i][j]
            if m:
                edges.append({"src": v, "dst": w, "mult": "inf" if m == INF else int(m)})
    return {"vertices": list(g.vertices), "edges": edges}


def graph_from_json(data: dict) -> Graph:
    try:
        vertices = [str(v) for v in data["vertices"]]
        raw_edges = data.get("edges", [])
    except (KeyError, TypeError):
        raise GraphFormatError("JSON graph needs a 'vertices' list") from None
    if len(set(vertices)) != len(vertices):
        raise GraphFormatError("duplicate vertex")
    edges: Dict[Tuple[str, str], Mult] = {}
    for e in raw_edges:
        src, dst, m = str(e["src"]), str(e["dst"]), e["mult"]
        if src not in vertices or dst not in vertices:
            raise GraphFormatError(f"undeclared vertex in edge {src} -> {dst}")
        m = parse_mult(str(m))
        if m == 0:
            raise GraphFormatError("multiplicity must be positive")
        if (src, dst) in edges:
            raise GraphFormatError(f"repeated edge {src} -> {dst}")
        edges[(src, dst)] = m
    return Graph.from_edges(vertices, edges)


# ---------------------------------------------------------------------------
# matrices and vertex classes


def vertex_matrix(g: Graph) -> List[List[Mult]]:
    return [list(row) for row in g.mult]


@dataclass(frozen=True)
class VertexClasses:
    regular: frozenset
    sinks: frozenset
    infinite_emitters: frozenset

    @property
    def singular(self) -> frozenset:
        return self.sinks | self.infinite_emitters


def classify_vertices(g: Graph) -> VertexClasses:
    regular, sinks, infinite = set(), set(), set()
    for i, v in enumerate(g.vertices):
        out = g.out_total(i)
        if out == 0:
            sinks.add(v)
        elif out == INF:
            infinite.add(v)
        else:
            regular.add(v)
    return VertexClasses(frozenset(regular), frozenset(sinks), frozenset(infinite))


def regular_indices(g: Graph) -> List[int]:
    return [i for i in range(len(g)) if 0 < g.out_total(i) < INF]


# ---------------------------------------------------------------------------
# structure


def _successors(g: Graph) -> List[List[int]]:
    return [[j for j, m in enumerate(row) if m] for row in g.mult]


def reachability(g: Graph) -> List[List[bool]]:
    """``reach[i][j]`` iff there is a path (possibly of length 0) from i to j."""
    succ = _successors(g)
    n = len(g)
    reach = []
    for s in range(n):
        seen = [False] * n
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        reach.append(seen)
    return reach


def strongly_connected_components(g: Graph) -> List[List[int]]:
    reach = reachability(g)
    n = len(g)
    comps, assigned = [], [False] * n
    for i in range(n):
        if assigned[i]:
            continue
        comp = [j for j in range(n) if reach[i][j] and reach[j][i]]
        for j in comp:
            assigned[j] = True
        comps.append(comp)
    return comps


def cycle_vertices(g: Graph) -> List[int]:
    """Vertices lying on at least one cycle."""
    reach = reachability(g)
    succ = _successors(g)
    return [v for v in range(len(g)) if any(reach[w][v] for w in succ[v])]


@dataclass(frozen=True)
class StructuralReport:
    strongly_connected: bool
    has_cycle: bool
    is_single_cycle: bool
    cofinal: bool
    condition_L: bool
    simple: bool
    purely_infinite_simple: bool
    finite_dimensional: bool


def structural_report(g: Graph) -> StructuralReport:
    """Graph predicates feeding the classification theorems.

    Simplicity uses the usual criterion for graphs with finitely many
    vertices: every cycle has an exit, every vertex reaches every cycle and
    every sink, and every vertex reaches every infinite emitter.
    """
    n = len(g)
    reach = reachability(g)
    on_cycle = cycle_vertices(g)
    has_cycle = bool(on_cycle)
    strongly = all(reach[i][j] for i in range(n) for j in range(n))

    # A cycle without an exit is a nontrivial component in which every vertex
    # emits exactly one edge.
    condition_L = True
    on_cycle_set = set(on_cycle)
    for comp in strongly_connected_components(g):
        if comp[0] in on_cycle_set and all(g.out_total(i) == 1 for i in comp):
            condition_L = False
            break

    single_cycle = strongly and has_cycle and all(g.out_total(i) == 1 for i in range(n))
    sinks = [i for i in range(n) if g.out_total(i) == 0]
    emitters = [i for i in range(n) if g.out_total(i) == INF]
    cofinal = all(reach[v][c] for v in range(n) for c in on_cycle + sinks)
    reaches_singular = all(reach[v][s] for v in range(n) for s in emitters)
    simple = n > 0 and cofinal and condition_L and reaches_singular
    return StructuralReport(
        strongly_connected=strongly,
        has_cycle=has_cycle,
        is_single_cycle=single_cycle,
        cofinal=cofinal,
        condition_L=condition_L,
        simple=simple,
        purely_infinite_simple=simple and has_cycle,
        finite_dimensional=g.is_finite and not has_cycle,
    )


# ---------------------------------------------------------------------------
# isomorphism


def _signature(g: Graph, i: int) -> tuple:
    row = g.mult[i]
    col = [r[i] for r in g.mult]
    return (g.mult[i][i], sorted(row), sorted(col))


def check_vertex_bound(*graphs: Graph, bound: Optional[int] = None) -> None:
    limit = max_vertices_bound() if bound is None else bound
    for g in graphs:
        if len(g) > limit:
            raise BoundExceeded(f"graph has {len(g)} vertices, bound is {limit}")


def find_isomorphism(g: Graph, h: Graph, bound: Optional[int] = None) -> Optional[Dict[str, str]]:
    """Return a vertex bijection carrying g's multiplicities onto h's, or None.

    Plain backtracking over permutations, pruned by a per-vertex degree
    signature.  Intended for graphs of at most ``bound`` vertices.
    """
    check_vertex_bound(g, h, bound=bound)
    n = len(g)
    if n != len(h):
        return None
    sig_g = [_signature(g, i) for i in range(n)]
    sig_h = [_signature(h, i) for i in range(n)]
    if sorted(sig_g) != sorted(sig_h):
        return None
    candidates = [[j for j in range(n) if sig_h[j] == sig_g[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    image = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for kk in range(k):
                a = order[kk]
                b = image[a]
                if g.mult[i][a] != h.mult[j][b] or g.mult[a][i] != h.mult[b][j]:
                    ok = False
                    break
            if ok and g.mult[i][i] == h.mult[j][j]:
                image[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
                image[i] = -1
        return False

    if not extend(0):
        return None
    return {g.vertices[i]: h.vertices[image[i]] for i in range(n)}


def graphs_isomorphic(g: Graph, h: Graph, bound: Optional[int] = None) -> bool:
    return find_isomorphism(g, h, bound=bound) is not None


def fresh_label(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 2
    while f"{base}'{k}" in taken:
        k += 1
    return f"{base}'{k}"
