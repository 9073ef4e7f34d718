"""Graph moves (S), (O), (I), (R), their inverses, and the Cuntz splice.

All bookkeeping is on multiplicities.  A "partition" of a set of parallel
edges is a composition of their multiplicity across blocks, written per
parallel class as ``(src, dst, (m_1, ..., m_n))``.

Move kinds:

``S``     remove a regular source
``S-1``   add a regular source (out-multiplicities given by the partition)
``O``     outsplit v: blocks of s^-1(v), at most one of them infinite
``O-1``   outamalgamate vertices with identical incoming columns
``I``     insplit a regular vertex v: blocks of r^-1(v)
``I-1``   inamalgamate regular vertices with identical outgoing rows
``R``     reduce a regular v emitting one edge v -> w (w != v)
``R-1``   delay: move some edges into w onto a new vertex v with v -> w
``CS``    Cuntz splice at a vertex with two distinct return paths
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from gac.graph import (
    INF,
    Graph,
    Mult,
    check_vertex_bound,
    fresh_label,
    mult_str,
    parse_mult,
)

KINDS = ("S", "S-1", "O", "O-1", "I", "I-1", "R", "R-1", "CS")
INVERSE_KIND = {"S": "S-1", "S-1": "S", "O": "O-1", "O-1": "O",
                "I": "I-1", "I-1": "I", "R": "R-1", "R-1": "R"}
_KIND_ALIASES = {"S⁻¹": "S-1", "O⁻¹": "O-1", "I⁻¹": "I-1", "R⁻¹": "R-1",
                 "Sinv": "S-1", "Oinv": "O-1", "Iinv": "I-1", "Rinv": "R-1"}

EdgeClass = Tuple[str, str, Tuple[Mult, ...]]


class InvalidMove(ValueError):
    pass


@dataclass(frozen=True)
class MoveInstance:
    kind: str
    site: Tuple[str, ...]
    partition: Tuple[EdgeClass, ...] = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise InvalidMove(f"unknown move kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "site", tuple(self.site))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "partition", tuple(
            (str(s), str(d), tuple(INF if a == INF else int(a) for a in amounts))
            for s, d, amounts in self.partition))

    def sort_key(self) -> tuple:
        part = tuple((s, d, tuple(_mkey(a) for a in am)) for s, d, am in self.partition)
        return (KINDS.index(self.kind), self.site, part, self.labels)

    def __str__(self) -> str:
        text = self.kind
        if self.site:
            text += " at " + ",".join(self.site)
        if self.partition:
            text += " [" + format_partition(self.partition) + "]"
        if self.labels:
            text += " -> " + ",".join(self.labels)
        return text

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "site": list(self.site),
            "partition": [{"src": s, "dst": d, "mult": [_mjson(a) for a in am]}
                          for s, d, am in self.partition],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MoveInstance":
        part = tuple((p["src"], p["dst"], tuple(parse_mult(str(a)) for a in p["mult"]))
                     for p in data.get("partition", []))
        return cls(data["kind"], tuple(data.get("site", ())), part, tuple(data.get("labels", ())))


def _mkey(a: Mult) -> int:
    return 1 << 62 if a == INF else a


def _mjson(a: Mult):
    return "inf" if a == INF else a


def _msum(values) -> Mult:
    total = 0
    for v in values:
        total = total + v
    return total


def format_partition(partition: Sequence[EdgeClass]) -> str:
    return "; ".join(f"e:{s}->{d}=" + "|".join(mult_str(a) for a in am)
                     for s, d, am in partition)


_CLASS_RE = re.compile(r"^(?:e:)?\s*(?P<src>[^\s>-]+)\s*->\s*(?P<dst>\S+?)\s*=\s*(?P<am>[\w|∞\s]+)$")


def parse_partition(text: str) -> Tuple[EdgeClass, ...]:
    """Parse ``"e:v->v=1|1; e:v->w=2|0"``."""
    out = []
    for item in re.split(r"[;,]", text):
        item = item.strip()
        if not item:
            continue
        m = _CLASS_RE.match(item)
        if not m:
            raise InvalidMove(f"cannot parse partition entry {item!r}")
        amounts = tuple(parse_mult(a.strip()) for a in m["am"].split("|"))
        out.append((m["src"], m["dst"], amounts))
    return tuple(out)


# ---------------------------------------------------------------------------
# validation


def _need(cond: bool, reason: str) -> None:
    if not cond:
        raise InvalidMove(reason)


def _vertex(g: Graph, v: str) -> int:
    _need(v in g.vertices, f"unknown vertex {v!r}")
    return g.index(v)


def _check_composition(total: Mult, amounts: Tuple[Mult, ...], what: str) -> None:
    _need(all(a == INF or a >= 0 for a in amounts), f"negative amount in {what}")
    s = _msum(amounts)
    if total == INF:
        _need(s == INF, f"blocks of {what} must include an infinite part")
    else:
        _need(s == total, f"blocks of {what} sum to {mult_str(s)}, expected {mult_str(total)}")


def _new_labels(g: Graph, given: Tuple[str, ...], count: int, bases: Sequence[str],
                freed: Sequence[str] = ()) -> Tuple[str, ...]:
    taken = set(g.vertices) - set(freed)
    if given:
        _need(len(given) == count, f"expected {count} new labels, got {len(given)}")
        _need(len(set(given)) == count, "new labels must be distinct")
        _need(not (set(given) & taken), "new label clashes with an existing vertex")
        return given
    out = []
    for b in bases:
        lab = fresh_label(taken, b)
        taken.add(lab)
        out.append(lab)
    return tuple(out)


def return_path_count(g: Graph, v: str, cap: int = 2) -> int:
    """Number of return paths at v (paths v -> ... -> v not meeting v
    in between), capped at ``cap``."""
    i = g.index(v)
    n = len(g)
    others = [j for j in range(n) if j != i]
    clip = lambda x: cap if x == INF or x >= cap else int(x)  # noqa: E731
    total = clip(g.mult[i][i])
    # walks in g - v, counted by length with saturation; a walk of length
    # >= len(others) repeats a vertex, so the count is infinite
    cur = {j: clip(g.mult[i][j]) for j in others}
    for length in range(len(others) + 1):
        back = sum(cur[j] * clip(g.mult[j][i]) for j in others)
        if back and length >= len(others):
            return cap
        total = min(cap, total + back)
        if total >= cap:
            return cap
        nxt = {j: 0 for j in others}
        for a in others:
            if cur[a]:
                for b in others:
                    if g.mult[a][b]:
                        nxt[b] = min(cap, nxt[b] + cur[a] * clip(g.mult[a][b]))
        cur = nxt
    return total


def _blocks(m: MoveInstance) -> int:
    sizes = {len(am) for _, _, am in m.partition}
    _need(len(sizes) == 1, "all classes need the same number of blocks")
    return sizes.pop()


def check_move(g: Graph, m: MoveInstance) -> None:
    """Raise :class:`InvalidMove` with a reason unless m applies to g."""
    k = m.kind
    n = len(g)
    if k in ("S", "O", "I", "R", "CS", "R-1"):
        _need(len(m.site) == 1, f"{k} needs exactly one site vertex")
        i = _vertex(g, m.site[0])
        out = g.out_total(i)
    if k == "S":
        _need(g.in_total(i) == 0, "not a source")
        _need(0 < out < INF, "source is not a regular vertex")
        _need(n >= 2, "source removal needs at least two vertices")
        _need(not m.partition and not m.labels, "S takes no parameters")
    elif k == "S-1":
        _need(not m.site, "S-1 has no site")
        _need(bool(m.partition), "S-1 needs out-multiplicities")
        u = m.labels[0] if m.labels else m.partition[0][0]
        _new_labels(g, (u,), 1, [u])
        seen = set()
        for s, d, am in m.partition:
            _need(s == u, f"S-1 edges must start at the new vertex {u!r}")
            _vertex(g, d)
            _need(d not in seen, f"repeated class {s}->{d}")
            seen.add(d)
            _need(len(am) == 1, "S-1 takes one amount per class")
            _need(am[0] != INF and am[0] >= 0, "S-1 needs finite amounts")
        total = sum(am[0] for _, _, am in m.partition)
        _need(total > 0, "new source must emit at least one edge")
    elif k == "O":
        _need(out > 0, "cannot outsplit a sink")
        nb = _blocks(m) if m.partition else 0
        _need(nb >= 2, "outsplit needs at least two blocks")
        v = m.site[0]
        targets = {g.vertices[j] for j in range(n) if g.mult[i][j]}
        listed = set()
        for s, d, am in m.partition:
            _need(s == v, "partition must cover s^-1(v) and nothing else")
            _need(d in g.vertices and d in targets, "partition must cover s^-1(v)")
            _need(d not in listed, f"repeated class {s}->{d}")
            listed.add(d)
            _check_composition(g.multiplicity(s, d), am, f"{s}->{d}")
        _need(listed == targets, "partition must cover s^-1(v)")
        sizes = [_msum(am[b] for _, _, am in m.partition) for b in range(nb)]
        _need(all(x > 0 for x in sizes), "blocks must be nonempty")
        _need(sum(1 for x in sizes if x == INF) <= 1, "at most one block may be infinite")
        _new_labels(g, m.labels, nb, [f"{v}_{b + 1}" for b in range(nb)], freed=[v])
    elif k == "I":
        _need(0 < out < INF, "insplit needs a regular vertex")
        nb = _blocks(m) if m.partition else 0
        _need(nb >= 2, "insplit needs at least two blocks")
        v = m.site[0]
        sources = {g.vertices[j] for j in range(n) if g.mult[j][i]}
        _need(bool(sources), "cannot insplit a source")
        listed = set()
        for s, d, am in m.partition:
            _need(d == v, "partition must cover r^-1(v) and nothing else")
            _need(s in sources, "partition must cover r^-1(v)")
            _need(s not in listed, f"repeated class {s}->{d}")
            listed.add(s)
            _check_composition(g.multiplicity(s, d), am, f"{s}->{d}")
        _need(listed == sources, "partition must cover r^-1(v)")
        sizes = [_msum(am[b] for _, _, am in m.partition) for b in range(nb)]
        _need(all(x > 0 for x in sizes), "blocks must be nonempty")
        _new_labels(g, m.labels, nb, [f"{v}_{b + 1}" for b in range(nb)], freed=[v])
    elif k == "R":
        _need(out == 1, "reduction needs a vertex emitting exactly one edge")
        j = next(j for j in range(n) if g.mult[i][j])
        _need(j != i, "the single edge must not be a loop")
        _need(not m.partition and not m.labels, "R takes no parameters")
    elif k == "R-1":
        w = m.site[0]
        seen = set()
        for s, d, am in m.partition:
            _need(d == w, f"delayed edges must end at {w!r}")
            _need(s in g.vertices, f"unknown vertex {s!r}")
            _need(s not in seen, f"repeated class {s}->{d}")
            seen.add(s)
            _need(len(am) == 2, "R-1 classes take (moved|kept)")
            _need(g.multiplicity(s, d) > 0, f"no edges {s}->{d}")
            _check_composition(g.multiplicity(s, d), am, f"{s}->{d}")
        _new_labels(g, m.labels, 1, [f"{w}_d"])
    elif k in ("O-1", "I-1"):
        _need(len(m.site) >= 2 and len(set(m.site)) == len(m.site),
              "amalgamation needs at least two distinct vertices")
        idx = [_vertex(g, v) for v in m.site]
        if k == "O-1":
            first = idx[0]
            _need(all(g.mult[x][j] == g.mult[x][first] for j in idx for x in range(n)),
                  "vertices must receive identical edges")
            _need(all(g.out_total(j) > 0 for j in idx), "amalgamated vertices must not be sinks")
            _need(sum(1 for j in idx if g.out_total(j) == INF) <= 1,
                  "at most one amalgamated vertex may be an infinite emitter")
        else:
            first = idx[0]
            _need(all(g.mult[j] == g.mult[first] for j in idx),
                  "vertices must emit identical edges")
            _need(all(0 < g.out_total(j) < INF for j in idx),
                  "amalgamated vertices must be regular")
            _need(all(g.in_total(j) > 0 for j in idx), "amalgamated vertices must not be sources")
        _need(not m.partition, f"{k} takes no partition")
        _new_labels(g, m.labels, 1, [m.site[0]], freed=m.site)
    elif k == "CS":
        _need(return_path_count(g, m.site[0]) >= 2,
              "Cuntz splice needs a vertex with two distinct return paths")
        _need(not m.partition, "CS takes no partition")
        v = m.site[0]
        _new_labels(g, m.labels, 2, [f"{v}_cs1", f"{v}_cs2"])


def validate_move(g: Graph, m: MoveInstance) -> Tuple[bool, str]:
    try:
        check_move(g, m)
    except InvalidMove as exc:
        return False, str(exc)
    except (KeyError, ValueError) as exc:
        return False, str(exc)
    return True, "ok"


# ---------------------------------------------------------------------------
# application


def _build(vertices: List[str], edges: Dict[Tuple[str, str], Mult]) -> Graph:
    return Graph.from_edges(vertices, {k: v for k, v in edges.items() if v})


def _edges(g: Graph) -> Dict[Tuple[str, str], Mult]:
    return {(v, w): g.mult[i][j] for i, v in enumerate(g.vertices)
            for j, w in enumerate(g.vertices) if g.mult[i][j]}


def _replace(vertices: Sequence[str], old: Sequence[str], new: Sequence[str]) -> List[str]:
    """Put ``new`` where the first of ``old`` stood; drop the rest of ``old``."""
    out = []
    old = set(old)
    placed = False
    for v in vertices:
        if v in old:
            if not placed:
                out.extend(new)
                placed = True
        else:
            out.append(v)
    return out


def resolve_labels(g: Graph, m: MoveInstance) -> MoveInstance:
    """Fill in automatic labels so that the instance is fully explicit."""
    if m.labels or m.kind in ("S", "R"):
        return m
    k = m.kind
    if k in ("O", "I"):
        v = m.site[0]
        nb = _blocks(m)
        labels = _new_labels(g, (), nb, [f"{v}_{b + 1}" for b in range(nb)], freed=[v])
    elif k == "R-1":
        labels = _new_labels(g, (), 1, [f"{m.site[0]}_d"])
    elif k in ("O-1", "I-1"):
        labels = (m.site[0],)
    elif k == "CS":
        v = m.site[0]
        labels = _new_labels(g, (), 2, [f"{v}_cs1", f"{v}_cs2"])
    elif k == "S-1":
        return m
    return MoveInstance(m.kind, m.site, m.partition, labels)


def apply_move(g: Graph, m: MoveInstance) -> Graph:
    check_move(g, m)
    m = resolve_labels(g, m)
    k = m.kind
    E = _edges(g)
    V = list(g.vertices)

    if k == "S":
        v = m.site[0]
        V.remove(v)
        return _build(V, {e: x for e, x in E.items() if v not in e})

    if k == "S-1":
        u = m.partition[0][0]
        for s, d, am in m.partition:
            E[(u, d)] = am[0]
        return _build(V + [u], E)

    if k == "O":
        v = m.site[0]
        new = m.labels
        amounts = {d: am for _, d, am in m.partition}
        out: Dict[Tuple[str, str], Mult] = {}
        for (x, y), c in E.items():
            if x != v and y != v:
                out[(x, y)] = c
            elif x != v and y == v:
                for vj in new:
                    out[(x, vj)] = c
        for b, vb in enumerate(new):
            for d, am in amounts.items():
                if d == v:
                    for vj in new:
                        out[(vb, vj)] = am[b]
                else:
                    out[(vb, d)] = am[b]
        return _build(_replace(V, [v], new), out)

    if k == "I":
        v = m.site[0]
        new = m.labels
        amounts = {s: am for s, _, am in m.partition}
        out = {}
        for (x, y), c in E.items():
            if x != v and y != v:
                out[(x, y)] = c
            elif x == v and y != v:
                for vj in new:
                    out[(vj, y)] = c
        for b, vb in enumerate(new):
            for s, am in amounts.items():
                if s == v:
                    for vj in new:
                        out[(vj, vb)] = am[b]
                else:
                    out[(s, vb)] = am[b]
        return _build(_replace(V, [v], new), out)

    if k == "R":
        v = m.site[0]
        w = next(y for (x, y) in E if x == v)
        out = {}
        for (x, y), c in E.items():
            if x == v:
                continue
            if y == v:
                out[(x, w)] = out.get((x, w), 0) + c
            else:
                out[(x, y)] = out.get((x, y), 0) + c
        V.remove(v)
        return _build(V, out)

    if k == "R-1":
        w = m.site[0]
        (v,) = m.labels
        for s, _, (moved, kept) in m.partition:
            E[(s, w)] = kept
            E[(s, v)] = moved
        E[(v, w)] = 1
        return _build(V + [v], E)

    if k == "O-1":
        site = m.site
        (lab,) = m.labels
        first = site[0]
        out = {}
        for (x, y), c in E.items():
            xs, ys = x in site, y in site
            if not xs and not ys:
                out[(x, y)] = c
            elif not xs and y == first:
                out[(x, lab)] = c
            elif xs and not ys:
                out[(lab, y)] = out.get((lab, y), 0) + c
            elif xs and y == first:
                out[(lab, lab)] = out.get((lab, lab), 0) + c
        return _build(_replace(V, site, [lab]), out)

    if k == "I-1":
        site = m.site
        (lab,) = m.labels
        first = site[0]
        out = {}
        for (x, y), c in E.items():
            xs, ys = x in site, y in site
            if not xs and not ys:
                out[(x, y)] = c
            elif x == first and not ys:
                out[(lab, y)] = c
            elif not xs and ys:
                out[(x, lab)] = out.get((x, lab), 0) + c
            elif x == first and ys:
                out[(lab, lab)] = out.get((lab, lab), 0) + c
        return _build(_replace(V, site, [lab]), out)

    if k == "CS":
        v = m.site[0]
        v1, v2 = m.labels
        E.update({(v, v1): 1, (v1, v): 1, (v1, v1): 1, (v1, v2): 1, (v2, v1): 1, (v2, v2): 1})
        return _build(V + [v1, v2], E)

    raise InvalidMove(f"unhandled kind {k}")  # pragma: no cover


def inverse_move(g: Graph, m: MoveInstance) -> Optional[MoveInstance]:
    """An instance undoing m: applied to ``apply_move(g, m)`` it gives back g
    with its original labels (vertex order may differ).  None for CS."""
    check_move(g, m)
    m = resolve_labels(g, m)
    k = m.kind
    if k == "CS":
        return None
    if k == "S":
        v = m.site[0]
        i = g.index(v)
        part = tuple((v, w, (g.mult[i][j],)) for j, w in enumerate(g.vertices) if g.mult[i][j])
        return MoveInstance("S-1", (), part, (v,))
    if k == "S-1":
        return MoveInstance("S", (m.partition[0][0],))
    if k in ("O", "I"):
        return MoveInstance(INVERSE_KIND[k], m.labels, (), m.site)
    if k == "O-1":
        site, lab = m.site, m.labels[0]
        idx = [g.index(v) for v in site]
        part = []
        for j, y in enumerate(g.vertices):
            if y in site:
                continue
            am = tuple(g.mult[i][j] for i in idx)
            if _msum(am):
                part.append((lab, y, am))
        loop = tuple(g.mult[i][idx[0]] for i in idx)
        if _msum(loop):
            part.append((lab, lab, loop))
        return MoveInstance("O", (lab,), tuple(part), site)
    if k == "I-1":
        site, lab = m.site, m.labels[0]
        idx = [g.index(v) for v in site]
        part = []
        for j, x in enumerate(g.vertices):
            if x in site:
                continue
            am = tuple(g.mult[j][i] for i in idx)
            if _msum(am):
                part.append((x, lab, am))
        loop = tuple(g.mult[idx[0]][i] for i in idx)
        if _msum(loop):
            part.append((lab, lab, loop))
        return MoveInstance("I", (lab,), tuple(part), site)
    if k == "R":
        v = m.site[0]
        i = g.index(v)
        j = next(j for j in range(len(g)) if g.mult[i][j])
        w = g.vertices[j]
        part = tuple((x, w, (g.mult[a][i], g.mult[a][j]))
                     for a, x in enumerate(g.vertices) if a != i and g.mult[a][i])
        return MoveInstance("R-1", (w,), part, (v,))
    if k == "R-1":
        return MoveInstance("R", m.labels)
    raise InvalidMove(f"unhandled kind {k}")  # pragma: no cover


def rename_move(m: MoveInstance, mapping: Dict[str, str]) -> MoveInstance:
    """Rename every vertex reference in m, new labels included."""
    def r(v):
        return mapping.get(v, v)
    part = tuple((r(s), r(d), am) for s, d, am in m.partition)
    return MoveInstance(m.kind, tuple(r(v) for v in m.site), part, tuple(r(v) for v in m.labels))


def created_labels(m: MoveInstance) -> Tuple[str, ...]:
    """Labels of the vertices a fully resolved instance creates."""
    if m.kind == "S-1":
        return (m.partition[0][0],)
    return m.labels


# ---------------------------------------------------------------------------
# enumeration


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _block_partitions(classes: List[Tuple[str, str, Mult]], parts: int, max_new_mult: int,
                      one_infinite_block: bool) -> List[Tuple[EdgeClass, ...]]:
    """Unordered splittings of the parallel classes into ``parts`` nonempty blocks.

    Blocks are produced in nondecreasing order, so each multiset of blocks
    appears once.  An infinite class gives every block a share in
    ``0..max_new_mult`` or infinitely many edges, with at least one block
    infinite.
    """
    totals = [c for _, _, c in classes]
    inf_share = list(range(max_new_mult + 1)) + [INF]
    out = []

    def key(block):
        return tuple(_mkey(a) for a in block)

    def finish(blocks):
        if one_infinite_block and sum(1 for b in blocks if INF in b) > 1:
            return
        out.append(tuple((s, d, tuple(b[c] for b in blocks))
                         for c, (s, d, _) in enumerate(classes)))

    def blocks_from(options, lo):
        # product of the options in increasing key order, starting at lo
        n = len(options)

        def gen(c, tight):
            if c == n:
                yield ()
                return
            for a in options[c]:
                if tight and _mkey(a) < lo[c]:
                    continue
                for rest in gen(c + 1, tight and _mkey(a) == lo[c]):
                    yield (a,) + rest
        return gen(0, lo is not None)

    def rec(blocks, rem, inf_used):
        lo = key(blocks[-1]) if blocks else None
        last = len(blocks) == parts - 1
        options = []
        for c, r in enumerate(rem):
            if r != INF:
                options.append((r,) if last else range(r + 1))
            elif last and not inf_used[c]:
                options.append((INF,))
            else:
                options.append(inf_share)
        for block in blocks_from(options, lo):
            if not any(block):
                continue
            nxt = blocks + [block]
            if last:
                finish(nxt)
                continue
            rec(nxt, [r if r == INF else r - a for r, a in zip(rem, block)],
                [u or a == INF for u, a in zip(inf_used, block)])

    rec([], totals, [False] * len(totals))
    return out


def enumerate_moves(g: Graph, max_partition_blocks: int = 3, max_new_mult: int = 1,
                    include_cs: bool = True, bound: Optional[int] = None,
                    kinds: Optional[Sequence[str]] = None) -> List[MoveInstance]:
    """Every valid instance within the bounds, in canonical order.

    ``max_new_mult`` caps the out-multiplicity of an added source and the
    finite share split off an infinite class.
    """
    check_vertex_bound(g, bound=bound)
    allowed = set(kinds) if kinds is not None else set(KINDS)
    if not include_cs:
        allowed.discard("CS")
    n = len(g)
    V = g.vertices
    moves: List[MoveInstance] = []
    outs = [g.out_total(i) for i in range(n)]
    ins = [g.in_total(i) for i in range(n)]

    for i, v in enumerate(V):
        regular = 0 < outs[i] < INF
        if "S" in allowed and regular and ins[i] == 0 and n >= 2:
            moves.append(MoveInstance("S", (v,)))
        if "R" in allowed and outs[i] == 1:
            j = next(j for j in range(n) if g.mult[i][j])
            if j != i:
                moves.append(MoveInstance("R", (v,)))
        if "O" in allowed and outs[i] > 0:
            classes = [(v, V[j], g.mult[i][j]) for j in range(n) if g.mult[i][j]]
            for parts in range(2, max_partition_blocks + 1):
                for part in _block_partitions(classes, parts, max_new_mult, True):
                    moves.append(MoveInstance("O", (v,), part))
        if "I" in allowed and regular and ins[i] > 0:
            classes = [(V[j], v, g.mult[j][i]) for j in range(n) if g.mult[j][i]]
            for parts in range(2, max_partition_blocks + 1):
                for part in _block_partitions(classes, parts, max_new_mult, False):
                    moves.append(MoveInstance("I", (v,), part))
        if "R-1" in allowed:
            classes = [(V[j], v, g.mult[j][i]) for j in range(n) if g.mult[j][i]]
            options = []
            for _, _, c in classes:
                if c == INF:
                    opts = [(a, INF) for a in range(max_new_mult + 1)]
                    opts += [(INF, b) for b in list(range(max_new_mult + 1)) + [INF]]
                else:
                    opts = [(a, c - a) for a in range(c + 1)]
                options.append(opts)
            for choice in itertools.product(*options):
                part = tuple((s, d, am) for (s, d, _), am in zip(classes, choice) if am[0])
                moves.append(MoveInstance("R-1", (v,), part))
        if "CS" in allowed and return_path_count(g, v) >= 2:
            moves.append(MoveInstance("CS", (v,)))

    if "S-1" in allowed:
        for total in range(1, max_new_mult + 1):
            for comp in _compositions(total, n):
                moves.append(MoveInstance("S-1", (), tuple(
                    ("s", V[j], (c,)) for j, c in enumerate(comp) if c)))

    for kind in ("O-1", "I-1"):
        if kind not in allowed:
            continue
        groups: Dict[tuple, List[int]] = {}
        for i in range(n):
            key = tuple(g.mult[x][i] for x in range(n)) if kind == "O-1" else g.mult[i]
            groups.setdefault(key, []).append(i)
        for members in groups.values():
            for size in range(2, min(len(members), max_partition_blocks) + 1):
                for combo in itertools.combinations(members, size):
                    m = MoveInstance(kind, tuple(V[i] for i in combo))
                    if validate_move(g, m)[0]:
                        moves.append(m)

    resolved = []
    for m in moves:
        if m.kind == "S-1":
            lab = fresh_label(V, "s")
            m = MoveInstance("S-1", (), tuple((lab, d, am) for _, d, am in m.partition), (lab,))
        resolved.append(resolve_labels(g, m))
    resolved.sort(key=MoveInstance.sort_key)
    return resolved
