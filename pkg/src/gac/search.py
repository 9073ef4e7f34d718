"""Bounded move-sequence search between graphs.

Bidirectional breadth-first search over (S), (O), (I), (R) and their
inverses, with states deduplicated by canonical form.  Moves found from the
target side are inverted and transported onto the forward graph, so the
result is one labeled sequence that replays from the start graph.

A failed search is not evidence of inequivalence: the move relation is
infinite and only a bounded slice of it is explored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from gac.canon import canonical_key
from gac.exactalg import groups_isomorphic
from gac.graph import (
    INF,
    BoundExceeded,
    Graph,
    find_isomorphism,
    fresh_label,
    graph_from_json,
    graph_to_json,
    graphs_isomorphic,
)
from gac.ktheory import invariants_cstar
from gac.moves import (
    MoveInstance,
    apply_move,
    check_move,
    created_labels,
    enumerate_moves,
    inverse_move,
    rename_move,
    resolve_labels,
)

INCONCLUSIVE = "inconclusive at bounds"

# every MERGE_SAMPLE-th deduplicated state is re-verified by backtracking
MERGE_SAMPLE = 16


class SelfCheckError(AssertionError):
    """A move changed an invariant it must preserve."""


@dataclass(frozen=True)
class SearchOptions:
    max_depth: int = 6
    max_vertices: int = 8
    max_total_multiplicity: int = 40
    max_partition_blocks: int = 3
    max_new_mult: int = 1
    allow_cs: bool = False
    self_check: bool = True

    def __post_init__(self):
        for name in ("max_depth", "max_vertices", "max_total_multiplicity",
                     "max_partition_blocks", "max_new_mult"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_partition_blocks < 2:
            raise ValueError("max_partition_blocks must be at least 2")


@dataclass
class MovePath:
    start: Graph
    steps: List[MoveInstance]
    end: Graph

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "start": graph_to_json(self.start),
            "steps": [m.to_json() for m in self.steps],
            "end": graph_to_json(self.end),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MovePath":
        return cls(graph_from_json(data["start"]),
                   [MoveInstance.from_json(s) for s in data.get("steps", [])],
                   graph_from_json(data["end"]))

    def __str__(self) -> str:
        if not self.steps:
            return "empty path (graphs are isomorphic)"
        return "\n".join(f"{i + 1}. {m}" for i, m in enumerate(self.steps))


@dataclass
class SearchStats:
    expanded: int = 0
    states: int = 0
    merges: int = 0
    merges_verified: int = 0
    reason: str = ""


def total_multiplicity(g: Graph) -> int:
    return sum(m for row in g.mult for m in row if m != INF)


def _within(g: Graph, opts: SearchOptions) -> bool:
    return len(g) <= opts.max_vertices and total_multiplicity(g) <= opts.max_total_multiplicity


@dataclass
class _Node:
    graph: Graph
    parent: Optional[tuple]
    move: Optional[MoveInstance]
    depth: int


class _Side:
    def __init__(self, sign: Optional[str]):
        self.nodes: Dict[tuple, _Node] = {}
        self.frontier: List[tuple] = []
        self.depth = 0
        self.sign = sign

    def add(self, key, node: _Node) -> None:
        self.nodes[key] = node
        self.frontier.append(key)

    def moves_to(self, key) -> List[MoveInstance]:
        out = []
        node = self.nodes[key]
        while node.parent is not None:
            out.append(node.move)
            node = self.nodes[node.parent]
        out.reverse()
        return out


def _transport(current: Graph, back_graphs: List[Graph], back_moves: List[MoveInstance],
               psi: Dict[str, str]) -> List[MoveInstance]:
    """Undo the target-side moves, relabeled to act on ``current``.

    ``back_graphs[i]`` is the target-side graph before ``back_moves[i]``;
    ``psi`` maps the labels of the last target-side graph to ``current``.
    """
    steps = []
    for before, m in zip(reversed(back_graphs), reversed(back_moves)):
        inv = inverse_move(before, m)
        inv = resolve_labels(apply_move(before, m), inv)
        mapping = dict(psi)
        taken = set(current.vertices)
        for lab in created_labels(inv):
            if lab not in mapping:
                mapping[lab] = fresh_label(taken | set(mapping.values()), lab)
        step = rename_move(inv, mapping)
        current = apply_move(current, step)
        psi = {v: mapping[v] for v in before.vertices}
        if not current.same_labeled(before.relabel(psi)):  # pragma: no cover
            raise SelfCheckError(f"transported move {step} did not reproduce the target side")
        steps.append(step)
    return steps


def find_move_path(g: Graph, h: Graph, opts: Optional[SearchOptions] = None,
                   stats: Optional[SearchStats] = None) -> Optional[MovePath]:
    """A move sequence turning g into a graph isomorphic to h, or None.

    None means "inconclusive at bounds"; ``stats.reason`` says why when a
    stats object is passed.
    """
    opts = opts or SearchOptions()
    stats = stats if stats is not None else SearchStats()
    for name, x in (("first", g), ("second", h)):
        if not _within(x, opts):
            raise BoundExceeded(f"{name} graph exceeds the search bounds "
                                f"({len(x)} vertices, total multiplicity {total_multiplicity(x)})")
    kg, kh = canonical_key(g), canonical_key(h)
    if kg == kh:
        return MovePath(g, [], h)

    ig, ih = invariants_cstar(g), invariants_cstar(h)
    if not (groups_isomorphic(ig.k0, ih.k0) and groups_isomorphic(ig.k1_topological, ih.k1_topological)
            and ig.singular_count == ih.singular_count):
        stats.reason = "invariants preserved by every move differ"
        return None
    need_cs = ig.det_sign != ih.det_sign
    if need_cs and not opts.allow_cs:
        stats.reason = "det signs differ and the Cuntz splice is not allowed"
        return None

    fwd, bwd = _Side(ig.det_sign), _Side(ih.det_sign)
    fwd.add(kg, _Node(g, None, None, 0))
    bwd.add(kh, _Node(h, None, None, 0))
    k0 = ig.k0

    def admit(side: _Side, other: _Side, key, node: _Node):
        """Record a new state; return the meeting key if the sides touch."""
        if key in side.nodes:
            stats.merges += 1
            if stats.merges % MERGE_SAMPLE == 0:
                stats.merges_verified += 1
                if not graphs_isomorphic(node.graph, side.nodes[key].graph,
                                         bound=opts.max_vertices):  # pragma: no cover
                    raise SelfCheckError("canonical keys merged non-isomorphic graphs")
            return None
        if opts.self_check:
            inv = invariants_cstar(node.graph)
            if not groups_isomorphic(inv.k0, k0) or inv.det_sign != side.sign:
                raise SelfCheckError(f"move {node.move} broke K0 or the det sign")
        side.add(key, node)
        stats.states += 1
        return key if key in other.nodes else None

    meet = None
    if need_cs:
        fwd.frontier = []
        fwd.sign = ih.det_sign
        for m in enumerate_moves(g, opts.max_partition_blocks, opts.max_new_mult,
                                 bound=opts.max_vertices, kinds=("CS",)):
            child = apply_move(g, m)
            if _within(child, opts):
                meet = meet or admit(fwd, bwd, canonical_key(child), _Node(child, kg, m, 1))
        fwd.depth = 1
        if not fwd.frontier:
            stats.reason = "no Cuntz splice site within bounds"
            return None

    while meet is None and fwd.depth + bwd.depth < opts.max_depth:
        side, other = (fwd, bwd) if len(fwd.frontier) <= len(bwd.frontier) else (bwd, fwd)
        if not side.frontier:
            side, other = other, side
            if not side.frontier:
                break
        layer, side.frontier = side.frontier, []
        side.depth += 1
        for key in layer:
            node = side.nodes[key]
            stats.expanded += 1
            for m in enumerate_moves(node.graph, opts.max_partition_blocks, opts.max_new_mult,
                                     include_cs=False, bound=opts.max_vertices):
                child = apply_move(node.graph, m)
                if not _within(child, opts):
                    continue
                meet = admit(side, other, canonical_key(child),
                             _Node(child, key, m, node.depth + 1))
                if meet is not None:
                    break
            if meet is not None:
                break

    if meet is None:
        stats.reason = f"no path within depth {opts.max_depth}"
        return None

    steps = fwd.moves_to(meet)
    current = g
    for m in steps:
        current = apply_move(current, m)
    back_moves = bwd.moves_to(meet)
    back_graphs = [h]
    for m in back_moves[:-1]:
        back_graphs.append(apply_move(back_graphs[-1], m))
    meet_graph = bwd.nodes[meet].graph
    psi = find_isomorphism(meet_graph, current, bound=opts.max_vertices)
    if psi is None:  # pragma: no cover
        raise SelfCheckError("meeting states are not isomorphic")
    steps += _transport(current, back_graphs, back_moves, psi)
    return MovePath(g, steps, h)


def replay(p: MovePath) -> Tuple[bool, str, Optional[Graph]]:
    """Replay p step by step; ``(ok, reason, final graph)``."""
    current = p.start
    for i, m in enumerate(p.steps):
        try:
            check_move(current, m)
            current = apply_move(current, m)
        except (ValueError, KeyError) as exc:
            return False, f"step {i + 1} ({m}): {exc}", None
    try:
        same = graphs_isomorphic(current, p.end, bound=max(len(current), len(p.end)))
    except BoundExceeded as exc:  # pragma: no cover
        return False, str(exc), current
    if not same:
        return False, "final graph is not isomorphic to the stated end", current
    return True, "ok", current


def replay_and_check(p: MovePath) -> bool:
    return replay(p)[0]
