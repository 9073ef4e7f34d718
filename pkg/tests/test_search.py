import json
import random

import pytest

from gac.graph import INF, BoundExceeded, Graph, structural_report
from gac.ktheory import cuntz_algebra_graph
from gac.moves import MoveInstance, apply_move, enumerate_moves
from gac.search import (
    MovePath,
    SearchOptions,
    SearchStats,
    find_move_path,
    replay,
    replay_and_check,
    total_multiplicity,
)

E2 = cuntz_algebra_graph(2)
SQUARE = Graph.from_matrix([[1, 1], [1, 1]], ["a", "b"])
EXAMPLE = Graph.from_matrix([[1, 1], [1, 0]], ["u", "v"])


def test_outsplit_path():
    p = find_move_path(E2, SQUARE)
    assert len(p) == 1 and p.steps[0].kind == "O"
    assert replay_and_check(p)


def test_identical_graphs_give_empty_path():
    p = find_move_path(E2, E2)
    assert p.steps == [] and replay_and_check(p)


def test_cs_injection():
    spliced = apply_move(EXAMPLE, MoveInstance("CS", ("v",)))
    stats = SearchStats()
    assert find_move_path(EXAMPLE, spliced, stats=stats) is None
    assert "Cuntz splice" in stats.reason
    p = find_move_path(EXAMPLE, spliced, SearchOptions(allow_cs=True))
    assert p is not None and [m.kind for m in p.steps].count("CS") == 1
    assert replay_and_check(p)


def test_invariant_mismatch_is_inconclusive():
    stats = SearchStats()
    assert find_move_path(E2, cuntz_algebra_graph(3), stats=stats) is None
    assert stats.reason


def test_bounds_on_inputs():
    big = Graph.from_matrix([[1] * 9 for _ in range(9)])
    with pytest.raises(BoundExceeded):
        find_move_path(big, E2)
    with pytest.raises(BoundExceeded):
        find_move_path(Graph.from_matrix([[41]]), E2)
    with pytest.raises(ValueError):
        SearchOptions(max_depth=0)


def test_replay_rejects_corruption():
    p = find_move_path(E2, SQUARE)
    bad = MovePath(p.start, [MoveInstance("O", ("v",), (("v", "v", (2, 0)),))], p.end)
    assert not replay_and_check(bad)
    assert not replay_and_check(MovePath(E2, [], SQUARE))
    ok, reason, _ = replay(MovePath(E2, [MoveInstance("S", ("v",))], E2))
    assert not ok and "step 1" in reason


def test_path_json_round_trip():
    p = find_move_path(EXAMPLE, apply_move(EXAMPLE, MoveInstance("CS", ("u",))),
                       SearchOptions(allow_cs=True))
    q = MovePath.from_json(json.loads(json.dumps(p.to_json())))
    assert q.steps == p.steps and replay_and_check(q)


def seed_graph(rng):
    while True:
        n = rng.randint(1, 3)
        m = [[rng.choice([0, 0, 1, 1, 2]) for _ in range(n)] for _ in range(n)]
        if rng.random() < 0.2:
            m[rng.randrange(n)][rng.randrange(n)] = INF
        g = Graph.from_matrix(m, [f"x{i}" for i in range(n)])
        if structural_report(g).simple:
            return g


def scramble(rng, g, steps, opts):
    for _ in range(steps):
        moves = enumerate_moves(g, opts.max_partition_blocks, opts.max_new_mult,
                                include_cs=False, bound=opts.max_vertices)
        rng.shuffle(moves)
        for m in moves:
            h = apply_move(g, m)
            if len(h) <= opts.max_vertices and total_multiplicity(h) <= opts.max_total_multiplicity:
                g = h
                break
    return g


def test_search_is_symmetric_and_deterministic():
    rng = random.Random(61)
    opts = SearchOptions(max_depth=4, max_vertices=6)
    for _ in range(6):
        g = seed_graph(rng)
        h = scramble(rng, g, 2, opts)
        p, q = find_move_path(g, h, opts), find_move_path(h, g, opts)
        assert (p is None) == (q is None)
        assert p is not None and replay_and_check(p) and replay_and_check(q)
        again = find_move_path(g, h, opts)
        assert again.steps == p.steps


def test_dedup_merges_are_verified():
    stats = SearchStats()
    h = Graph.from_matrix([[2, 2], [1, 2]], ["p", "q"])
    assert find_move_path(E2, h, SearchOptions(max_depth=3, max_vertices=5), stats) is None
    assert "depth" in stats.reason
    assert stats.merges >= 16 and stats.merges_verified >= 1
