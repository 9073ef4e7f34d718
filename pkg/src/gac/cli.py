"""Command-line interface: ``gac <verb> ...``.

Exit codes: 0 success or Equivalent, 1 NotEquivalent (or an invalid path
certificate), 2 Unknown or inconclusive search, 3 usage or hypothesis error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from gac.classify import (
    EQUIVALENT,
    NOT_EQUIVALENT,
    CrossCheckError,
    HypothesisError,
    Verdict,
    cstar_morita_decide,
    flow_equivalence_decide,
    leavitt_morita_decide,
)
from gac.exactalg import parse_abgroup
from gac.graph import (
    BoundExceeded,
    Graph,
    GraphFormatError,
    check_vertex_bound,
    graph_to_json,
    parse_graph,
    serialize_graph,
)
from gac.ktheory import cuntz_algebra_graph, invariants_cstar, invariants_leavitt, parse_field
from gac.moves import InvalidMove, MoveInstance, apply_move, parse_partition, resolve_labels
from gac.search import (
    INCONCLUSIVE,
    MovePath,
    SearchOptions,
    SearchStats,
    find_move_path,
    replay,
)

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
VERDICT_EXIT = {EQUIVALENT: EXIT_OK, NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT}

BUNDLED = ("e2.txt", "e2cs.txt", "example.txt", "square.txt", "inf_loop.txt", "inf_pair.txt")


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text()
    if path in BUNDLED:
        return resources.files("gac").joinpath("data", path).read_text()
    raise UsageError(f"no such file: {path}")


def load_graph(path: str) -> Graph:
    """Read a graph file; bundled corpus names (``e2.txt`` ...) resolve to
    the packaged copies when no such file exists locally."""
    try:
        g = parse_graph(_read_text(path))
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    check_vertex_bound(g)
    return g


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_invariants(args) -> int:
    g = load_graph(args.graph)
    if args.algebra == "leavitt":
        bundle = invariants_leavitt(g, parse_field(args.field or "C"))
    else:
        bundle = invariants_cstar(g)
    _emit(args, bundle.to_json(), bundle.summary())
    return EXIT_OK


def _verdict(args, a: Graph, b: Graph) -> Verdict:
    if args.regime == "flow":
        return flow_equivalence_decide(a, b)
    if args.regime == "cstar":
        return cstar_morita_decide(a, b, args.assume_simple, args.assume_purely_infinite)
    if (args.k6_a is None) != (args.k6_b is None):
        raise UsageError("--k6-a and --k6-b go together")
    k6_a = parse_abgroup(args.k6_a) if args.k6_a is not None else None
    k6_b = parse_abgroup(args.k6_b) if args.k6_b is not None else None
    return leavitt_morita_decide(a, b, parse_field(args.field or "C"), k6_a, k6_b,
                                 args.assume_simple, args.assume_purely_infinite)


def cmd_classify(args) -> int:
    a, b = load_graph(args.a), load_graph(args.b)
    verdict = _verdict(args, a, b)
    _emit(args, verdict.to_json(), str(verdict))
    return VERDICT_EXIT.get(verdict.result, EXIT_UNKNOWN)


def _csv(text: Optional[str]) -> tuple:
    if not text:
        return ()
    return tuple(x.strip() for x in text.split(",") if x.strip())


def cmd_move(args) -> int:
    g = load_graph(args.graph)
    m = MoveInstance(args.move, _csv(args.at),
                     parse_partition(args.partition) if args.partition else (),
                     _csv(args.labels))
    out = apply_move(g, m)
    m = resolve_labels(g, m)
    _emit(args, {"move": m.to_json(), "graph": graph_to_json(out)},
          f"# {m}\n{serialize_graph(out)}")
    return EXIT_OK


def _search_options(args) -> SearchOptions:
    return SearchOptions(max_depth=args.max_depth, max_vertices=args.max_vertices,
                         max_total_multiplicity=args.max_total_multiplicity,
                         max_partition_blocks=args.max_partition_blocks,
                         max_new_mult=args.max_new_mult, allow_cs=args.allow_cs)


def cmd_search(args) -> int:
    a, b = load_graph(args.a), load_graph(args.b)
    stats = SearchStats()
    path = find_move_path(a, b, _search_options(args), stats)
    if path is None:
        _emit(args, {"found": False, "status": INCONCLUSIVE, "reason": stats.reason},
              f"{INCONCLUSIVE} ({stats.reason})")
        return EXIT_UNKNOWN
    if args.output:
        Path(args.output).write_text(json.dumps(path.to_json(), indent=2, sort_keys=True) + "\n")
    _emit(args, {"found": True, "path": path.to_json()},
          f"path of length {len(path)}\n{path}")
    return EXIT_OK


def cmd_check_path(args) -> int:
    try:
        data = json.loads(_read_text(args.path))
        path = MovePath.from_json(data.get("path", data))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.path}: not a path certificate ({exc})") from None
    ok, reason, _ = replay(path)
    _emit(args, {"valid": ok, "reason": reason, "steps": len(path)},
          f"{'valid' if ok else 'invalid'}: {reason}")
    return EXIT_OK if ok else EXIT_NOT_EQUIVALENT


def cmd_demo(args) -> int:
    e2, e2cs = load_graph("e2.txt"), load_graph("e2cs.txt")
    example, square = load_graph("example.txt"), load_graph("square.txt")
    inf_loop, inf_pair = load_graph("inf_loop.txt"), load_graph("inf_pair.txt")
    records = []
    lines = []
    for name, g in (("E2", e2), ("E2 spliced", e2cs), ("example", example),
                    ("example spliced", apply_move(example, MoveInstance("CS", ("v",)))),
                    ("infinite loop", inf_loop), ("infinite pair", inf_pair)):
        bundle = invariants_cstar(g)
        records.append({"graph": name, "invariants": bundle.to_json()})
        lines.append(f"{name}: {bundle.summary()}")
    for n in range(2, 9):
        bundle = invariants_cstar(cuntz_algebra_graph(n))
        records.append({"graph": f"O_{n}", "invariants": bundle.to_json()})
        lines.append(f"O_{n}: {bundle.summary()}")
    for label, v in (
            ("E2 vs E2 spliced, C*", cstar_morita_decide(e2, e2cs)),
            ("E2 vs E2 spliced, Leavitt over C", leavitt_morita_decide(e2, e2cs, parse_field("C"))),
            ("infinite pair, C*", cstar_morita_decide(inf_loop, inf_pair)),
            ("infinite pair, Leavitt over C",
             leavitt_morita_decide(inf_loop, inf_pair, parse_field("C")))):
        records.append({"pair": label, "verdict": v.to_json()})
        lines.append(f"{label}: {v.result} ({v.theorem})")
    path = find_move_path(e2, square)
    records.append({"pair": "E2 -> square", "path": path.to_json()})
    lines.append(f"E2 -> square: {'; '.join(str(m) for m in path.steps)}")
    _emit(args, {"demo": records}, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gac", description="Graph algebra classification toolkit")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    def field_flag(p):
        p.add_argument("--field", help="C, R, Q, F_<q>, numberfield:<name> or "
                                       "custom:units=<group>,nfq=<bool>,numfield=<bool> (default C)")

    p = add("invariants", cmd_invariants, "K-theoretic invariants of a graph")
    p.add_argument("graph")
    p.add_argument("--algebra", choices=("cstar", "leavitt"), default="cstar")
    field_flag(p)

    p = add("classify", cmd_classify, "decide equivalence of two graphs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--regime", choices=("flow", "cstar", "leavitt"), default="cstar")
    field_flag(p)
    p.add_argument("--k6-a", help="K6 of the first Leavitt path algebra, e.g. 'Z/2 + Z^3'")
    p.add_argument("--k6-b", help="K6 of the second Leavitt path algebra")
    p.add_argument("--assume-simple", action="store_true")
    p.add_argument("--assume-purely-infinite", action="store_true")

    p = add("move", cmd_move, "apply one graph move")
    p.add_argument("graph")
    p.add_argument("--move", required=True, help="S, S-1, O, O-1, I, I-1, R, R-1 or CS")
    p.add_argument("--at", help="site vertex, or comma-separated vertices for O-1/I-1")
    p.add_argument("--partition", help="e.g. 'e:v->v=1|1; e:v->w=2|0'")
    p.add_argument("--labels", help="comma-separated labels for new vertices")

    p = add("search", cmd_search, "search for a move sequence between two graphs")
    p.add_argument("a")
    p.add_argument("b")
    defaults = SearchOptions()
    p.add_argument("--allow-cs", action="store_true", help="permit one Cuntz splice")
    p.add_argument("--max-depth", type=int, default=defaults.max_depth)
    p.add_argument("--max-vertices", type=int, default=defaults.max_vertices)
    p.add_argument("--max-total-multiplicity", type=int, default=defaults.max_total_multiplicity)
    p.add_argument("--max-partition-blocks", type=int, default=defaults.max_partition_blocks)
    p.add_argument("--max-new-mult", type=int, default=defaults.max_new_mult)
    p.add_argument("--output", "-o", help="write the path certificate to this JSON file")

    p = add("check-path", cmd_check_path, "replay a path certificate")
    p.add_argument("path")

    add("demo", cmd_demo, "run the built-in example corpus")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, HypothesisError, InvalidMove, BoundExceeded, ValueError) as exc:
        print(f"gac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrossCheckError as exc:
        print(f"gac: theorem cross-check failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
