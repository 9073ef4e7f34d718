"""Decision procedures for Morita and flow equivalence.

Each theorem is a rule over invariants.  Verdicts are three-valued; an
``Unknown`` verdict always says why.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from gac.exactalg import AbGroup, groups_isomorphic
from gac.graph import Graph, StructuralReport, classify_vertices, structural_report
from gac.ktheory import (
    FieldDescriptor,
    InvariantBundle,
    bowen_franks,
    invariants_cstar,
    invariants_leavitt,
)

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
UNKNOWN = "Unknown"

THEOREMS = ("franks-ps", "cuntz-krieger", "rordam", "sorensen", "alps",
            "ruiz-tomforde", "nfq", "number-field", "finite-dimensional")

CS_NOTE = "one application of Move (CS)"
OPEN_QUESTION_1 = "Open Question 1"


class HypothesisError(ValueError):
    """A theorem's hypotheses fail (and were not assumed)."""


class CrossCheckError(RuntimeError):
    """Two applicable theorems disagree; never resolved silently."""


@dataclass
class Verdict:
    result: str
    theorem: str
    compared: List[Tuple[str, str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.result == UNKNOWN and not self.notes:
            raise ValueError("an Unknown verdict needs a note")

    def to_json(self) -> dict:
        return {
            "result": self.result,
            "theorem": self.theorem,
            "compared": [{"invariant": n, "a": a, "b": b} for n, a, b in self.compared],
            "notes": list(self.notes),
        }

    def __str__(self) -> str:
        lines = [f"{self.result} ({self.theorem})"]
        lines += [f"  {n}: {a} | {b}" for n, a, b in self.compared]
        lines += [f"  note: {s}" for s in self.notes]
        return "\n".join(lines)


def _sign(s: Optional[str]) -> str:
    return "n/a" if s is None else s


def flow_equivalence_decide(g: Graph, h: Graph) -> Verdict:
    for name, x in (("first", g), ("second", h)):
        if not x.is_finite:
            raise HypothesisError(f"{name} graph has infinitely many edges")
        rep = structural_report(x)
        if not (rep.strongly_connected and rep.has_cycle):
            raise HypothesisError(f"{name} graph is not strongly connected with a cycle")
    bf_g, bf_h = bowen_franks(g), bowen_franks(h)
    sg, sh = invariants_cstar(g).det_sign, invariants_cstar(h).det_sign
    same = groups_isomorphic(bf_g, bf_h) and sg == sh
    return Verdict(EQUIVALENT if same else NOT_EQUIVALENT, "franks-ps",
                   [("Bowen-Franks group", str(bf_g), str(bf_h)), ("det sign", sg, sh)])


def _reports(g: Graph, h: Graph, assume_simple: bool,
             assume_purely_infinite: bool) -> Tuple[StructuralReport, StructuralReport, List[str]]:
    notes = []
    reps = []
    for name, x in (("first", g), ("second", h)):
        rep = structural_report(x)
        if not rep.simple:
            if not assume_simple:
                raise HypothesisError(f"{name} graph does not give a simple algebra "
                                      "(use assume_simple to override)")
            notes.append(f"simplicity of the {name} algebra assumed, not verified")
        reps.append(rep)
    if assume_purely_infinite:
        notes.append("pure infiniteness assumed")
    return reps[0], reps[1], notes


def _pi(rep: StructuralReport, assumed: bool) -> bool:
    return rep.has_cycle or assumed


def _sinks(g: Graph) -> int:
    return len(classify_vertices(g).sinks)


def _af_case(g: Graph, h: Graph, ig: InvariantBundle, ih: InvariantBundle,
             rg: StructuralReport, rh: StructuralReport, assume_pi: bool,
             notes: List[str]) -> Optional[Verdict]:
    """Finite-dimensional and AF/purely-infinite mixed cases, or None."""
    fd_g, fd_h = rg.finite_dimensional and not assume_pi, rh.finite_dimensional and not assume_pi
    if fd_g and fd_h:
        a, b = _sinks(g), _sinks(h)
        return Verdict(EQUIVALENT if a == b else NOT_EQUIVALENT, "finite-dimensional",
                       [("sink count", str(a), str(b))], notes)
    pi_g, pi_h = _pi(rg, assume_pi), _pi(rh, assume_pi)
    if (fd_g and pi_h) or (fd_h and pi_g):
        return Verdict(NOT_EQUIVALENT, "finite-dimensional",
                       [("positive cone is everything", str(pi_g), str(pi_h))],
                       notes + ["AF/purely infinite dichotomy: one algebra is "
                                "finite-dimensional, the other purely infinite"])
    return None


def cstar_morita_decide(g: Graph, h: Graph, assume_simple: bool = False,
                        assume_purely_infinite: bool = False) -> Verdict:
    rg, rh, notes = _reports(g, h, assume_simple, assume_purely_infinite)
    ig, ih = invariants_cstar(g), invariants_cstar(h)
    k0 = ("K0", str(ig.k0), str(ih.k0))

    af = _af_case(g, h, ig, ih, rg, rh, assume_purely_infinite, notes)
    if af is not None:
        return af
    pi_g, pi_h = _pi(rg, assume_purely_infinite), _pi(rh, assume_purely_infinite)

    if g.is_finite and h.is_finite and pi_g and pi_h:
        same = groups_isomorphic(ig.k0, ih.k0)
        compared = [k0, ("det sign", _sign(ig.det_sign), _sign(ih.det_sign))]
        if not same:
            return Verdict(NOT_EQUIVALENT, "rordam", compared, notes)
        if ig.det_sign != ih.det_sign:
            return Verdict(EQUIVALENT, "rordam", compared, notes + [CS_NOTE + " required"])
        return Verdict(EQUIVALENT, "rordam", compared,
                       notes + ["det signs agree: Moves (S), (O), (I), (R) and inverses "
                                "suffice (cuntz-krieger)"])

    if not g.is_finite and not h.is_finite:
        same = groups_isomorphic(ig.k0, ih.k0) and groups_isomorphic(ig.k1_topological,
                                                                      ih.k1_topological)
        return Verdict(EQUIVALENT if same else NOT_EQUIVALENT, "sorensen",
                       [k0, ("K1", str(ig.k1_topological), str(ih.k1_topological))], notes)

    return Verdict(UNKNOWN, "rordam" if g.is_finite == h.is_finite else "sorensen", [k0],
                   notes + ["pair mixes graph classes not covered by a single theorem "
                            f"({ig.graph_class} vs {ih.graph_class})"])


def leavitt_morita_decide(g: Graph, h: Graph, k: FieldDescriptor,
                          k6_a: Optional[AbGroup] = None, k6_b: Optional[AbGroup] = None,
                          assume_simple: bool = False,
                          assume_purely_infinite: bool = False) -> Verdict:
    rg, rh, notes = _reports(g, h, assume_simple, assume_purely_infinite)
    ig, ih = invariants_cstar(g), invariants_cstar(h)
    k0_same = groups_isomorphic(ig.k0, ih.k0)
    k0 = ("K0", str(ig.k0), str(ih.k0))

    af = _af_case(g, h, ig, ih, rg, rh, assume_purely_infinite, notes)
    if af is not None:
        return af
    pi_g, pi_h = _pi(rg, assume_purely_infinite), _pi(rh, assume_purely_infinite)

    if g.is_finite and h.is_finite and pi_g and pi_h:
        compared = [k0, ("det sign", _sign(ig.det_sign), _sign(ih.det_sign))]
        if not k0_same:
            return Verdict(NOT_EQUIVALENT, "alps", compared, notes)
        if ig.det_sign == ih.det_sign:
            return Verdict(EQUIVALENT, "alps", compared, notes)
        return Verdict(UNKNOWN, "alps", compared, notes + [
            OPEN_QUESTION_1 + ": K0 agrees but det signs differ; whether the Cuntz splice "
            "preserves Morita equivalence of Leavitt path algebras is open"])

    if not g.is_finite and not h.is_finite:
        sing = ("singular vertices", str(ig.singular_count), str(ih.singular_count))
        rt = k0_same and ig.singular_count == ih.singular_count
        verdict = Verdict(EQUIVALENT if rt else NOT_EQUIVALENT, "ruiz-tomforde",
                          [k0, sing], notes)
        if k.no_free_quotients and k.units is not None:
            lg, lh = invariants_leavitt(g, k), invariants_leavitt(h, k)
            nfq = k0_same and groups_isomorphic(lg.k1_algebraic, lh.k1_algebraic)
            verdict.compared.append((f"K1alg over {k.name}", str(lg.k1_algebraic),
                                     str(lh.k1_algebraic)))
            if nfq != rt:
                raise CrossCheckError("no-free-quotients invariant disagrees with the "
                                      f"singular-vertex count over {k.name}")
            verdict.notes.append(f"consistent with the no-free-quotients theorem over {k.name}")
        if k.is_number_field:
            if k6_a is not None and k6_b is not None:
                nf = k0_same and groups_isomorphic(k6_a, k6_b)
                verdict.compared.append(("K6alg (supplied)", str(k6_a), str(k6_b)))
                if nf != rt:
                    raise CrossCheckError("supplied K6 groups disagree with the "
                                          "singular-vertex count")
                verdict.notes.append("consistent with the number-field theorem (K6)")
            else:
                verdict.notes.append("K6 groups not supplied; number-field cross-check skipped")
        if not k.no_free_quotients and not k.is_number_field:
            verdict.notes.append("Open Question 2: for this field it is not known whether "
                                 "algebraic K-groups alone determine the class")
        return verdict

    return Verdict(UNKNOWN, "ruiz-tomforde" if not g.is_finite else "alps", [k0],
                   notes + ["pair mixes graph classes not covered by a single theorem "
                            f"({ig.graph_class} vs {ih.graph_class})"])
