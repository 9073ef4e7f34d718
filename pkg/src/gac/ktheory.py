"""K-theory of graph C*-algebras and Leavitt path algebras.

Every invariant is read off the presentation matrix: the |E0| x |E0_reg|
integer matrix whose column for a regular vertex v is ``delta_v`` minus the
vector of edge counts out of v.  Its cokernel is K0 and its kernel is K1 of
the C*-algebra; the same matrix acting on copies of the unit group of K
gives the field-dependent part of K1 of the Leavitt path algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

from gac.exactalg import (
    OMEGA,
    AbGroup,
    IntMatrix,
    coker_with_coefficients,
    cokernel,
    determinant,
    kernel_rank,
    kernel_with_coefficients,
    parse_abgroup,
)
from gac.graph import Graph, classify_vertices, regular_indices, structural_report


@dataclass(frozen=True)
class FieldDescriptor:
    """A field seen through its unit group K^x (= K1 of the field)."""

    name: str
    units: Optional[AbGroup]
    no_free_quotients: bool
    is_number_field: bool = False

    def __post_init__(self):
        if self.units is not None:
            # an abelian group has a nonzero free quotient iff it has a free summand
            has_free = self.units.free_rank is OMEGA or self.units.free_rank > 0
            if self.no_free_quotients and has_free:
                raise ValueError(f"field {self.name}: units {self.units} have free quotients")
            if not self.no_free_quotients and not has_free:
                raise ValueError(f"field {self.name}: units {self.units} have no free quotients")


COMPLEX = FieldDescriptor("C", AbGroup(divisible_tf_rank=1), no_free_quotients=True)
REAL = FieldDescriptor("R", AbGroup(torsion=(2,), divisible_tf_rank=1), no_free_quotients=True)
RATIONAL = FieldDescriptor("Q", AbGroup(torsion=(2,), free_rank=OMEGA),
                           no_free_quotients=False, is_number_field=True)


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def finite_field(q: int) -> FieldDescriptor:
    if not _is_prime_power(q):
        raise ValueError(f"no finite field with {q} elements")
    return FieldDescriptor(f"F_{q}", AbGroup(torsion=(q - 1,)), no_free_quotients=True)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes", "t"):
        return True
    if low in ("false", "0", "no", "f"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def parse_field(spec: str) -> FieldDescriptor:
    """``C | R | Q | F_<q> | F_q:<q> | numberfield:<name> |
    custom:units=<group>,nfq=<bool>,numfield=<bool>``."""
    spec = spec.strip()
    if spec == "C":
        return COMPLEX
    if spec == "R":
        return REAL
    if spec == "Q":
        return RATIONAL
    if spec.startswith("F_q:"):
        return finite_field(int(spec[4:]))
    if spec.startswith("F_"):
        return finite_field(int(spec[2:]))
    if spec.startswith("numberfield:"):
        name = spec.split(":", 1)[1] or "K"
        return FieldDescriptor(name, None, no_free_quotients=False, is_number_field=True)
    if spec.startswith("custom:"):
        opts = {}
        for item in spec[len("custom:"):].split(","):
            if "=" not in item:
                raise ValueError(f"bad custom field option {item!r}")
            key, value = item.split("=", 1)
            opts[key.strip()] = value.strip()
        unknown = set(opts) - {"units", "nfq", "numfield", "name"}
        if unknown:
            raise ValueError(f"unknown custom field options {sorted(unknown)}")
        units = parse_abgroup(opts["units"]) if "units" in opts else None
        if "nfq" in opts:
            nfq = _parse_bool(opts["nfq"])
        elif units is not None:
            nfq = units.free_rank == 0
        else:
            nfq = False
        return FieldDescriptor(opts.get("name", "custom"), units, nfq,
                               _parse_bool(opts.get("numfield", "false")))
    raise ValueError(f"unknown field {spec!r}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantBundle:
    k0: AbGroup
    k1_topological: AbGroup
    det: Optional[int]
    det_sign: Optional[str]
    singular_count: int
    cone_full: Optional[bool]
    graph_class: str
    k1_algebraic: Optional[AbGroup] = None
    field: Optional[str] = None

    def summary(self) -> str:
        parts = [f"K0 = {self.k0}", f"K1 = {self.k1_topological}"]
        if self.k1_algebraic is not None:
            parts.append(f"K1alg({self.field}) = {self.k1_algebraic}")
        parts.append(f"det sign = {self.det_sign if self.det_sign else 'n/a'}")
        parts.append(f"singular = {self.singular_count}")
        return ", ".join(parts)

    def to_json(self) -> dict:
        out = {
            "k0": self.k0.to_json(),
            "k1_topological": self.k1_topological.to_json(),
            "det": self.det,
            "det_sign": self.det_sign,
            "singular_count": self.singular_count,
            "cone_full": self.cone_full,
            "graph_class": self.graph_class,
        }
        if self.k1_algebraic is not None:
            out["k1_algebraic"] = self.k1_algebraic.to_json()
            out["field"] = self.field
        return out


def presentation_matrix(g: Graph) -> IntMatrix:
    reg = regular_indices(g)
    n = len(g)
    data = [[int(w == v) - g.mult[v][w] for v in reg] for w in range(n)]
    return IntMatrix(data, n, len(reg))


def identity_minus_transpose(g: Graph) -> IntMatrix:
    if not g.is_finite:
        raise ValueError("I - A^t needs a graph without infinite multiplicities")
    n = len(g)
    return IntMatrix([[int(i == j) - g.mult[j][i] for j in range(n)] for i in range(n)], n, n)


def bowen_franks(g: Graph) -> AbGroup:
    """coker(I - A^t) for a finite graph."""
    return cokernel(identity_minus_transpose(g))


def det_identity_minus_transpose(g: Graph) -> Tuple[int, str]:
    return determinant(identity_minus_transpose(g))


def invariants_cstar(g: Graph) -> InvariantBundle:
    pm = presentation_matrix(g)
    report = structural_report(g)
    det = sign = None
    if g.is_finite:
        det, sign = det_identity_minus_transpose(g)
    return InvariantBundle(
        k0=cokernel(pm),
        k1_topological=AbGroup.free(kernel_rank(pm)),
        det=det,
        det_sign=sign,
        singular_count=len(classify_vertices(g).singular),
        cone_full=report.has_cycle if report.simple else None,
        graph_class="finite" if g.is_finite else "finite-vertices-infinite-edges",
    )


def invariants_leavitt(g: Graph, k: FieldDescriptor) -> InvariantBundle:
    if k.units is None:
        raise ValueError(f"field {k.name} has no unit group descriptor; K1alg unavailable")
    base = invariants_cstar(g)
    pm = presentation_matrix(g)
    k1 = base.k1_topological + coker_with_coefficients(pm, k.units)
    return replace(base, k1_algebraic=k1, field=k.name)


def kn_alg_bounds(g: Graph, kn_field: AbGroup,
                  kn_minus1_field: AbGroup) -> Tuple[AbGroup, AbGroup]:
    """Outer terms of the long exact sequence around K_n of the Leavitt path algebra.

    Returns ``(lower, upper)`` where ``lower`` is the cokernel of the
    presentation matrix on ``K_n(K)`` and ``upper`` its kernel on
    ``K_{n-1}(K)``.  K_n of the algebra is an extension of ``upper`` by
    ``lower``; the extension itself is not determined here.
    """
    pm = presentation_matrix(g)
    return coker_with_coefficients(pm, kn_field), kernel_with_coefficients(pm, kn_minus1_field)


def cuntz_algebra_graph(n: int) -> Graph:
    """One vertex with n loops."""
    return Graph(("v",), ((n,),))

