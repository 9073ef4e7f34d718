"""Exact integer linear algebra and finitely generated abelian group descriptors.

Everything here works on Python ``int`` so entries never overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union


class IntMatrix:
    """Dense integer matrix with explicit shape (zero rows/columns allowed)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], rows: int = None, cols: int = None):
        data = [[int(x) for x in row] for row in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("inconsistent matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r}, rows={self.rows}, cols={self.cols})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_b = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols_b] for row in self.data]
        return IntMatrix(out, self.rows, other.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def tolist(self) -> List[List[int]]:
        return [row[:] for row in self.data]


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``D == U @ M @ V`` with U, V unimodular and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> List[int]:
        """Nonzero diagonal entries (units included)."""
        return [d for d in self.diagonal if d]


def smith_normal_form(m) -> SNFResult:
    """Smith normal form with transforms, by min-|pivot| elimination."""
    m = as_matrix(m)
    r, c = m.shape
    A = m.tolist()
    U = IntMatrix.identity(r).tolist()
    V = IntMatrix.identity(c).tolist()

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    if A[i][t] and abs(A[i][t]) < abs(A[t][t]):
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    if A[t][j] and abs(A[t][j]) < abs(A[t][t]):
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            if any(A[i][t] for i in range(t + 1, r)) or any(A[t][j] for j in range(t + 1, c)):
                continue
            # row and column are clear; enforce divisibility on the remainder
            bad = next((i for i in range(t + 1, r)
                        if any(A[i][j] % p for j in range(t + 1, c))), None)
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return SNFResult(IntMatrix(U, r, r), IntMatrix(A, r, c), IntMatrix(V, c, c))


def rank(m) -> int:
    return smith_normal_form(m).rank


def kernel_rank(m) -> int:
    m = as_matrix(m)
    return m.cols - rank(m)


def determinant(m) -> Tuple[int, str]:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Returns ``(value, sign)`` with sign one of ``"+"``, ``"-"``, ``"0"``.
    """
    m = as_matrix(m)
    if m.rows != m.cols:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    A = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0, "0"
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    value = sign * A[n - 1][n - 1] if n else 1
    return value, sign_str(value)


def sign_str(x: int) -> str:
    return "+" if x > 0 else "-" if x < 0 else "0"


# ---------------------------------------------------------------------------
# abelian groups


class _Omega:
    """Countably infinite rank."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OMEGA"

    def __str__(self) -> str:
        return "omega"

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()

Rank = Union[int, _Omega]


def _scale_rank(k: int, r: Rank) -> Rank:
    if r is OMEGA:
        return OMEGA if k else 0
    return k * r


def _add_rank(a: Rank, b: Rank) -> Rank:
    if a is OMEGA or b is OMEGA:
        return OMEGA
    return a + b


def _prime_powers(n: int) -> List[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def invariant_factors(orders: Iterable[int]) -> Tuple[int, ...]:
    """Canonical divisibility chain for a direct sum of finite cyclic groups."""
    fs = [abs(int(d)) for d in orders]
    if any(d == 0 for d in fs):
        raise ValueError("Z/0 is not a finite cyclic group")
    fs = [d for d in fs if d != 1]
    # Pairwise (gcd, lcm) replacement converges to the divisibility chain.
    changed = True
    while changed:
        changed = False
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                a, b = fs[i], fs[j]
                if b % a:
                    g = math.gcd(a, b)
                    fs[i], fs[j] = g, a // g * b
                    changed = True
        fs = [d for d in fs if d != 1]
    return tuple(sorted(fs))


@dataclass(frozen=True)
class AbGroup:
    """Descriptor ``(+) Z/d_i  (+)  Z^free_rank  (+)  D^divisible_tf_rank  (+) (Z/q)^omega``.

    ``torsion`` holds invariant factors d_1 | d_2 | ...; ``D`` is a divisible
    torsion-free summand.  ``omega_torsion`` lists prime powers q with
    countably many copies of Z/q.  Construction canonicalizes, so equality of
    descriptors is group isomorphism.
    """

    torsion: Tuple[int, ...] = ()
    free_rank: Rank = 0
    divisible_tf_rank: int = 0
    omega_torsion: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        omega_pp = set()
        for q in self.omega_torsion:
            omega_pp.update(_prime_powers(abs(int(q))))
        if omega_pp:
            keep = [pp for d in self.torsion for pp in _prime_powers(abs(int(d)))
                    if pp not in omega_pp]
            torsion = invariant_factors(keep)
        else:
            torsion = invariant_factors(self.torsion)
        object.__setattr__(self, "torsion", torsion)
        object.__setattr__(self, "omega_torsion", tuple(sorted(omega_pp)))
        fr = self.free_rank
        if fr is not OMEGA:
            if int(fr) < 0:
                raise ValueError("negative free rank")
            object.__setattr__(self, "free_rank", int(fr))
        if int(self.divisible_tf_rank) < 0:
            raise ValueError("negative divisible rank")

    @classmethod
    def trivial(cls) -> "AbGroup":
        return cls()

    @classmethod
    def free(cls, rank: Rank) -> "AbGroup":
        return cls(free_rank=rank)

    @classmethod
    def cyclic(cls, d: int) -> "AbGroup":
        return cls(free_rank=1) if d == 0 else cls(torsion=(d,))

    @property
    def is_trivial(self) -> bool:
        return self == AbGroup()

    def __add__(self, other: "AbGroup") -> "AbGroup":
        return AbGroup(self.torsion + other.torsion,
                       _add_rank(self.free_rank, other.free_rank),
                       self.divisible_tf_rank + other.divisible_tf_rank,
                       self.omega_torsion + other.omega_torsion)

    def power(self, k: int) -> "AbGroup":
        """Direct sum of k copies."""
        if k < 0:
            raise ValueError("negative power")
        if k == 0:
            return AbGroup()
        return AbGroup(self.torsion * k, _scale_rank(k, self.free_rank),
                       k * self.divisible_tf_rank, self.omega_torsion)

    def quotient(self, d: int) -> "AbGroup":
        """G / dG, computed summand by summand."""
        d = abs(d)
        if d == 0:
            return self
        tors = [math.gcd(d, q) for q in self.torsion]
        omega = [math.gcd(d, q) for q in self.omega_torsion]
        fr = self.free_rank
        if fr is OMEGA:
            omega.append(d)
        else:
            tors.extend([d] * fr)
        return AbGroup(tuple(tors), 0, 0, tuple(q for q in omega if q > 1))

    def torsion_kernel(self, d: int) -> "AbGroup":
        """The d-torsion subgroup {x : d x = 0}."""
        d = abs(d)
        if d == 0:
            return self
        tors = [math.gcd(d, q) for q in self.torsion]
        omega = [math.gcd(d, q) for q in self.omega_torsion]
        return AbGroup(tuple(tors), 0, 0, tuple(q for q in omega if q > 1))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        parts += [f"(Z/{q})^omega" for q in self.omega_torsion]
        if self.free_rank is OMEGA:
            parts.append("Z^omega")
        elif self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        if self.divisible_tf_rank:
            parts.append(f"D^{self.divisible_tf_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "torsion": list(self.torsion),
            "free_rank": "omega" if self.free_rank is OMEGA else self.free_rank,
            "divisible_tf_rank": self.divisible_tf_rank,
            "omega_torsion": list(self.omega_torsion),
            "display": str(self),
        }


_TERM = re.compile(
    r"^(?:\(Z/(?P<oq>\d+)\)\^(?:omega|ω)"
    r"|Z/(?P<q>\d+)(?:\^(?P<qk>\d+))?"
    r"|Z(?:\^(?P<zk>\d+|omega|ω))?"
    r"|D(?:\^(?P<dk>\d+))?"
    r"|0)$"
)


def parse_abgroup(text: str) -> AbGroup:
    """Parse the display form, e.g. ``"Z/2 + Z^3 + D^1"`` or ``"Z/2 + Z^omega"``."""
    g = AbGroup()
    terms = [t.strip() for t in text.replace("⊕", "+").split("+")]
    if not any(terms):
        raise ValueError("empty group expression")
    for t in terms:
        t = t.replace(" ", "")
        mt = _TERM.match(t)
        if not mt:
            raise ValueError(f"cannot parse group term {t!r}")
        if mt["oq"]:
            g = g + AbGroup(omega_torsion=(int(mt["oq"]),))
        elif mt["q"]:
            q = int(mt["q"])
            if q == 0:
                g = g + AbGroup.free(int(mt["qk"] or 1))
            else:
                g = g + AbGroup(torsion=(q,) * int(mt["qk"] or 1))
        elif t.startswith("Z"):
            k = mt["zk"]
            g = g + AbGroup.free(OMEGA if k in ("omega", "ω") else int(k or 1))
        elif t.startswith("D"):
            g = g + AbGroup(divisible_tf_rank=int(mt["dk"] or 1))
    return g


def groups_isomorphic(a: AbGroup, b: AbGroup) -> bool:
    return a == b


def cokernel(m) -> AbGroup:
    """Cokernel of m : Z^cols -> Z^rows."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    factors = snf.invariant_factors
    return AbGroup(tuple(factors), m.rows - len(factors))


def coker_with_coefficients(m, g: AbGroup) -> AbGroup:
    """Cokernel of m acting on g^cols -> g^rows."""
    m = as_matrix(m)
    factors = smith_normal_form(m).invariant_factors
    out = g.power(m.rows - len(factors))
    for d in factors:
        out = out + g.quotient(d)
    return out


def kernel_with_coefficients(m, g: AbGroup) -> AbGroup:
    """Kernel of m acting on g^cols -> g^rows."""
    m = as_matrix(m)
    factors = smith_normal_form(m).invariant_factors
    out = g.power(m.cols - len(factors))
    for d in factors:
        out = out + g.torsion_kernel(d)
    return out
