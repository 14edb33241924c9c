"""
Integer cohomology of a product of projective lines and torsion certificates.

``H*((P^1)^k)`` has basis the square-free monomials in ``a_1, ..., a_k``
(``a_i^2 = 0``), with ``a_i`` in cohomological degree 2.  Equivariant classes
given by their restrictions to the ``2^k`` fixed points are reduced to
ordinary ones by finite differences along each factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Sequence

from .bott_samelson import (D4_WORD, D4_Y, fiber_curve_weight, fiber_fixed_points,
                            normal_line_weight)
from .coxeter import GroupTable

__all__ = [
    "MonomialClass", "IntMatrix", "SmithForm", "InconsistentRestrictions",
    "class_from_restrictions", "d4_restrictions", "euler_class_d4", "mult_matrix",
    "smith_normal_form", "determinant", "torsion_verdict", "TorsionReport",
    "d4_torsion_report",
]

Monomial = tuple[int, ...]


class InconsistentRestrictions(ValueError):
    pass


def _mono_name(m: Monomial, names: Sequence[str]) -> str:
    return "".join(names[i] for i in m) or "1"


@dataclass(frozen=True)
class MonomialClass:
    """Integer combination of square-free monomials (sorted index tuples)."""

    k: int
    coeffs: Mapping[Monomial, int]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            m = tuple(m)
            if len(set(m)) != len(m) or list(m) != sorted(m):
                raise ValueError(f"monomial {m} is not square-free and sorted")
            if any(not 0 <= i < self.k for i in m):
                raise ValueError(f"monomial {m} uses a generator outside 0..{self.k - 1}")
            if c:
                clean[m] = int(c)
        object.__setattr__(self, "coeffs", clean)
        if not self.names:
            default = "abcdefghij" if self.k <= 10 else None
            object.__setattr__(self, "names", tuple(default[:self.k]) if default
                               else tuple(f"a{i + 1}" for i in range(self.k)))

    @classmethod
    def generator(cls, k: int, i: int, names: Sequence[str] = ()) -> "MonomialClass":
        return cls(k, {(i,): 1}, tuple(names))

    def degrees(self) -> set[int]:
        """Cohomological degrees present (twice the monomial degree)."""
        return {2 * len(m) for m in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "MonomialClass") -> "MonomialClass":
        self._same_ring(other)
        c = dict(self.coeffs)
        for m, a in other.coeffs.items():
            c[m] = c.get(m, 0) + a
        return MonomialClass(self.k, c, self.names)

    def scale(self, a: int) -> "MonomialClass":
        return MonomialClass(self.k, {m: a * c for m, c in self.coeffs.items()}, self.names)

    def __mul__(self, other: "MonomialClass") -> "MonomialClass":
        self._same_ring(other)
        c: dict[Monomial, int] = {}
        for m1, a1 in self.coeffs.items():
            for m2, a2 in other.coeffs.items():
                if set(m1) & set(m2):
                    continue
                m = tuple(sorted(m1 + m2))
                c[m] = c.get(m, 0) + a1 * a2
        return MonomialClass(self.k, c, self.names)

    def _same_ring(self, other: "MonomialClass"):
        if self.k != other.k:
            raise ValueError("classes live in different rings")

    def __eq__(self, other):
        return isinstance(other, MonomialClass) and self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.k, frozenset(self.coeffs.items())))

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        terms = sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0]))
        out = ""
        for m, c in terms:
            name = _mono_name(m, self.names)
            body = name if abs(c) == 1 and m else f"{abs(c)}{name if m else ''}"
            out += ("-" if c < 0 else "+" if out else "") + body
        return out

    __str__ = format


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else len(self.col_labels))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def format(self) -> str:
        width = max([len(str(x)) for r in self.rows for x in r] + [len(c) for c in self.col_labels] + [1])
        lw = max([len(r) for r in self.row_labels] + [0])
        lines = []
        if self.col_labels:
            lines.append(" " * (lw + 1) + " ".join(c.rjust(width) for c in self.col_labels))
        for i, r in enumerate(self.rows):
            lab = self.row_labels[i] if self.row_labels else ""
            lines.append(lab.ljust(lw) + " " + " ".join(str(x).rjust(width) for x in r))
        return "\n".join(lines)


def _basis(k: int, degree: int) -> list[Monomial]:
    if degree % 2:
        raise ValueError(f"odd degree {degree} has no monomials")
    return list(combinations(range(k), degree // 2))


def mult_matrix(c: MonomialClass, source_degree: int, k: int | None = None) -> IntMatrix:
    """Matrix of ``x -> c x`` from degree ``source_degree`` to ``source_degree + 2``.

    Rows are target monomials and columns source monomials, both in
    lexicographic order of their index tuples.
    """
    k = c.k if k is None else k
    if k != c.k:
        raise ValueError(f"class has {c.k} generators, asked for {k}")
    if c.degrees() - {2}:
        raise ValueError(f"class must be homogeneous of degree 2, has degrees {sorted(c.degrees())}")
    src = _basis(k, source_degree)
    tgt = _basis(k, source_degree + 2)
    pos = {m: i for i, m in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for j, m in enumerate(src):
        for mono, a in (c * MonomialClass(k, {m: 1})).coeffs.items():
            rows[pos[mono]][j] += a
    return IntMatrix(tuple(map(tuple, rows)),
                     tuple(_mono_name(m, c.names) for m in tgt),
                     tuple(_mono_name(m, c.names) for m in src))


# restrictions -> ordinary class --------------------------------------------

def _as_multiple(diff: Sequence[int], weight: Sequence[int]) -> int | None:
    """Integer ``q`` with ``diff = q * weight``, or None."""
    q = None
    for d, w in zip(diff, weight):
        if w == 0:
            if d:
                return None
            continue
        if d % w:
            return None
        if q is None:
            q = d // w
        elif q != d // w:
            return None
    return 0 if q is None else q


def class_from_restrictions(restrictions: Mapping[Sequence[int], Sequence[int]],
                            weights: Sequence[Sequence[int]],
                            names: Sequence[str] = ()) -> MonomialClass:
    """Ordinary degree-2 class of an equivariant class on ``(P^1)^k``.

    ``restrictions`` maps each point ``(e_1, ..., e_k)`` of ``{0,1}^k`` to a
    weight; ``weights[i]`` is the tangent weight of factor ``i`` at its ``0``
    end.  The coefficient of ``a_i`` is the jump across factor ``i`` divided
    by that weight; it must be an integer independent of the other
    coordinates.  The constant term vanishes in ordinary cohomology.
    """
    k = len(weights)
    pts = {tuple(int(b) for b in p): tuple(r) for p, r in restrictions.items()}
    if set(pts) != set(product((0, 1), repeat=k)):
        raise InconsistentRestrictions(f"need restrictions at all {2 ** k} fixed points")
    coeffs = {}
    for i in range(k):
        seen = set()
        for p in pts:
            if p[i]:
                continue
            q = p[:i] + (1,) + p[i + 1:]
            diff = tuple(a - b for a, b in zip(pts[q], pts[p]))
            c = _as_multiple(diff, weights[i])
            if c is None:
                raise InconsistentRestrictions(
                    f"jump {diff} across factor {i + 1} is not a multiple of {tuple(weights[i])}")
            seen.add(c)
        if len(seen) != 1:
            raise InconsistentRestrictions(f"jumps across factor {i + 1} vary: {sorted(seen)}")
        coeffs[(i,)] = seen.pop()
    return MonomialClass(k, coeffs, tuple(names))


def d4_restrictions(g: GroupTable) -> tuple[dict[tuple[int, ...], tuple[int, ...]], list]:
    """Restrictions of the normal line class at the 8 fixed points of the D4 fiber.

    Returns ``(table, factor_weights)``; keys are ``(e(1), e(2), e(3))`` and
    the restriction at a mask is the weight at position 4 of the word.
    """
    if g.spec.family != "D" or g.rank != 4:
        raise ValueError(f"needs D4, got {g.spec.label}")
    y = g.parse_word(D4_Y)
    masks = fiber_fixed_points(g, D4_WORD, y)
    if len(masks) != 8 or any(m[3] or m[i] + m[i + 4] != 1 for m in masks for i in range(3)):
        raise InconsistentRestrictions("unexpected fixed points in the D4 fiber")
    table = {m[:3]: normal_line_weight(g, D4_WORD, m, 4) for m in masks}
    by_key = {m[:3]: m for m in masks}
    weights = []
    for i in range(3):
        lo = by_key[(0, 0, 0)]
        hi = by_key[tuple(int(j == i) for j in range(3))]
        weights.append(fiber_curve_weight(g, D4_WORD, lo, hi))
    return table, weights


def euler_class_d4(g: GroupTable) -> MonomialClass:
    table, weights = d4_restrictions(g)
    return class_from_restrictions(table, weights, ("α", "β", "γ"))


# Smith normal form ---------------------------------------------------------

@dataclass
class SmithForm:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    invariants: tuple[int, ...]
    U: list[list[int]]
    V: list[list[int]]
    D: list[list[int]]

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> SmithForm:
    rows = [list(map(int, r)) for r in (m.rows if isinstance(m, IntMatrix) else m)]
    r = len(rows)
    c = len(rows[0]) if rows else 0
    A = [row[:] for row in rows]
    U, V = _eye(r), _eye(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        for M in (A, U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):
        for M in (A, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, c) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            done = True
            for i in range(t + 1, r):
                q = A[i][t] // p
                add_row(i, t, -q)
                done &= A[i][t] == 0
            for j in range(t + 1, c):
                q = A[t][j] // p
                add_col(j, t, -q)
                done &= A[t][j] == 0
            if not done:
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = [(i, j) for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p]
            if not bad:
                break
            add_row(t, bad[0][0], 1)
        if A[t][t] < 0:
            U[t] = [-x for x in U[t]]
            A[t] = [-x for x in A[t]]
    inv = tuple(A[i][i] for i in range(min(r, c)))
    res = SmithForm(inv, U, V, A)
    if rows and _matmul(_matmul(U, rows), V) != A:
        raise AssertionError("Smith normal form certificate failed")
    return res


def determinant(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    A = [list(map(int, r)) for r in (m.rows if isinstance(m, IntMatrix) else m)]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


def _primes(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def torsion_verdict(invariants: Sequence[int]) -> str:
    """``"2-torsion"``, ``"2,3-torsion"`` or ``"torsion-free"``."""
    ps = sorted({p for d in invariants if d > 1 for p in _primes(d)})
    return ",".join(map(str, ps)) + "-torsion" if ps else "torsion-free"


@dataclass
class TorsionReport:
    restrictions: dict[tuple[int, ...], tuple[int, ...]]
    weights: list[tuple[int, ...]]
    euler_class: MonomialClass
    matrix: IntMatrix
    det: int
    smith: SmithForm
    verdict: str = field(init=False)

    def __post_init__(self):
        self.verdict = torsion_verdict(self.smith.invariants)


def d4_torsion_report(g: GroupTable) -> TorsionReport:
    table, weights = d4_restrictions(g)
    e = class_from_restrictions(table, weights, ("α", "β", "γ"))
    mat = mult_matrix(e, 2)
    return TorsionReport(table, weights, e, mat, determinant(mat), smith_normal_form(mat))
