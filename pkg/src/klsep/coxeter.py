"""
Finite Coxeter groups enumerated exactly.

Every element gets a dense index.  Elements are sorted by length and then
lexicographically by their ShortLex-minimal reduced word, so index order is a
linear extension of the Bruhat order.

>>> g = build_group(CoxeterSpec("A", 2))
>>> [g.word_str(w) for w in range(g.order)]
['e', 's', 't', 'st', 'ts', 'sts']
>>> g.descents(5, "right")
frozenset({0, 1})
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

__all__ = [
    "CoxeterSpec", "GroupTable", "UnsupportedSpec", "NoRootDatum",
    "build_group", "bruhat_leq", "lower_interval", "positive_roots",
    "act_on_root", "reflection_of", "is_root",
    "one_line", "parse_one_line", "contains_pattern",
]

LEFT, RIGHT = "left", "right"


class UnsupportedSpec(ValueError):
    """Family/rank combination that cannot be built."""


class NoRootDatum(ValueError):
    """Root operations requested on a non-crystallographic group."""


def _chain(n: int) -> list[list[int]]:
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 3
    return m


def _cartan_from_edges(n: int, edges: dict[tuple[int, int], int]) -> list[list[int]]:
    # edges[(i, j)] = <alpha_i^vee, alpha_j>
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    for (i, j), a in edges.items():
        c[i][j] = a
    return c


@dataclass(frozen=True)
class CoxeterSpec:
    """Family and rank of a finite Coxeter group.

    Generator numbering (0-based):

    * ``A``: chain ``0 - 1 - ... - n-1``.
    * ``B``: chain with the double bond between ``n-2`` and ``n-1``; the last
      simple root is the short one.
    * ``D``: chain ``0 - ... - n-3`` with ``n-2`` and ``n-1`` both attached to
      ``n-3``.  For ``D4`` the letters are ``s t u v`` with ``t`` central.
    * ``F4``, ``G2``: Bourbaki numbering.
    * ``I2``: dihedral of order ``2m``; ``m = 2`` is ``A1 x A1``.
    """

    family: str
    rank: int
    m: int | None = None

    def __post_init__(self):
        f, n = self.family, self.rank
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "D": n >= 4,
            "F": n == 4,
            "G": n == 2,
            "I": n == 2 and self.m is not None and self.m >= 2,
        }.get(f)
        if not ok:
            raise UnsupportedSpec(f"unsupported spec: {self.family}{self.rank}"
                                  + (f"({self.m})" if self.m else ""))
        if f != "I" and self.m is not None:
            raise UnsupportedSpec(f"parameter m only applies to I2, got {self}")
        if n > 9:
            raise UnsupportedSpec("rank above 9 is not supported")

    @classmethod
    def parse(cls, text: str) -> "CoxeterSpec":
        """Parse labels such as ``B3``, ``D4``, ``F4``, ``G2``, ``I2(5)``."""
        t = text.strip().upper()
        if t.startswith("I2"):
            inner = t[2:].strip("()")
            if not inner.isdigit():
                raise UnsupportedSpec(f"unsupported spec: {text}")
            return cls("I", 2, int(inner))
        if len(t) < 2 or not t[1:].isdigit():
            raise UnsupportedSpec(f"unsupported spec: {text}")
        return cls(t[0], int(t[1:]))

    @property
    def label(self) -> str:
        if self.family == "I":
            return f"I2({self.m})"
        return f"{self.family}{self.rank}"

    @property
    def coxeter_matrix(self) -> list[list[int]]:
        f, n = self.family, self.rank
        if f == "A":
            return _chain(n)
        if f == "B":
            m = _chain(n)
            m[n - 2][n - 1] = m[n - 1][n - 2] = 4
            return m
        if f == "D":
            m = _chain(n)
            m[n - 2][n - 1] = m[n - 1][n - 2] = 2
            m[n - 3][n - 1] = m[n - 1][n - 3] = 3
            return m
        if f == "F":
            m = _chain(4)
            m[1][2] = m[2][1] = 4
            return m
        mm = 6 if f == "G" else self.m
        return [[1, mm], [mm, 1]]

    @property
    def cartan(self) -> list[list[int]] | None:
        """Cartan matrix ``C[i][j] = <alpha_i^vee, alpha_j>`` or None."""
        f, n = self.family, self.rank
        if f == "I":
            f, n = {2: ("A1xA1", 2), 3: ("A", 2), 4: ("B", 2), 6: ("G", 2)}.get(
                self.m, (None, 2))
            if f is None:
                return None
        if f == "A1xA1":
            return [[2, 0], [0, 2]]
        if f == "A":
            return _cartan_from_edges(n, {**{(i, i + 1): -1 for i in range(n - 1)},
                                          **{(i + 1, i): -1 for i in range(n - 1)}})
        if f in ("B", "D"):
            edges = {}
            for i in range(n - 2):
                edges[(i, i + 1)] = edges[(i + 1, i)] = -1
            if f == "B":
                edges[(n - 2, n - 1)] = -1
                edges[(n - 1, n - 2)] = -2
            else:
                edges[(n - 3, n - 1)] = edges[(n - 1, n - 3)] = -1
            return _cartan_from_edges(n, edges)
        if f == "F":
            return _cartan_from_edges(4, {(0, 1): -1, (1, 0): -1, (1, 2): -1, (2, 1): -2,
                                          (2, 3): -1, (3, 2): -1})
        # G2, alpha_1 short
        return _cartan_from_edges(2, {(0, 1): -3, (1, 0): -1})

    @property
    def crystallographic(self) -> bool:
        return self.cartan is not None

    @property
    def letters(self) -> tuple[str, ...]:
        """Single-character generator names used for words."""
        f, n = self.family, self.rank
        if n <= 2 or (f, n) in (("B", 3), ("D", 4)):
            return tuple("stuv"[:n])
        return tuple(str(i + 1) for i in range(n))

    @property
    def expected_order(self) -> int:
        f, n = self.family, self.rank
        if f == "A":
            return math.factorial(n + 1)
        if f == "B":
            return 2 ** n * math.factorial(n)
        if f == "D":
            return 2 ** (n - 1) * math.factorial(n)
        if f == "F":
            return 1152
        if f == "G":
            return 12
        return 2 * self.m


def _dihedral_left(m: int):
    # normal form: alternating word as (first letter, length); w0 stored as (0, m)
    def left(s: int, key: tuple[int, int]) -> tuple[int, int]:
        first, k = key
        if k == 0:
            return (s, 1)
        if k == m:
            return (1 - s, m - 1)
        if first == s:
            return (1 - s, k - 1) if k > 1 else (0, 0)
        return (0, m) if k + 1 == m else (s, k + 1)
    return left, (0, 0)


def _weight_left(cartan: list[list[int]]):
    n = len(cartan)
    cols = [tuple(cartan[i][j] for i in range(n)) for j in range(n)]

    def left(s: int, lam: tuple[int, ...]) -> tuple[int, ...]:
        c = lam[s]
        col = cols[s]
        return tuple(a - c * b for a, b in zip(lam, col))
    return left, tuple([1] * n)


@dataclass
class GroupTable:
    """An enumerated finite Coxeter group.

    ``left[s, w]`` is the index of ``s*w`` and ``right[s, w]`` the index of
    ``w*s``.  Descent sets are stored as bitmasks in ``dl`` and ``dr``.
    """

    spec: CoxeterSpec
    words: list[tuple[int, ...]]
    length: np.ndarray
    left: np.ndarray
    right: np.ndarray
    dl: np.ndarray
    dr: np.ndarray
    inverse: np.ndarray
    index: dict[tuple[int, ...], int]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.words)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def identity(self) -> int:
        return 0

    @property
    def longest(self) -> int:
        return self.order - 1

    def descents(self, w: int, side: str = LEFT) -> frozenset[int]:
        bits = int(self.dl[w] if side == LEFT else self.dr[w])
        return frozenset(s for s in range(self.rank) if bits >> s & 1)

    def has_descent(self, w: int, s: int, side: str = LEFT) -> bool:
        bits = self.dl[w] if side == LEFT else self.dr[w]
        return bool(bits >> s & 1)

    def mult(self, s: int, w: int, side: str = LEFT) -> int:
        """``s*w`` for side ``left``, ``w*s`` for side ``right``."""
        return int(self.left[s, w] if side == LEFT else self.right[s, w])

    def product(self, x: int, y: int) -> int:
        for s in self.words[y]:
            x = int(self.right[s, x])
        return x

    def element(self, letters: Sequence[int]) -> int:
        """Index of the product of generators (need not be reduced)."""
        w = 0
        for s in letters:
            if not 0 <= s < self.rank:
                raise ValueError(f"generator {s} out of range for {self.spec.label}")
            w = int(self.right[s, w])
        return w

    def word_str(self, w: int) -> str:
        if not self.words[w]:
            return "e"
        return "".join(self.spec.letters[s] for s in self.words[w])

    def parse_word(self, text: str) -> int:
        """Element named by a letter word (``"e"``/``"1"`` is the identity)."""
        text = text.strip()
        letters = self.spec.letters
        if text in ("e", "id", "") or (text == "1" and "1" not in letters):
            return 0
        try:
            gens = [letters.index(c) for c in text]
        except ValueError:
            raise ValueError(f"{text!r} is not a word in letters {''.join(letters)}") from None
        return self.element(gens)

    def is_reduced(self, letters: Sequence[int]) -> bool:
        return int(self.length[self.element(letters)]) == len(letters)


def build_group(spec: CoxeterSpec) -> GroupTable:
    """Enumerate ``W`` by breadth-first search on a faithful action.

    Crystallographic groups act on the integral weight ``rho``; the dihedral
    groups use their alternating normal form directly.
    """
    n = spec.rank
    if spec.family == "I":
        left_fn, start = _dihedral_left(spec.m)
    else:
        left_fn, start = _weight_left(spec.cartan)

    keys = [start]
    lengths = [0]
    where = {start: 0}
    neigh: list[list[int]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        row = []
        for s in range(n):
            k = left_fn(s, keys[i])
            j = where.get(k)
            if j is None:
                j = where[k] = len(keys)
                keys.append(k)
                lengths.append(lengths[i] + 1)
                queue.append(j)
            row.append(j)
        neigh.append(row)

    size = len(keys)
    if size != spec.expected_order:
        raise AssertionError(f"enumerated {size} elements, expected {spec.expected_order}")

    # ShortLex word: smallest left descent, then the word of s*w
    words: list[tuple[int, ...] | None] = [None] * size
    words[0] = ()
    for i in sorted(range(size), key=lengths.__getitem__):
        if i == 0:
            continue
        for s in range(n):
            j = neigh[i][s]
            if lengths[j] < lengths[i]:
                words[i] = (s,) + words[j]
                break

    perm = sorted(range(size), key=lambda i: (lengths[i], words[i]))
    new = [0] * size
    for a, i in enumerate(perm):
        new[i] = a

    length = np.array([lengths[i] for i in perm], dtype=np.int32)
    left = np.empty((n, size), dtype=np.int32)
    for a, i in enumerate(perm):
        for s in range(n):
            left[s, a] = new[neigh[i][s]]
    sorted_words = [words[i] for i in perm]

    inverse = np.empty(size, dtype=np.int32)
    for a, wd in enumerate(sorted_words):
        cur = 0
        for s in wd:
            cur = left[s, cur]
        inverse[a] = cur
    right = inverse[left[:, inverse]]

    bit = (1 << np.arange(n, dtype=np.int64))[:, None]
    dl = ((length[left] < length[None, :]) * bit).sum(axis=0).astype(np.int64)
    dr = ((length[right] < length[None, :]) * bit).sum(axis=0).astype(np.int64)

    return GroupTable(
        spec=spec, words=sorted_words, length=length, left=left, right=right,
        dl=dl, dr=dr, inverse=inverse,
        index={wd: a for a, wd in enumerate(sorted_words)},
    )


def bruhat_leq(g: GroupTable, x: int, w: int) -> bool:
    """Bruhat comparison by descent recursion (lifting property)."""
    lx, lw = int(g.length[x]), int(g.length[w])
    while True:
        if lx > lw:
            return False
        if lx == lw:
            return x == w
        if lx == 0:
            return True
        s = g.words[w][0]
        w = int(g.left[s, w])
        lw -= 1
        if g.dl[x] >> s & 1:
            x = int(g.left[s, x])
            lx -= 1


def lower_interval(g: GroupTable, w: int) -> frozenset[int]:
    """All ``x <= w``, built from ``[e, sw] u s[e, sw]``."""
    cache = g._cache.setdefault("lower", {0: frozenset([0])})
    todo = []
    cur = w
    while cur not in cache:
        todo.append(cur)
        cur = int(g.left[g.words[cur][0], cur])
    for u in reversed(todo):
        s = g.words[u][0]
        below = cache[int(g.left[s, u])]
        cache[u] = below | {int(g.left[s, x]) for x in below}
    return cache[w]


# roots ---------------------------------------------------------------------

def _cartan_or_raise(g: GroupTable) -> list[list[int]]:
    c = g.spec.cartan
    if c is None:
        raise NoRootDatum(f"no integral root datum for {g.spec.label}")
    return c


def _reflect(cartan, s: int, r: tuple[int, ...]) -> tuple[int, ...]:
    pairing = sum(cartan[s][k] * r[k] for k in range(len(r)))
    if pairing == 0:
        return r
    return tuple(r[k] - pairing if k == s else r[k] for k in range(len(r)))


def positive_roots(g: GroupTable) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, sorted by height."""
    if "roots" in g._cache:
        return g._cache["roots"]
    cartan = _cartan_or_raise(g)
    n = g.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for s in range(n):
                q = _reflect(cartan, s, r)
                if q not in seen and all(c >= 0 for c in q):
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    roots = sorted(seen, key=lambda r: (sum(r), tuple(-c for c in r)))
    g._cache["roots"] = roots
    return roots


def is_root(g: GroupTable, r: Sequence[int]) -> bool:
    r = tuple(r)
    roots = set(positive_roots(g))
    return r in roots or tuple(-c for c in r) in roots


def act_on_root(g: GroupTable, w: int, r: Sequence[int]) -> tuple[int, ...]:
    """``w(r)``, applying the letters of a reduced word right to left."""
    cartan = _cartan_or_raise(g)
    r = tuple(int(c) for c in r)
    if len(r) != g.rank:
        raise ValueError("root has wrong number of coordinates")
    for s in reversed(g.words[w]):
        r = _reflect(cartan, s, r)
    return r


def reflection_of(g: GroupTable, root: Sequence[int]) -> int:
    """The reflection ``s_root`` as a group element."""
    cartan = _cartan_or_raise(g)
    r = tuple(root)
    if all(c <= 0 for c in r):
        r = tuple(-c for c in r)
    if not is_root(g, r):
        raise ValueError(f"{tuple(root)} is not a root of {g.spec.label}")
    # walk r down to a simple root: r = u(alpha_i), so s_r = u s_i u^{-1}
    u = []
    while sum(r) != 1:
        for s in range(g.rank):
            if sum(cartan[s][k] * r[k] for k in range(g.rank)) > 0:
                r = _reflect(cartan, s, r)
                u.append(s)
                break
    i = r.index(1)
    return g.element(u + [i] + u[::-1])


# type A --------------------------------------------------------------------

def _require_type_a(g: GroupTable):
    if g.spec.family != "A":
        raise ValueError(f"one-line notation needs type A, got {g.spec.label}")


def one_line(g: GroupTable, w: int) -> tuple[int, ...]:
    """Values ``w(1), ..., w(n+1)`` with ``s_i`` acting as ``(i, i+1)``."""
    _require_type_a(g)
    perm = list(range(1, g.rank + 2))
    # w = s_{i1} ... s_{ik} as functions: apply the rightmost first
    for s in g.words[w]:
        perm[s], perm[s + 1] = perm[s + 1], perm[s]
    return tuple(perm)


def parse_one_line(g: GroupTable, perm: Sequence[int] | str) -> int:
    """Inverse of :func:`one_line`."""
    _require_type_a(g)
    if isinstance(perm, str):
        perm = [int(c) for c in perm]
    perm = list(perm)
    if sorted(perm) != list(range(1, g.rank + 2)):
        raise ValueError(f"{perm} is not a permutation of 1..{g.rank + 1}")
    # peel right descents: w(i) > w(i+1) means w*s_i < w
    letters = []
    while True:
        for i in range(len(perm) - 1):
            if perm[i] > perm[i + 1]:
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                letters.append(i)
                break
        else:
            break
    return g.element(letters[::-1])


def contains_pattern(w: Sequence[int] | str, y: Sequence[int] | str) -> bool:
    """Whether permutation ``w`` contains the pattern ``y``."""
    w = [int(c) for c in w]
    y = [int(c) for c in y]
    m = len(y)
    if m > len(w):
        return False
    order = sorted(range(m), key=y.__getitem__)
    for idx in combinations(range(len(w)), m):
        vals = [w[i] for i in idx]
        if all(vals[order[k]] < vals[order[k + 1]] for k in range(m - 1)):
            return True
    return False
