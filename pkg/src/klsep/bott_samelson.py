"""
Subword masks of a word, torus-fixed points of Bott-Samelson fibers,
Bialynicki-Birula cell dimensions and tangent weights of T-curves.

Words are tuples of 0-based generator indices; masks are tuples of 0/1 of the
same length.  Positions are 1-based, as in ``eps[k]`` = first ``k`` entries.
Weights are root vectors in simple-root coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import GroupTable, act_on_root, is_root, positive_roots

__all__ = [
    "MAX_WORD_LENGTH", "WordTooLong", "mask", "mask_str", "parse_mask", "truncate",
    "subword_product", "prefix_products", "fiber_fixed_points", "bb_cell_dim",
    "tcurve_weight", "normal_line_weight", "fiber_curve_weight", "format_root",
    "HEXAGON_WORD", "HEXAGON_Y", "LAMBDA", "MU", "NU", "ETA_POSITIONS",
    "hexagon_labels", "hexagon_weight_tables", "D4_WORD", "D4_Y",
]

MAX_WORD_LENGTH = 24

Mask = tuple[int, ...]


class WordTooLong(ValueError):
    pass


def mask(length: int, positions: Iterable[int]) -> Mask:
    """Sum of the basis masks ``delta_p`` (1-based ``p``); repeated positions cancel."""
    out = [0] * length
    for p in positions:
        if not 1 <= p <= length:
            raise ValueError(f"position {p} outside 1..{length}")
        out[p - 1] ^= 1
    return tuple(out)


def mask_str(eps: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in eps)


def parse_mask(text: str) -> Mask:
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"mask must be a 0/1 string, got {text!r}")
    return tuple(int(c) for c in text)


def truncate(eps: Sequence[int], k: int) -> Mask:
    """``eps[k]``: keep the first ``k`` entries, zero the rest."""
    return tuple(eps[:k]) + (0,) * (len(eps) - k)


def _check(word: Sequence[int], eps: Sequence[int], g: GroupTable):
    if len(word) != len(eps):
        raise ValueError(f"mask length {len(eps)} does not match word length {len(word)}")
    for s in word:
        if not 0 <= s < g.rank:
            raise ValueError(f"generator {s} out of range for {g.spec.label}")


def subword_product(g: GroupTable, word: Sequence[int], eps: Sequence[int]) -> int:
    """``s_1^eps(1) ... s_l^eps(l)``."""
    _check(word, eps, g)
    w = g.identity
    for s, e in zip(word, eps):
        if e:
            w = g.mult(s, w, "right")
    return w


def prefix_products(g: GroupTable, word: Sequence[int], eps: Sequence[int]) -> list[int]:
    """``[w^{eps[0]}, w^{eps[1]}, ..., w^{eps[l]}]``."""
    _check(word, eps, g)
    out = [g.identity]
    for s, e in zip(word, eps):
        out.append(g.mult(s, out[-1], "right") if e else out[-1])
    return out


def fiber_fixed_points(g: GroupTable, word: Sequence[int], y: int) -> list[Mask]:
    """All masks with ``w^eps = y``, in binary order (``eps(1)`` most significant).

    Depth-first over positions; a branch is cut once the remaining letters
    cannot make up the length still missing to reach ``y``.
    """
    l = len(word)
    if l > MAX_WORD_LENGTH:
        raise WordTooLong(f"word of length {l} exceeds the limit {MAX_WORD_LENGTH}")
    _check(word, (0,) * l, g)
    out: list[Mask] = []
    cur: list[int] = []
    inv = g.inverse

    def dfs(k: int, w: int):
        # distance from w to y is l(w^-1 y); each letter changes length by 1
        gap = int(g.length[g.product(int(inv[w]), y)])
        if gap > l - k:
            return
        if k == l:
            if w == y:
                out.append(tuple(cur))
            return
        for e in (0, 1):
            cur.append(e)
            dfs(k + 1, g.mult(word[k], w, "right") if e else w)
            cur.pop()

    dfs(0, g.identity)
    return out


def bb_cell_dim(g: GroupTable, word: Sequence[int], eps: Sequence[int],
                method: str = "length") -> tuple[int, int]:
    """``(total, fiber)`` dimensions of the attracting cell of ``p(eps)``.

    ``total`` counts ``k`` where ``s_k`` is a right descent of ``w^{eps[k]}``;
    ``fiber`` counts ``k`` where it is a right descent of ``w^{eps[k-1]}``.
    ``method="root"`` tests ``w(alpha_k) < 0`` instead, which is equivalent.
    """
    pre = prefix_products(g, word, eps)
    total = fiber = 0
    for k, s in enumerate(word, start=1):
        if method == "length":
            neg = lambda w: g.has_descent(w, s, "right")
        elif method == "root":
            unit = tuple(int(i == s) for i in range(g.rank))
            neg = lambda w: all(c <= 0 for c in act_on_root(g, w, unit))
        else:
            raise ValueError(f"unknown method {method!r}")
        total += neg(pre[k])
        fiber += neg(pre[k - 1])
    return total, fiber


def tcurve_weight(g: GroupTable, w: int, mu: Sequence[int]) -> tuple[int, ...]:
    """Tangent weight at ``w`` of the T-curve joining ``w`` and ``w s_mu``."""
    mu = tuple(int(c) for c in mu)
    if mu not in set(positive_roots(g)):
        kind = "a negative root" if is_root(g, mu) else "not a root"
        raise ValueError(f"{mu} is {kind}; a positive root is required")
    return act_on_root(g, w, mu)


def normal_line_weight(g: GroupTable, word: Sequence[int], eps: Sequence[int],
                       i: int) -> tuple[int, ...]:
    """Weight at ``p(eps)`` of the curve to ``p(eps + delta_i)``: ``w^{eps[i-1]}(alpha_i)``."""
    if not 1 <= i <= len(word):
        raise ValueError(f"position {i} outside 1..{len(word)}")
    w = subword_product(g, word, truncate(eps, i - 1))
    return act_on_root(g, w, tuple(int(j == word[i - 1]) for j in range(g.rank)))


def fiber_curve_weight(g: GroupTable, word: Sequence[int], a: Sequence[int],
                       b: Sequence[int]) -> tuple[int, ...]:
    """Weight at ``p(a)`` of a curve inside a fiber joining ``p(a)`` and ``p(b)``.

    ``a`` and ``b`` must have the same product and differ in exactly two
    positions ``j < k``; the curve maps under ``pi_k`` onto the T-curve at
    ``w^{a[k-1]}`` in direction ``alpha_k``.
    """
    diff = [p for p, (x, y) in enumerate(zip(a, b), start=1) if x != y]
    if len(diff) != 2:
        raise ValueError("masks must differ in exactly two positions")
    if subword_product(g, word, a) != subword_product(g, word, b):
        raise ValueError("masks lie in different fibers")
    return normal_line_weight(g, word, a, diff[1])


def format_root(r: Sequence[int], name: str = "rho") -> str:
    """``(1, 1, 0)`` -> ``rho1+rho2``; ``(-1, 0)`` -> ``-rho1``; zero -> ``0``."""
    parts = []
    for i, c in enumerate(r, start=1):
        if not c:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(f"{sign}{mag}{name}{i}")
    return "".join(parts) or "0"


# the 14-letter hexagon word in A7 and the masks of its special fiber -------

HEXAGON_WORD = (2, 1, 0, 4, 3, 2, 1, 5, 4, 3, 2, 6, 5, 4)
HEXAGON_Y = "14327658"
LAMBDA = tuple(mask(14, p) for p in ((1, 2, 6), (2, 6, 7), (6, 7, 11), (7, 11, 1), (11, 1, 2)))
MU = tuple(mask(14, p) for p in ((4, 8, 9), (8, 9, 13), (9, 13, 14), (13, 14, 4), (14, 4, 8)))
NU = mask(14, (5, 10))
ETA_POSITIONS = (3, 5, 10, 12)


def _add(*masks: Mask) -> Mask:
    return tuple(sum(bits) % 2 for bits in zip(*masks))


def hexagon_labels() -> dict[Mask, str]:
    """``lam_i+mu_j`` for all ``i, j`` and ``lam_i+mu_j+nu`` for ``i, j in {4, 5}``."""
    out = {}
    for i, lam in enumerate(LAMBDA, start=1):
        for j, mu in enumerate(MU, start=1):
            out[_add(lam, mu)] = f"lam{i}+mu{j}"
            if i >= 4 and j >= 4:
                out[_add(lam, mu, NU)] = f"lam{i}+mu{j}+nu"
    return out


@dataclass(frozen=True)
class WeightTables:
    """``lam[r][j]`` and ``mu[r][k]`` sum to the weight at ``lam_j+mu_k`` in row ``r``."""

    lam: tuple[tuple[tuple[int, ...], ...], ...]
    mu: tuple[tuple[tuple[int, ...], ...], ...]


def hexagon_weight_tables(g: GroupTable, split: int = 4) -> WeightTables:
    """Split the normal-line weights on the ``lam x mu`` grid into two tables.

    Row ``r`` uses position ``ETA_POSITIONS[r]``.  Coordinates ``1..split`` go
    to the ``lam`` table and the rest to the ``mu`` table; a ValueError is
    raised if either part depends on the other index.
    """
    if g.spec.family != "A" or g.rank != 7:
        raise ValueError("the hexagon word lives in A7")
    lam_rows, mu_rows = [], []
    for pos in ETA_POSITIONS:
        lam_part: dict[int, tuple] = {}
        mu_part: dict[int, tuple] = {}
        for j, lam in enumerate(LAMBDA):
            for k, mu in enumerate(MU):
                wt = normal_line_weight(g, HEXAGON_WORD, _add(lam, mu), pos)
                lo = wt[:split] + (0,) * (len(wt) - split)
                hi = (0,) * split + wt[split:]
                if lam_part.setdefault(j, lo) != lo or mu_part.setdefault(k, hi) != hi:
                    raise ValueError(f"weights at position {pos} do not split additively")
        lam_rows.append(tuple(lam_part[j] for j in range(5)))
        mu_rows.append(tuple(mu_part[k] for k in range(5)))
    return WeightTables(tuple(lam_rows), tuple(mu_rows))


# the D4 example: letters s, u, v, t, s, u, v with t the central node ---------

D4_WORD = (0, 2, 3, 1, 0, 2, 3)
D4_Y = "suv"
