"""Independent reference implementations used to check the library.

None of these call into the code they check beyond group multiplication
where that is itself checked elsewhere.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

import numpy as np


# permutations --------------------------------------------------------------

def inversions(p) -> int:
    return sum(1 for i, j in combinations(range(len(p)), 2) if p[i] > p[j])


def compose(p, q):
    """``(p q)(i) = p(q(i))`` on one-line tuples with values 1..n."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def transposition(n: int, i: int):
    """``s_i`` (0-based ``i``) in S_n."""
    p = list(range(1, n + 1))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def bruhat_tableau(x, w) -> bool:
    """Rank-matrix criterion: ``x <= w`` iff every count ``#{j <= i : x(j) >= k}`` is dominated."""
    n = len(x)
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            if sum(1 for j in range(i) if x[j] >= k) > sum(1 for j in range(i) if w[j] >= k):
                return False
    return True


def contains_pattern_brute(w, y) -> bool:
    m = len(y)
    order = sorted(range(m), key=lambda i: y[i])
    for idx in combinations(range(len(w)), m):
        vals = [w[i] for i in idx]
        if sorted(range(m), key=lambda i: vals[i]) == order:
            return True
    return False


# reflection representation on the root lattice ------------------------------

def reflection_matrices(cartan):
    """``S_i`` acting on simple-root coordinates: ``s_i(a_j) = a_j - C[i][j] a_i``."""
    n = len(cartan)
    mats = []
    for i in range(n):
        m = np.eye(n, dtype=np.int64)
        for j in range(n):
            m[i, j] -= cartan[i][j]
        mats.append(m)
    return mats


def matrix_group(cartan):
    """All elements as matrices, with length = number of positive roots made negative."""
    gens = reflection_matrices(cartan)
    n = len(cartan)
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for s in gens:
                p = s @ m
                key = p.tobytes()
                if key not in seen:
                    seen[key] = p
                    nxt.append(p)
        frontier = nxt
    return list(seen.values())


def positive_roots_brute(cartan):
    """Orbit of the simple roots under the matrix group, keep the positive ones."""
    n = len(cartan)
    roots = set()
    for m in matrix_group(cartan):
        for i in range(n):
            r = tuple(int(c) for c in m[:, i])
            if all(c >= 0 for c in r):
                roots.add(r)
    return roots


# Bruhat order via the subword property --------------------------------------

def bruhat_subword(g, x: int, w: int) -> bool:
    word = g.words[w]
    target = int(g.length[x])
    for idx in combinations(range(len(word)), target):
        if g.element([word[i] for i in idx]) == x:
            return True
    return False


# KL polynomials via R-polynomials -------------------------------------------

def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def kl_polys_via_r(g):
    """``P[(x, w)]`` as coefficient lists in ``q``, from the R-polynomial identity.

    ``q^{l(w)-l(x)} P_{x,w}(1/q) - P_{x,w}(q) = sum_{x < y <= w} R_{x,y} P_{y,w}``
    with ``R`` from ``R_{x,w} = R_{sx,sw}`` (``sx < x``) or
    ``(q-1) R_{x,sw} + q R_{sx,sw}`` (``sx > x``), ``s`` a left descent of ``w``.
    """
    N = g.order
    le = [[bruhat_subword(g, x, w) for w in range(N)] for x in range(N)]
    L = [int(v) for v in g.length]
    R = {}
    for w in sorted(range(N), key=lambda w: L[w]):
        for x in range(N):
            if not le[x][w]:
                continue
            if x == w:
                R[(x, w)] = [1]
                continue
            s = min(g.descents(w))
            sw, sx = g.mult(s, w), g.mult(s, x)
            if L[sx] < L[x]:
                R[(x, w)] = R.get((sx, sw), [])
            else:
                R[(x, w)] = _trim(_padd(_pmul([-1, 1], R.get((x, sw), [])),
                                        _pmul([0, 1], R.get((sx, sw), []))))
    P = {}
    for w in range(N):
        P[(w, w)] = [1]
        below = sorted((x for x in range(N) if le[x][w] and x != w), key=lambda x: -L[x])
        for x in below:
            S = []
            for y in range(N):
                if y != x and le[x][y] and le[y][w]:
                    S = _padd(S, _pmul(R[(x, y)], P[(y, w)]))
            d = L[w] - L[x]
            top = (d - 1) // 2
            P[(x, w)] = _trim([-c for c in S[:top + 1]])
    return P


# dihedral closed form ------------------------------------------------------

def dihedral_fw(g):
    """``f_W`` for a dihedral group: same first and last letter, no longer than ``x``."""
    out = {}
    for x in range(g.order):
        if x in (g.identity, g.longest):
            out[x] = {x}
            continue
        wx = g.words[x]
        out[x] = {y for y in range(1, g.order)
                  if g.length[y] <= g.length[x] and g.words[y][0] == wx[0]
                  and g.words[y][-1] == wx[-1] and y != g.longest}
    return out


# standard-basis Hecke algebra, written out separately ------------------------

def hecke_times_s(g, elt: dict, s: int) -> dict:
    """Right multiplication by ``H_s`` on ``{w: {exp: coeff}}``."""
    out: dict = {}

    def add(w, exp, c):
        d = out.setdefault(w, {})
        d[exp] = d.get(exp, 0) + c
        if not d[exp]:
            del d[exp]

    for w, poly in elt.items():
        ws = g.mult(s, w, "right")
        for e, c in poly.items():
            if g.length[ws] > g.length[w]:
                add(ws, e, c)
            else:
                # H_s^2 = 1 + (v - v^-1) H_s
                add(ws, e, c)
                add(w, e + 1, c)
                add(w, e - 1, -c)
    return {w: p for w, p in out.items() if p}


def all_masks(l: int):
    return list(product((0, 1), repeat=l))


def _frac_det(rows):
    from fractions import Fraction
    a = [[Fraction(x) for x in r] for r in rows]
    n, det = len(a), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return int(det)


def smith_invariants_by_minors(m):
    """Invariant factors as ratios of successive gcds of k x k minors."""
    from itertools import combinations
    from math import gcd
    r, c = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        d = 0
        for rs in combinations(range(r), k):
            for cs in combinations(range(c), k):
                d = gcd(d, _frac_det([[m[i][j] for j in cs] for i in rs]))
        if d == 0:
            out.extend([0] * (min(r, c) - k + 1))
            break
        out.append(d // prev)
        prev = d
    return tuple(out)
