"""Kazhdan-Lusztig basis elements and W-graphs in small groups."""

import numpy as np

from klsep.coxeter import CoxeterSpec, build_group
from klsep.hecke import kl_basis, kl_product
from klsep.wgraph import build_wgraph, serialize

# rank one: h_s = H_s + v^-1 H_e
g = build_group(CoxeterSpec("A", 1))
t = kl_basis(g)
print("A1:", "h_s =", t.kl_element(1).format(g))

# A3 has the first non-trivial polynomial, P_{s2, s2 s1 s3 s2} = 1 + q
g = build_group(CoxeterSpec("A", 3))
t = kl_basis(g)
w, x = g.parse_word("2132"), g.parse_word("2")
print("A3: h_{2,2132} =", t.poly(x, w).format(), "  mu =", t.mu(x, w))

# how many pairs x <= w carry each polynomial
polys = {}
for w in range(g.order):
    for x in t.support(w):
        key = tuple(int(c) for c in np.trim_zeros(t.P[w, x], "b"))
        polys[key] = polys.get(key, 0) + 1
print("A3 polynomials (coefficients in q) and how often they occur:")
for key, n in sorted(polys.items()):
    print("   ", key, n)

# multiplying by h_s needs only the mu values
w = g.parse_word("21")
for s in range(g.rank):
    prod = kl_product(t, w, s)
    terms = ", ".join(f"{c.format()} h_{g.word_str(y)}" for y, c in sorted(prod.items()))
    print(f"h_21 h_{g.spec.letters[s]} =", terms)

# the W-graph is what the rest of the toolkit consumes
g = build_group(CoxeterSpec("I", 2, 4))
wg = build_wgraph(g, kl_basis(g))
print("I2(4) W-graph,", len(wg.edges), "edges:")
print(serialize(wg))
