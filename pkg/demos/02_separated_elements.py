"""f_W, separated elements and propagation in B3 and D4."""

from klsep.coxeter import CoxeterSpec, build_group
from klsep.hecke import kl_basis
from klsep.separation import CHAR_NEQ, compute_fw, propagate, sigma
from klsep.wgraph import build_wgraph

# dihedral groups: only e, s, t, st, ts and w0 are separated once m >= 4
for m in range(3, 9):
    g = build_group(CoxeterSpec("I", 2, m))
    f = compute_fw(g, build_wgraph(g, kl_basis(g)))
    print(f"I2({m}): sigma =", sorted((g.word_str(x) for x in f.sigma), key=lambda s: (len(s), s)))

# B3 has a single element where f_W is not defined
g = build_group(CoxeterSpec("B", 3))
f = compute_fw(g, build_wgraph(g, kl_basis(g)))
print()
print(sigma(f).to_text())

# D4: the non-separated set is stable under triality
g = build_group(CoxeterSpec("D", 4))
wg = build_wgraph(g, kl_basis(g))
f = compute_fw(g, wg)
print(sigma(f).to_text())

# with nothing assumed, the triality orbit of tvtsutv is forced to agree with h_w
res = propagate(g, wg, f)
for x in f.non_separated:
    print(f"  {g.word_str(x):10s} {res.status[x]}")

# declaring suvtvsu bad spreads to its t-translates
w2 = g.parse_word("suvtvsu")
res = propagate(g, wg, f, {w2: CHAR_NEQ})
print("assume CharNeq(suvtvsu):")
for x in f.non_separated:
    print(f"  {g.word_str(x):10s} {res.status[x]:8s} {res.reasons.get(x, '')}")
