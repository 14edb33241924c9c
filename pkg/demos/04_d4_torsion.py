"""A 2-torsion certificate from a Bott-Samelson fiber in D4."""

from klsep.coxeter import CoxeterSpec, build_group
from klsep.torsion import d4_torsion_report, smith_normal_form

g = build_group(CoxeterSpec("D", 4))
rep = d4_torsion_report(g)

# restrictions of the normal line class to the eight fixed points
for key, wt in sorted(rep.restrictions.items()):
    print("".join(map(str, key)), wt)
print("factor weights:", rep.weights)

# finite differences along each P^1 factor give the ordinary class
print("euler class:", rep.euler_class.format())
print(rep.matrix.format())
print("det", rep.det, " invariants", rep.smith.invariants, " ->", rep.verdict)

# the unimodular transforms certify the diagonal form
sf = smith_normal_form(rep.matrix)
print("U =", sf.U)
print("V =", sf.V)
print("D =", sf.D)
