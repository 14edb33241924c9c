"""Torus-fixed points and cells in a Bott-Samelson fiber over an A7 element."""

from klsep.bott_samelson import (HEXAGON_WORD, HEXAGON_Y, bb_cell_dim, fiber_curve_weight,
                                 fiber_fixed_points, format_root, hexagon_labels,
                                 hexagon_weight_tables, mask_str, parse_mask)
from klsep.coxeter import CoxeterSpec, build_group, one_line, parse_one_line

# warm-up in A2: a pentagon of fixed points over w0 for the word s t s t s
g = build_group(CoxeterSpec("A", 2))
word = (0, 1, 0, 1, 0)
pts = ["11100", "01110", "00111", "10011", "11001"]
for a, b in zip(pts, pts[1:] + pts[:1]):
    wt = fiber_curve_weight(g, word, parse_mask(a), parse_mask(b))
    print(f"{a} -> {b}: {format_root(wt)}")

# the 14-letter word for 46718235 and the fiber over 14327658
g = build_group(CoxeterSpec("A", 7))
print()
print("word product:", "".join(map(str, one_line(g, g.element(HEXAGON_WORD)))))
y = parse_one_line(g, HEXAGON_Y)
labels = hexagon_labels()
fixed = fiber_fixed_points(g, HEXAGON_WORD, y)
print(len(fixed), "fixed points")
by_dim = {}
for m in fixed:
    total, fiber = bb_cell_dim(g, HEXAGON_WORD, m)
    by_dim.setdefault(fiber, []).append(labels[m])
for d in sorted(by_dim, reverse=True):
    print(f"  cell dim {d}: {', '.join(sorted(by_dim[d]))}")

# weights of the four normal lines split into a lam part and a mu part
tables = hexagon_weight_tables(g)
for name, tab in (("lam", tables.lam), ("mu", tables.mu)):
    print(f"{name} table")
    for i, row in enumerate(tab, start=1):
        print(f"  L{i}: " + "  ".join(f"{format_root(r):>14s}" for r in row))
print("lam1+mu1 mask:", mask_str(next(m for m, n in labels.items() if n == "lam1+mu1")))
