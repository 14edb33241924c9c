import itertools

import pytest
from hypothesis import given, settings, strategies as st

from klsep.bott_samelson import (D4_WORD, D4_Y, ETA_POSITIONS, HEXAGON_WORD, HEXAGON_Y, LAMBDA,
                                 MAX_WORD_LENGTH, MU, NU, WordTooLong, bb_cell_dim,
                                 fiber_curve_weight, fiber_fixed_points, format_root,
                                 hexagon_labels, hexagon_weight_tables, mask, mask_str,
                                 normal_line_weight, parse_mask, prefix_products,
                                 subword_product, tcurve_weight, truncate)
from klsep.coxeter import act_on_root, one_line, parse_one_line, positive_roots, reflection_of

import oracles
from shared import group

SL3_WORD = (0, 1, 0, 1, 0)
PENTAGON = ["11100", "01110", "00111", "10011", "11001"]


def perm_fiber_dims(word, eps, n):
    """Cell dimensions from permutations: s_i is a right descent of p iff p(i) > p(i+1)."""
    p = tuple(range(1, n + 1))
    total = fiber = 0
    for s, e in zip(word, eps):
        before = p[s] > p[s + 1]
        if e:
            p = oracles.compose(p, oracles.transposition(n, s))
        fiber += before
        total += p[s] > p[s + 1]
    return total, fiber


def test_mask_helpers():
    assert mask(5, [1, 3]) == (1, 0, 1, 0, 0)
    assert mask(3, [2, 2]) == (0, 0, 0)
    assert mask_str(parse_mask("01101")) == "01101"
    assert truncate((1, 1, 0, 1), 2) == (1, 1, 0, 0)
    with pytest.raises(ValueError):
        mask(3, [4])
    with pytest.raises(ValueError):
        parse_mask("0120")


def test_sl3_fixed_points():
    g = group("A2")
    pts = fiber_fixed_points(g, SL3_WORD, g.longest)
    assert {mask_str(m) for m in pts} == set(PENTAGON)
    assert pts == sorted(pts)


def test_pentagon_weights():
    g = group("A2")
    eps = [parse_mask(m) for m in PENTAGON]
    got = [format_root(fiber_curve_weight(g, SL3_WORD, eps[i], eps[(i + 1) % 5])) for i in range(5)]
    assert got == ["-rho1", "-rho2", "rho1", "rho1+rho2", "rho2"]


def test_fiber_curve_weight_rejects_bad_pairs():
    g = group("A2")
    with pytest.raises(ValueError):
        fiber_curve_weight(g, SL3_WORD, parse_mask("11100"), parse_mask("11100"))
    with pytest.raises(ValueError):
        fiber_curve_weight(g, SL3_WORD, parse_mask("11100"), parse_mask("11010"))


def test_tcurve_sign_law_a2():
    # the weight at w toward w s_mu is positive exactly when w < w s_mu
    g = group("A2")
    for w in range(g.order):
        for mu in positive_roots(g):
            up = g.length[g.product(w, reflection_of(g, mu))] > g.length[w]
            wt = tcurve_weight(g, w, mu)
            assert (wt in set(positive_roots(g))) == up
    with pytest.raises(ValueError):
        tcurve_weight(g, 0, (-1, 0))
    with pytest.raises(ValueError):
        tcurve_weight(g, 0, (1, -1))


@pytest.mark.parametrize("label", ["A3", "B3", "G2"])
def test_length_and_root_methods_agree(label):
    g = group(label)
    word = tuple(g.words[g.longest])
    for eps in itertools.islice(itertools.product((0, 1), repeat=len(word)), 0, None, 7):
        assert bb_cell_dim(g, word, eps) == bb_cell_dim(g, word, eps, method="root")


def test_trivial_cell_dims():
    g = group("A3")
    word = tuple(g.words[g.longest])
    assert bb_cell_dim(g, word, (0,) * len(word)) == (0, 0)
    assert bb_cell_dim(g, word, (1,) * len(word))[0] == len(word)
    with pytest.raises(ValueError):
        bb_cell_dim(g, word, (0,) * len(word), method="guess")


def test_word_length_limit():
    g = group("A1")
    assert len(fiber_fixed_points(g, (0,) * MAX_WORD_LENGTH, g.identity)) == 2 ** (MAX_WORD_LENGTH - 1)
    with pytest.raises(WordTooLong):
        fiber_fixed_points(g, (0,) * (MAX_WORD_LENGTH + 1), g.identity)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=9), st.data())
def test_fixed_points_match_brute_force(word, data):
    g = group("A3")
    word = tuple(word)
    y = data.draw(st.integers(0, g.order - 1))
    brute = [e for e in oracles.all_masks(len(word)) if subword_product(g, word, e) == y]
    assert sorted(fiber_fixed_points(g, word, y)) == sorted(brute)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=10), st.data())
def test_cell_dims_match_permutation_oracle(word, data):
    g = group("A4")
    eps = tuple(data.draw(st.lists(st.integers(0, 1), min_size=len(word), max_size=len(word))))
    assert bb_cell_dim(g, word, eps) == perm_fiber_dims(word, eps, 5)
    pre = prefix_products(g, word, eps)
    assert pre[-1] == subword_product(g, word, eps)


def test_normal_line_weight_definition():
    g = group("A3")
    word = (0, 1, 2, 0, 1, 0)
    for eps in oracles.all_masks(len(word)):
        for i in range(1, len(word) + 1):
            w = subword_product(g, word, truncate(eps, i - 1))
            unit = tuple(int(j == word[i - 1]) for j in range(3))
            assert normal_line_weight(g, word, eps, i) == act_on_root(g, w, unit)


# the A7 hexagon ------------------------------------------------------------

@pytest.fixture(scope="module")
def a7():
    return group("A7")


def test_hexagon_word(a7):
    assert "".join(map(str, one_line(a7, a7.element(HEXAGON_WORD)))) == "46718235"
    assert len(LAMBDA) == len(MU) == 5 and sum(NU) == 2


def test_hexagon_fixed_points_are_labelled(a7):
    y = parse_one_line(a7, HEXAGON_Y)
    pts = fiber_fixed_points(a7, HEXAGON_WORD, y)
    labels = hexagon_labels()
    assert len(pts) == 29 and set(pts) == set(labels)


def test_hexagon_fiber_dims(a7):
    y = parse_one_line(a7, HEXAGON_Y)
    labels = hexagon_labels()
    dims = {labels[m]: bb_cell_dim(a7, HEXAGON_WORD, m)[1] for m in fiber_fixed_points(a7, HEXAGON_WORD, y)}
    for m, name in labels.items():
        assert dims[name] == perm_fiber_dims(HEXAGON_WORD, m, 8)[1]
    assert [n for n, d in dims.items() if d == 4] == ["lam1+mu1"]
    off_grid = {n: d for n, d in dims.items() if n.endswith("+nu")}
    assert off_grid == {"lam4+mu4+nu": 1, "lam4+mu5+nu": 2, "lam5+mu4+nu": 2, "lam5+mu5+nu": 3}
    assert dims["lam3+mu3"] == 0


def _vec(*idx, n=7):
    return tuple(int(i + 1 in idx) for i in range(n))


# e_T(L_i) restricted to p(lam_j + mu_k) = lam-part[j] + mu-part[k], rows i = 1..4
LAM_TABLE = [
    [_vec(1, 2, 3), _vec(1, 2), _vec(1), _vec(1), _vec(1, 2, 3)],
    [_vec(3, 4), _vec(4), _vec(4), _vec(3, 4), _vec(3, 4)],
    [_vec(2, 3, 4), _vec(2, 3, 4), _vec(3, 4), _vec(3, 4), _vec(3, 4)],
    [_vec()] * 5,
]
MU_TABLE = [
    [_vec()] * 5,
    [_vec(5), _vec(), _vec(), _vec(5), _vec(5)],
    [_vec(5, 6), _vec(5, 6), _vec(5), _vec(5), _vec(5)],
    [_vec(5, 6, 7), _vec(6, 7), _vec(7), _vec(7), _vec(5, 6, 7)],
]


def test_hexagon_weight_tables(a7):
    tables = hexagon_weight_tables(a7)
    assert [list(r) for r in tables.lam] == LAM_TABLE
    assert [list(r) for r in tables.mu] == MU_TABLE
    assert ETA_POSITIONS == (3, 5, 10, 12)


def test_weight_tables_need_a7():
    with pytest.raises(ValueError):
        hexagon_weight_tables(group("A3"))


def test_nu_is_not_on_the_grid():
    grid = {tuple((a + b) % 2 for a, b in zip(l, m)) for l in LAMBDA for m in MU}
    assert all(tuple((a + b) % 2 for a, b in zip(m, NU)) not in grid for m in grid)
    labels = hexagon_labels()
    assert len(grid) == 25 and len(labels) == 29


def test_d4_fiber():
    g = group("D4")
    y = g.parse_word(D4_Y)
    pts = fiber_fixed_points(g, D4_WORD, y)
    assert len(pts) == 8
    expected = {e for e in oracles.all_masks(7) if e[3] == 0 and all(e[i] + e[i + 4] == 1 for i in range(3))}
    assert set(pts) == expected
