import itertools

import pytest
from hypothesis import given, settings, strategies as st

from klsep.coxeter import (CoxeterSpec, NoRootDatum, UnsupportedSpec, act_on_root, build_group,
                           bruhat_leq, contains_pattern, is_root, lower_interval, one_line,
                           parse_one_line, positive_roots, reflection_of)

import oracles
from shared import group

SMALL = ["A1", "A2", "A3", "B2", "B3", "G2", "I2(2)", "I2(5)", "I2(7)", "D4", "F4"]


@pytest.mark.parametrize("label", SMALL + ["A4", "B4", "D5"])
def test_order_matches_formula(label):
    g = group(label)
    assert g.order == g.spec.expected_order
    assert len(set(g.words)) == g.order


def test_parse_and_labels():
    assert CoxeterSpec.parse("I2(5)") == CoxeterSpec("I", 2, 5)
    assert CoxeterSpec.parse("B3").label == "B3"
    assert CoxeterSpec("I", 2, 6).label == "I2(6)"
    assert CoxeterSpec("B", 3).letters == ("s", "t", "u")
    assert CoxeterSpec("A", 5).letters == ("1", "2", "3", "4", "5")


@pytest.mark.parametrize("fam,rank,m", [("A", 0, None), ("B", 1, None), ("D", 3, None),
                                        ("F", 3, None), ("G", 3, None), ("I", 2, 1),
                                        ("E", 6, None), ("A", 12, None)])
def test_unsupported_specs(fam, rank, m):
    with pytest.raises(UnsupportedSpec):
        CoxeterSpec(fam, rank, m)


def test_hand_cartan_matrices():
    assert CoxeterSpec("A", 2).cartan == [[2, -1], [-1, 2]]
    # short root last in B
    assert CoxeterSpec("B", 3).cartan == [[2, -1, 0], [-1, 2, -1], [0, -2, 2]]
    assert CoxeterSpec("G", 2).cartan == [[2, -3], [-1, 2]]
    d4 = CoxeterSpec("D", 4).cartan
    assert [d4[1][j] for j in (0, 2, 3)] == [-1, -1, -1]
    assert d4[0][2] == d4[0][3] == d4[2][3] == 0
    assert CoxeterSpec("I", 2, 5).cartan is None


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "B3", "D4", "A3", "F4"])
def test_group_matches_matrix_representation(label):
    g = group(label)
    mats = oracles.matrix_group(g.spec.cartan)
    assert len(mats) == g.order
    # lengths agree with the count of inverted positive roots
    roots = positive_roots(g)
    hist = sorted(sum(1 for r in roots if any(c < 0 for c in act_on_root(g, w, r)))
                  for w in range(g.order))
    assert hist == sorted(int(x) for x in g.length)


@pytest.mark.parametrize("label", ["A3", "B3", "D4", "F4", "G2", "B4"])
def test_positive_roots_brute(label):
    g = group(label)
    assert set(positive_roots(g)) == oracles.positive_roots_brute(g.spec.cartan)
    assert len(positive_roots(g)) == int(g.length[g.longest])


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "A4"])
def test_type_a_against_permutations(label):
    g = group(label)
    n = g.rank + 1
    seen = set()
    for w in range(g.order):
        p = one_line(g, w)
        seen.add(p)
        assert oracles.inversions(p) == g.length[w]
        right = {i for i in range(n - 1) if p[i] > p[i + 1]}
        inv = sorted(range(n), key=lambda i: p[i])
        left = {i for i in range(n - 1) if inv[i] > inv[i + 1]}
        assert g.descents(w, "right") == right
        assert g.descents(w, "left") == left
        for s in range(g.rank):
            assert one_line(g, g.mult(s, w, "right")) == oracles.compose(p, oracles.transposition(n, s))
            assert one_line(g, g.mult(s, w, "left")) == oracles.compose(oracles.transposition(n, s), p)
    assert len(seen) == g.order


def test_one_line_examples():
    g = group("A7")
    w = g.element([2, 1, 0, 4, 3, 2, 1, 5, 4, 3, 2, 6, 5, 4])
    assert "".join(map(str, one_line(g, w))) == "46718235"
    assert g.word_str(parse_one_line(g, "14327658")) == "232565"
    with pytest.raises(ValueError):
        parse_one_line(g, "1234567")


@pytest.mark.parametrize("label", ["A3", "B3", "I2(6)", "G2"])
def test_bruhat_matches_subword_property(label):
    g = group(label)
    for x in range(g.order):
        for w in range(g.order):
            assert bruhat_leq(g, x, w) == oracles.bruhat_subword(g, x, w)


def test_bruhat_matches_tableau_criterion_a4():
    g = group("A4")
    perms = [one_line(g, w) for w in range(g.order)]
    for x in range(0, g.order, 3):
        for w in range(g.order):
            assert bruhat_leq(g, x, w) == oracles.bruhat_tableau(perms[x], perms[w])


def test_lower_interval():
    g = group("B3")
    w = g.parse_word("stsu")
    assert lower_interval(g, w) == frozenset(x for x in range(g.order) if bruhat_leq(g, x, w))
    assert lower_interval(g, g.longest) == frozenset(range(g.order))


@pytest.mark.parametrize("label", SMALL)
def test_words_are_shortlex_normal_forms(label):
    g = group(label)
    for w in range(g.order):
        word = g.words[w]
        assert len(word) == g.length[w] and g.element(word) == w
        # shortlex: no reduced word of the same element is lexicographically smaller
        if len(word) <= 6:
            for cand in itertools.product(range(g.rank), repeat=len(word)):
                if cand < word:
                    assert g.element(cand) != w


@pytest.mark.parametrize("label", SMALL)
def test_inverse_and_products(label):
    g = group(label)
    for w in range(g.order):
        assert g.product(w, int(g.inverse[w])) == g.identity
        assert g.length[g.inverse[w]] == g.length[w]
    assert g.word_str(g.identity) == "e"
    assert g.parse_word("e") == g.parse_word("id") == g.identity


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A3", "B3", "G2", "D4"]), st.data())
def test_associativity_and_length_parity(label, data):
    g = group(label)
    x, y, z = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    assert g.product(g.product(x, y), z) == g.product(x, g.product(y, z))
    assert (g.length[g.product(x, y)] - g.length[x] - g.length[y]) % 2 == 0


def test_reflections_of_roots():
    g = group("B3")
    for r in positive_roots(g):
        t = reflection_of(g, r)
        assert g.product(t, t) == g.identity and t != g.identity
        assert act_on_root(g, t, r) == tuple(-c for c in r)
    assert len({reflection_of(g, r) for r in positive_roots(g)}) == len(positive_roots(g))
    assert is_root(g, (-1, -1, 0)) and not is_root(g, (1, 0, 1))
    with pytest.raises(ValueError):
        reflection_of(g, (1, 0, 1))


def test_roots_need_crystallographic_datum():
    with pytest.raises(NoRootDatum):
        positive_roots(group("I2(5)"))


def test_pattern_containment_against_brute_force():
    g = group("A3")
    for w in range(g.order):
        p = one_line(g, w)
        for pat in ("321", "231", "2143"):
            assert contains_pattern(p, pat) == oracles.contains_pattern_brute(p, tuple(map(int, pat)))


def test_dihedral_longest_element():
    for m in range(2, 9):
        g = build_group(CoxeterSpec("I", 2, m))
        assert g.length[g.longest] == m and g.order == 2 * m
        assert g.descents(g.longest) == frozenset({0, 1})
