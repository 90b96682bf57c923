from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from geocrystal.root_data import (
    RootDatum, SignedRepresentative, WeylElement, all_elements, default_word, demazure_star, det,
    generalized_minor, identity, inverse, iota, is_dominant, is_reduced, levi_monoid_star, matmul,
    parabolic_element, parse_word, s_bar, sigma, submatrix, w_bar,
)
from oracles import all_perms, bruhat_leq, cell_product, compose, perm_length, some_reduced_word

S4 = all_perms(4)
perm4 = st.sampled_from(S4)
entries = st.fractions(min_value=-4, max_value=4, max_denominator=3)
matrix3 = st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3).map(
    lambda rows: tuple(map(tuple, rows)))


def test_gl3_root_datum():
    rd = RootDatum(3)
    assert rd.index_set == (1, 2)
    assert rd.pairing(rd.simple_root(1), rd.simple_coroot(2)) == -1
    assert rd.simple_root(1) == (1, -1, 0)
    assert rd.positive_roots() == [(1, -1, 0), (1, 0, -1), (0, 1, -1)]
    assert rd.cartan_matrix() == ((2, -1), (-1, 2))
    assert rd.fundamental_weight(2) == (1, 1, 0)
    with pytest.raises(ValueError):
        rd.simple_root(3)


def test_dominance():
    assert is_dominant((3, 3, -1))
    assert not is_dominant((0, 1))


@given(perm4, perm4)
def test_multiplication_matches_composition(u, v):
    assert (WeylElement(u) * WeylElement(v)).perm == compose(u, v)


@given(perm4)
def test_length_words_and_inversions(p):
    w = WeylElement(p)
    assert w.length() == perm_length(p) == len(w.inversions()) == len(w.left_inversions())
    word = w.reduced_word()
    assert is_reduced(4, word)
    assert WeylElement.from_word(4, word) == w
    assert WeylElement.from_word(4, some_reduced_word(p)) == w
    assert (w * w.inverse()) == WeylElement.identity(4)


@given(perm4)
def test_inversions_are_sent_negative(p):
    w = WeylElement(p)
    rd = RootDatum(4)
    for a in rd.positive_roots():
        image = w.act(a)
        negative = next(x for x in image if x) < 0
        assert negative == (a in w.inversions())


def test_longest_element_and_default_word():
    assert WeylElement.from_word(3, default_word(3)) == WeylElement.longest(3)
    assert default_word(4) == (1, 2, 1, 3, 2, 1)
    assert not is_reduced(3, (1, 1))
    assert parse_word(" 2,1 ") == (2, 1)
    assert parse_word("") == ()


def test_weyl_element_validation():
    with pytest.raises(ValueError):
        WeylElement((1, 1, 2))
    with pytest.raises(ValueError):
        WeylElement.simple(3, 3)


@given(perm4, perm4)
def test_demazure_star_is_the_bruhat_top_of_the_cell_product(u, v):
    cells = cell_product(u, some_reduced_word(v))
    top = demazure_star(WeylElement(u), WeylElement(v)).perm
    assert top in cells
    assert all(bruhat_leq(c, top) for c in cells)


def test_simple_idempotence():
    s1 = WeylElement.simple(2, 1)
    assert demazure_star(s1, s1) == s1


def test_parabolic_elements():
    w0p, wp = parabolic_element(3, [1])
    assert w0p.perm == (2, 1, 3)
    assert wp.perm == (3, 1, 2)
    assert wp.reduced_word() == (2, 1)
    assert parabolic_element(3, [])[1] == WeylElement.longest(3)
    assert parabolic_element(3, [1, 2])[1] == WeylElement.identity(3)


def test_levi_star_by_brute_force():
    full = (1, 2, 3)
    assert levi_monoid_star(4, [1], full) == frozenset({1})
    # J = {1}, J' = {3}: compute the Demazure product directly.
    a, b = parabolic_element(4, [1])[1], parabolic_element(4, [3])[1]
    top = demazure_star(a, b)
    expected = [frozenset(J) for r in range(4) for J in combinations(full, r)
                if parabolic_element(4, J)[1] == top]
    assert [levi_monoid_star(4, [1], [3])] == expected


def test_signed_representatives():
    rep = SignedRepresentative(WeylElement.longest(3), (1, 2, 1))
    assert rep.matrix == SignedRepresentative(WeylElement.longest(3), (2, 1, 2)).matrix
    assert matmul(rep.matrix, rep.inverse_matrix()) == identity(3)
    assert s_bar(2, 1) == ((0, -1), (1, 0))
    assert w_bar(WeylElement.simple(2, 1)) == s_bar(2, 1)
    with pytest.raises(ValueError):
        SignedRepresentative(WeylElement.simple(3, 1), (1, 2))


def test_braid_relation_for_representatives():
    a, b = s_bar(3, 1), s_bar(3, 2)
    assert matmul(matmul(a, b), a) == matmul(matmul(b, a), b)


@given(matrix3)
def test_minors_with_identity_are_leading_minors(g):
    e = WeylElement.identity(3)
    for i in (1, 2, 3):
        assert generalized_minor(g, e, e, i) == det(submatrix(g, range(i), range(i)))


def test_minors_of_the_representatives_themselves():
    # Delta_{w omega_i, omega_i}(w_bar) = 1 for every w.
    for p in all_perms(3):
        w = WeylElement(p)
        for i in (1, 2, 3):
            assert generalized_minor(w_bar(w), w, WeylElement.identity(3), i) == 1


@given(matrix3)
def test_iota_and_sigma_are_involutions(g):
    assert sigma(sigma(g)) == g
    if det(g) != 0:
        assert iota(iota(g)) == g
        inv = inverse(g)
        assert matmul(g, inv) == identity(3, Fraction(1), Fraction(0))


def test_all_elements_is_the_symmetric_group():
    assert len(all_elements(4)) == 24
    assert len(set(all_elements(3))) == 6
