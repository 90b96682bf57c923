import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geocrystal.exact_algebra import VariableContext, parse
from geocrystal.kashiwara import (
    NEG_INF, FiniteCrystal, canonical_form, character, closed_family_check, component_labels,
    connected_components, disjoint_union, from_json, highest_weight_elements, is_isomorphic,
    is_normal, isomorphism, opposite, point_crystal, q_multiplicity, q_polynomial_text,
    string_lengths, tensor, tensor_power_apply, to_dot, to_json, weight_multiplicities,
)
from oracles import character_product, gt_character, lr_by_peeling


def string(a, shift=0):
    """GL_2 crystal of ``V_{(a+shift, shift)}``: ``k -> (a-k+shift, k+shift)``."""
    weights = [(a - k + shift, k + shift) for k in range(a + 1)]
    phi = [[a - k] for k in range(a + 1)]
    eps = [[k] for k in range(a + 1)]
    up = [[k - 1] for k in range(a + 1)]
    return FiniteCrystal(2, weights, phi, eps, up, [(k,) for k in range(a + 1)])


def standard(n):
    """Crystal of the defining representation: ``k`` has weight ``e_k``."""
    weights = np.eye(n, dtype=np.int64)
    phi = [[int(k == i) for i in range(n - 1)] for k in range(n)]
    eps = [[int(k == i + 1) for i in range(n - 1)] for k in range(n)]
    up = [[k - 1 if k == i + 1 else -1 for i in range(n - 1)] for k in range(n)]
    return FiniteCrystal(n, weights, phi, eps, up, [(k,) for k in range(n)])


strings = st.builds(string, st.integers(0, 4), st.integers(-2, 2))


def test_invalid_tables_are_rejected():
    with pytest.raises(ValueError):
        FiniteCrystal(2, [(1, 0)], [[0]], [[0]], [[-1]])
    with pytest.raises(ValueError):
        FiniteCrystal(2, [(1, 0), (0, 1)], [[1], [0]], [[0], [1]], [[-1], [1]])


def test_sl2_product_rule():
    b = string(1)
    p = tensor(b, b)
    # Element (b1, b1) is id 3; e_1 acts on the first factor.
    assert p.e(1, 3) == 1
    assert p.coords[1] == (0, 1)
    assert tensor_power_apply(b, b, 1, 1, 1, 1) == (0, 1)
    assert p.validate() == []


def test_unit_is_neutral():
    b = standard(3)
    for p in (tensor(b, point_crystal(3)), tensor(point_crystal(3), b)):
        assert is_isomorphic(p, b)


def test_gl3_standard_square():
    b = standard(3)
    p = tensor(b, b)
    assert len(p) == 9
    hw = highest_weight_elements(p)
    assert sorted(p.weight(x) for x in hw) == [(1, 1, 0), (2, 0, 0)]
    assert sorted(len(c) for c in connected_components(p)) == [3, 6]
    assert highest_weight_elements(point_crystal(3)) == [0]


def test_character_and_multiplicities():
    ctx = VariableContext([])
    assert character(standard(3), context=ctx) == parse("x1 + x2 + x3", ctx)
    assert character(point_crystal(3), context=ctx) == parse("1", ctx)
    assert weight_multiplicities(string(2)) == Counter({(2, 0): 1, (1, 1): 1, (0, 2): 1})


@given(strings, strings)
def test_character_is_multiplicative(a, b):
    ctx = VariableContext([])
    assert character(tensor(a, b), context=ctx) == character(a, context=ctx) * character(b, context=ctx)


@given(strings, strings)
def test_products_are_normal_crystals(a, b):
    p = tensor(a, b)
    assert p.validate() == []
    assert is_normal(p).normal


@given(strings, strings)
def test_clebsch_gordan(a, b):
    p = tensor(a, b)
    lam = tuple(int(v) for v in a.weights[0])
    mu = tuple(int(v) for v in b.weights[0])
    expected = lr_by_peeling(lam, mu)
    got = Counter(p.weight(x) for x in highest_weight_elements(p))
    assert dict(got) == expected
    assert sorted(len(c) for c in connected_components(p)) == sorted(
        nu[0] - nu[1] + 1 for nu, m in expected.items() for _ in range(m))


@given(strings, strings, strings)
def test_product_is_associative(a, b, c):
    assert is_isomorphic(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


@given(strings, strings)
def test_opposite(a, b):
    assert is_isomorphic(opposite(opposite(a)), a)
    assert np.array_equal(opposite(opposite(a)).up, a.up)
    assert is_isomorphic(opposite(tensor(a, b)), tensor(opposite(b), opposite(a)))
    assert opposite(a).validate() == []


def test_opposite_point():
    p = opposite(point_crystal(3, (2, 1, 0)))
    assert p.weight(0) == (-2, -1, 0)


def test_normality_violations_are_reported():
    # Truncating a string keeps the axioms but breaks the string lengths.
    b = string(3).restrict([0, 1, 2])
    rep = is_normal(b)
    assert rep.upper_normal
    assert not rep.lower_normal
    assert not rep
    assert is_normal(FiniteCrystal(2, np.zeros((0, 2)), [], [], [])).normal


def test_string_lengths():
    b = string(3)
    assert string_lengths(b, "up")[:, 0].tolist() == [0, 1, 2, 3]
    assert string_lengths(b, "down")[:, 0].tolist() == [3, 2, 1, 0]


def test_components_of_a_disjoint_union():
    u = disjoint_union(string(2), string(1, 4))
    comps = connected_components(u)
    assert [len(c) for c in comps] == [3, 2]
    assert is_isomorphic(comps[1], string(1, 4))
    assert component_labels(u).tolist() == [0, 0, 0, 1, 1]


def test_isomorphism_search():
    a = tensor(standard(3), standard(3))
    b = a.restrict(list(range(9))[::-1])
    m = isomorphism(a, b)
    assert m is not None
    for x, y in m.items():
        assert a.weight(x) == b.weight(y)
    assert not is_isomorphic(standard(3), opposite(standard(3)))
    assert isomorphism(string(1), string(2)) is None
    with pytest.raises(ValueError):
        canonical_form(tensor(string(1), string(1)))


def test_closed_family_of_strings():
    fam = lambda lam: string(lam[0] - lam[1], lam[1])  # noqa: E731
    rep = closed_family_check(fam, (2, 0), (1, 0))
    assert rep.ok and rep.embedded == 4
    broken = closed_family_check(lambda lam: string(1) if lam == (3, 0) else fam(lam), (2, 0), (1, 0))
    assert not broken.ok


def test_closed_family_for_the_standard_square():
    fam = {(1, 0, 0): standard(3)}
    sym = connected_components(tensor(standard(3), standard(3)))
    fam[(2, 0, 0)] = next(c for c in sym if len(c) == 6)
    rep = closed_family_check(fam, (1, 0, 0), (1, 0, 0))
    assert rep.ok and rep.embedded == 6


def test_q_multiplicity_bookkeeping():
    p = tensor(string(1), string(1))
    hw = highest_weight_elements(p)
    charge = {x: k for k, x in enumerate(hw)}
    total = {}
    for nu in ((2, 0), (1, 1)):
        total.update(q_multiplicity(p, charge, nu))
    assert sum(total.values()) == 2
    with pytest.raises(KeyError):
        q_multiplicity(p, {}, (2, 0))
    assert q_polynomial_text({0: 1, 1: 2, 3: 1}) == "1 + 2*q + q^3"
    assert q_polynomial_text({}) == "0"


def test_json_round_trip():
    p = tensor(standard(3), opposite(standard(3)))
    data = to_json(p)
    back = from_json(json.dumps(data))
    assert np.array_equal(back.up, p.up)
    assert np.array_equal(back.weights, p.weights)
    assert back.coords == p.coords
    assert data["highest"] == highest_weight_elements(p)
    assert sorted(data["elements"][0]) == ["coords", "eps", "id", "phi", "weight"]


def test_dot_output():
    dot = to_dot(standard(3), name="V")
    assert dot.startswith("digraph V {")
    assert '1 -> 0 [label="1", color=red];' in dot
    assert '2 -> 1 [label="2", color=blue];' in dot


def test_support_and_sentinel():
    b = FiniteCrystal(3, [(0, 0, 0)], [[0, 0]], [[0, 0]], [[-1, -1]], support=[1])
    assert b.phi(0, 2) is NEG_INF
    assert b.e(2, 0) is None
    assert NEG_INF < -10**9 and NEG_INF + 5 is NEG_INF


def test_gt_oracle_agrees_with_standard_powers():
    cube = tensor(tensor(standard(3), standard(3)), standard(3))
    expected = character_product(character_product(gt_character((1, 0, 0)), gt_character((1, 0, 0))),
                                 gt_character((1, 0, 0)))
    assert weight_multiplicities(cube) == expected
