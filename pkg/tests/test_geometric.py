from fractions import Fraction

import pytest

from geocrystal.exact_algebra import (
    VariableContext, certify_positive, eval_at, parse, substitute, var,
)
from geocrystal.geometric import (
    RankOneCrystal, act_ei, build_cell_chart, build_chart, central_charge, central_charge_numeric,
    corner_minors, decoration_fB, decoration_fw, ldu, matrix_action, udl, verify_geometric_axioms,
)
from geocrystal.root_data import matmul

WORDS = {2: [(1,)], 3: [(1, 2, 1), (2, 1, 2)], 4: [(1, 2, 1, 3, 2, 1), (3, 2, 3, 1, 2, 3),
                                                 (2, 1, 3, 2, 3, 1)]}


def chart(n, word, **kw):
    return build_chart(n, word, context=VariableContext([]), **kw)


def test_rank_one_crystal():
    ctx = VariableContext(["c"])
    y = RankOneCrystal(3, 2, var("c", ctx))
    assert y.phi(2) == var("c", ctx) and y.phi(1).is_zero()
    assert y.eps(2) * y.phi(2) == 1
    assert y.gamma[1] * y.gamma[2] == 1
    assert y.eps(2) == y.phi(2) * y.gamma[1] / y.gamma[2]


def test_gl2_chart():
    x = chart(2, (1,))
    p = lambda s: parse(s, x.context)  # noqa: E731
    assert x.phi[1] == p("t2/t1*c1")
    assert x.eps[1] == p("1/c1")
    assert x.gamma == (p("t1/c1"), p("t2*c1"))
    assert x.decoration == p("c1 + t1/(t2*c1)")
    assert act_ei(x, 1) == (p("c1/d"),)


def test_gl3_matrix_and_maps():
    x = chart(3, (1, 2, 1))
    p = lambda s: parse(s, x.context)  # noqa: E731
    assert x.matrix[1][0] == p("t2*(c1/c2 + 1/c3)")
    assert x.phi[2] == p("t3/t2*c2/c1")
    assert act_ei(x, 2) == (p("c1"), p("c2/d"), p("c3"))
    assert act_ei(x, 1)[0] == p("c1*(c2 + c1*c3)/(d*c2 + c1*c3)")
    with pytest.raises(ValueError):
        act_ei(x, 3)


@pytest.mark.parametrize("n,word", [(n, w) for n, ws in WORDS.items() for w in ws])
def test_fold_agrees_with_minor_ratios(n, word):
    x = chart(n, word, decorate=False)
    gamma, phi, eps = x.structure_by_minors()
    assert gamma == x.gamma
    assert phi == x.phi
    assert eps == x.eps
    for i in range(1, n):
        assert x.gamma[i - 1] / x.gamma[i] == eps[i] / phi[i]


@pytest.mark.parametrize("n,word", [(2, (1,)), (3, (1, 2, 1)), (3, (2, 1, 2))])
def test_coordinate_action_matches_matrix_formula(n, word):
    x = chart(n, word, decorate=False)
    for i in range(1, n):
        moved, expected = matrix_action(x, i)
        assert moved == expected


@pytest.mark.parametrize("n,word", [(2, (1,)), (3, (1, 2, 1)), (3, (2, 1, 2))])
def test_decoration_identity_holds_symbolically(n, word):
    x = chart(n, word)
    d = var(x.d_name, x.context)
    for i in range(1, n):
        moved = substitute(x.decoration, dict(zip(x.c_names, act_ei(x, i))))
        assert moved - x.decoration == (d - 1) / x.phi[i] + (1 / d - 1) / x.eps[i]


def test_unit_action_is_identity():
    x = chart(3, (1, 2, 1))
    for i in (1, 2):
        back = [substitute(f, {"d": parse("1", x.context)}) for f in act_ei(x, i)]
        assert back == [var(c, x.context) for c in x.c_names]


def test_chart_transition_is_positive_both_ways():
    ctx = VariableContext([])
    a = build_cell_chart(3, (1, 2, 1), c_prefix="c", context=ctx)
    b = build_cell_chart(3, (2, 1, 2), c_prefix="d", context=ctx)
    p = lambda s: parse(s, ctx)  # noqa: E731
    forward = {"d1": p("c2*c3/(c1*c3 + c2)"), "d2": p("c1*c3"), "d3": p("(c1*c3 + c2)/c3")}
    backward = {"c1": p("d2/(d1 + d2/d3)"), "c2": p("d1*d3"), "c3": p("d1 + d2/d3")}
    for f in list(forward.values()) + list(backward.values()):
        certify_positive(f)
    assert tuple(tuple(substitute(e, forward) for e in row) for row in b.matrix) == a.matrix
    assert tuple(tuple(substitute(e, backward) for e in row) for row in a.matrix) == b.matrix


def test_decoration_requires_a_w0_chart():
    x = build_cell_chart(3, (1, 2), context=VariableContext([]))
    with pytest.raises(ValueError):
        decoration_fB(x)


def test_word_validation():
    with pytest.raises(ValueError):
        chart(3, (1, 1, 2))
    with pytest.raises(ValueError):
        chart(3, (1, 2))
    with pytest.raises(ValueError):
        chart(3, (1, 3, 1))


def test_schubert_functions():
    ctx = VariableContext([])
    plus = decoration_fw(3, (1, 2, 1), chart="plus", context=ctx)
    assert plus.f == parse("c1 + c2 + c3", ctx)
    assert decoration_fw(2, (1,), context=ctx).f == parse("c1", ctx)
    with pytest.raises(ValueError):
        decoration_fw(3, (1, 1), context=ctx)
    with pytest.raises(ValueError):
        decoration_fw(3, (1,), chart="sideways", context=ctx)


def test_corner_minors_are_monomials():
    ctx = VariableContext([])
    for word in ((1, 2, 1), (2, 1), (1, 2, 1, 3, 2, 1)):
        n = 4 if len(word) > 3 else 3
        for f in corner_minors(n, word, context=ctx).values():
            assert f.is_monomial()


def test_gl2_central_charge_by_hand():
    ctx = VariableContext([])
    x = build_chart(2, (1,), context=ctx)
    y = build_chart(2, (1,), t_prefix="T", c_prefix="C", context=ctx)
    p = lambda s: parse(s, ctx)  # noqa: E731
    # f_B([[a, 0], [b, d]]) = (a + d)/b on the open cell.
    a, b, d = p("t1*T1/(c1*C1)"), p("t2*T1/C1 + t2*c1*T2"), p("t2*c1*T2*C1")
    expected = x.decoration + y.decoration - (a + d) / b
    assert central_charge(x, y) == expected


def test_central_charge_rejects_shared_variables():
    ctx = VariableContext([])
    x = build_chart(2, (1,), context=ctx)
    with pytest.raises(ValueError):
        central_charge(x, x)
    with pytest.raises(ValueError):
        central_charge(x, build_chart(2, (1,), t_prefix="T", c_prefix="C", context=VariableContext([])))


def test_numeric_central_charge_routes_agree():
    ctx = VariableContext([])
    x = build_chart(3, (1, 2, 1), context=ctx)
    y = build_chart(3, (1, 2, 1), t_prefix="T", c_prefix="C", context=ctx)
    ones_x = {v: Fraction(1) for v in x.variables}
    ones_y = {v: Fraction(1) for v in y.variables}
    direct, factored = central_charge_numeric(x, y, ones_x, ones_y)
    assert direct == factored > 0
    pt = {v: Fraction(k + 2, 3) for k, v in enumerate(x.variables)}
    qt = {v: Fraction(5, k + 1) for k, v in enumerate(y.variables)}
    direct, factored = central_charge_numeric(x, y, pt, qt)
    assert direct == factored > 0
    env = {**pt, **qt}
    assert eval_at(central_charge(x, y), env) == direct


def test_ldu_and_udl_reconstruct_the_matrix():
    a = ((Fraction(2), Fraction(1), Fraction(3)), (Fraction(4), Fraction(5), Fraction(1)),
         (Fraction(1), Fraction(2), Fraction(7)))
    low, diag, up = ldu(a)
    dm = tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(3)) for i in range(3))
    assert matmul(matmul(low, dm), up) == a
    up2, diag2, low2 = udl(a)
    dm2 = tuple(tuple(diag2[i] if i == j else Fraction(0) for j in range(3)) for i in range(3))
    assert matmul(matmul(up2, dm2), low2) == a
    with pytest.raises(ZeroDivisionError):
        ldu(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))


def test_axioms_gl3():
    report = verify_geometric_axioms(chart(3, (1, 2, 1)), trials=100, seed=0)
    assert report.ok, report.failures[:3]
    assert any("braid" in k for k in report.checks)
    assert all(line.split(": ")[1].startswith("pass") for line in report.summary_lines())


def test_axioms_gl4():
    report = verify_geometric_axioms(chart(4, (1, 2, 1, 3, 2, 1)), trials=25, seed=7)
    assert report.ok, report.failures[:3]
    assert any("a_ij = 0" in k for k in report.checks)
