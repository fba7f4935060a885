from fractions import Fraction as F

import pytest

from golden import E7_CURVE_PAIR, E7_DIVISORIAL_PAIR
from wps import (
    ArrowPoint, CurveArrow, Divisorial, EdgePoint, FreePoint, GraphError, ValuationSpec, apply_script,
    blow_up, build_minimal, drop_variable, expand, intersection_number, multiplicity_vectors,
    oracle_coefficient, parse_series, project_set_one, single_from_multi, weil_poincare,
)
from wps.registry import e7_pair_graphs


def test_a1_curvette():
    # m = 1/2, chi = 1
    assert weil_poincare(build_minimal("A1").with_arrow(1)) == parse_series("(1 - t1^1/2)^-1")


def test_d4_central_curvette():
    # column of the centre is (1, 2, 1, 1); the centre has chi = 2 - 3 - 1
    s = weil_poincare(build_minimal("D4").with_arrow(2))
    assert s == parse_series("(1 - t1)^-3 (1 - t1^2)^2")


def test_divisorial_mark_keeps_chi():
    s = weil_poincare(build_minimal("A3").with_mark(2))
    # vertices 1 and 3 are ends (chi 1), vertex 2 has valency 2
    assert s == parse_series("(1 - t1^1/2)^-2")


def test_e7_curve_pair():
    c1, c2, _, _ = e7_pair_graphs()
    target = parse_series(E7_CURVE_PAIR)
    assert weil_poincare(c1) == target
    assert weil_poincare(c2) == target
    assert c2.weight["7"] == -4 and c2.weight["8"] == -2 and c2.weight["9"] == -1


def test_e7_divisorial_pair():
    _, _, d1, d2 = e7_pair_graphs()
    target = parse_series(E7_DIVISORIAL_PAIR)
    assert weil_poincare(d1) == target == weil_poincare(d2)


def test_series_invariant_under_blowups():
    g = build_minimal("E6").with_arrow(3)
    s = weil_poincare(g)
    h = apply_script(g, [FreePoint(1), EdgePoint(3, 4), ArrowPoint("C1"), FreePoint(9)])
    assert weil_poincare(h) == s


def test_two_curvettes():
    g = build_minimal("A2").with_arrow(1).with_arrow(2)
    assert weil_poincare(g) == parse_series("1", 2)
    h = build_minimal("A3").with_arrow(1).with_arrow(1)
    mv = multiplicity_vectors(h)
    assert mv["3"] == (F(1, 4), F(1, 4))
    # vertex 1 carries both arrows (chi -1), vertex 2 has chi 0
    assert weil_poincare(h) == parse_series("(1 - t1^3/4 t2^3/4) (1 - t1^1/4 t2^1/4)^-1")


def test_spec_order_permutes_variables():
    g = build_minimal("D5").with_arrow(1).with_mark(4)
    a = weil_poincare(g)
    b = weil_poincare(g, ValuationSpec([Divisorial(4), CurveArrow("C1")]))
    assert b == a.permute((1, 0))


def test_mark_and_arrow_on_same_vertex():
    with pytest.raises(GraphError):
        weil_poincare(build_minimal("A2").with_arrow(1), ValuationSpec([CurveArrow("C1"), Divisorial(1)]))


def test_empty_spec():
    with pytest.raises(ValueError):
        weil_poincare(build_minimal("A2"))


def test_duplicate_valuations():
    with pytest.raises(ValueError):
        ValuationSpec([Divisorial(1), Divisorial(1)])


def test_intersection_number():
    g = build_minimal("E6").with_arrow(1).with_arrow(6)
    assert intersection_number(g, None, 0, 1) == F(2, 3)
    with pytest.raises(ValueError):
        intersection_number(g, None, 0, 0)


def test_projection_formulas():
    g = blow_up(build_minimal("D5").with_arrow(3), FreePoint(3)).with_arrow(6).with_arrow(5)
    s = weil_poincare(g)
    rest, m_tau = project_set_one(s, g, None, 0)
    assert rest == weil_poincare(g.replace(arrows=(("C1", "6"), ("C2", "5"))))
    assert single_from_multi(s, 0, m_tau) == weil_poincare(g.replace(arrows=(("C1", "3"),)))
    with pytest.raises(IndexError):
        drop_variable(s, 5, m_tau)


@pytest.mark.parametrize("build", [
    lambda: build_minimal("E7").with_arrow(4),
    lambda: blow_up(build_minimal("D4"), FreePoint(2)).with_mark(5),
    lambda: build_minimal("A3").with_arrow(1).with_arrow(3),
    lambda: e7_pair_graphs()[1],
])
def test_oracle_matches_expansion(build):
    g = build()
    e = expand(weil_poincare(g), 10)
    for u, c in e.coefficients.items():
        if any(u):
            assert oracle_coefficient(g, None, u) == c


def test_oracle_outside_semigroup():
    g = build_minimal("E8").with_arrow(8)
    assert oracle_coefficient(g, None, (1,)) == 0
    assert oracle_coefficient(g, None, (2,)) == 1
