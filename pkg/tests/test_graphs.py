from fractions import Fraction

import pytest

from golden import printed_m
from wps import (
    AdeType, ArrowPoint, EdgePoint, FreePoint, GraphError, ResolutionGraph, apply_script,
    automorphism_group, blow_up, build_minimal, canonical_key, determinant, euler_chi,
    graph_from_doc, graph_to_doc, intersection_matrix, is_minimal, isomorphic_up_to_symmetry,
    m_matrix, minimize, parse_graph, render_graph,
)
from wps.graphs import brute_force_automorphisms

ALL = [f"A{k}" for k in range(1, 9)] + [f"D{k}" for k in range(4, 9)] + ["E6", "E7", "E8"]
DETS = {"A": lambda k: k + 1, "D": lambda k: 4, "E": lambda k: 9 - k}


@pytest.mark.parametrize("name", ALL)
def test_m_matrix_matches_printed(name):
    assert m_matrix(build_minimal(name)) == printed_m(name)


@pytest.mark.parametrize("name", ALL)
def test_m_matrix_inverts_intersection_matrix(name):
    g = build_minimal(name)
    e, m = intersection_matrix(g), m_matrix(g)
    n = len(e)
    for i in range(n):
        for j in range(n):
            assert sum(e[i][k] * m[k][j] for k in range(n)) == -(i == j)


@pytest.mark.parametrize("name", ALL)
def test_determinant(name):
    t = AdeType.parse(name)
    assert determinant(build_minimal(t)) == DETS[t.family](t.rank)


def test_determinant_is_blowup_invariant():
    g = build_minimal("E6")
    h = apply_script(g, [FreePoint(3), EdgePoint(3, 7), FreePoint(8)])
    assert determinant(h) == determinant(g) == 3


@pytest.mark.parametrize("bad", ["B3", "A0", "D3", "E9", "E5", "x"])
def test_bad_types_rejected(bad):
    with pytest.raises((GraphError, ValueError)):
        AdeType.parse(bad)


def test_positive_definite_graph_rejected():
    with pytest.raises(GraphError):
        ResolutionGraph(AdeType("A", 2), (("1", -1), ("2", -1)), (("1", "2"),))


def test_cycle_rejected():
    with pytest.raises(GraphError):
        ResolutionGraph(AdeType("A", 3), (("1", -2), ("2", -2), ("3", -2)),
                        (("1", "2"), ("2", "3"), ("1", "3")))


def test_blow_up_free_point():
    g = blow_up(build_minimal("A2"), FreePoint(1))
    assert g.weight == {"1": -3, "2": -2, "3": -1}
    assert ("1", "3") in g.edges
    assert not is_minimal(g)
    assert minimize(g).weight == {"1": -2, "2": -2}


def test_blow_up_edge_point():
    g = blow_up(build_minimal("A2"), EdgePoint(1, 2))
    assert g.weight == {"1": -3, "2": -3, "3": -1}
    assert set(g.edges) == {("1", "3"), ("2", "3")}
    assert g.valency("3") == 2


def test_blow_up_arrow_point_moves_arrow():
    g = build_minimal("D4").with_arrow(2)
    h = blow_up(g, ArrowPoint("C1"))
    assert h.arrows == (("C1", "5"),)
    assert h.weight["2"] == -3
    # a curvette blow-up is undone by the minimisation
    assert not is_minimal(h)
    assert minimize(h).arrows == (("C1", "2"),)


def test_blow_up_missing_edge():
    with pytest.raises(GraphError):
        blow_up(build_minimal("A3"), EdgePoint(1, 3))


def test_m_column_after_blowups_solves_system():
    g = apply_script(build_minimal("E7").with_arrow(7), [FreePoint(7), EdgePoint(7, 8), FreePoint(9)])
    e, m = intersection_matrix(g), m_matrix(g)
    n = len(e)
    assert all(sum(e[i][k] * m[k][j] for k in range(n)) == -(i == j) for i in range(n) for j in range(n))
    # the multiplicity of a new component is the sum over the blown-up centre
    assert g.m("8", "1") == g.m("7", "1")
    assert g.m("9", "1") == g.m("7", "1") + g.m("8", "1")


def test_euler_chi_counts_arrows_not_marks():
    g = build_minimal("A3").with_arrow(3)
    assert [euler_chi(g, v) for v in g.vertex_ids] == [1, 0, 0]
    d = build_minimal("A3").with_mark(3)
    assert [euler_chi(d, v) for v in d.vertex_ids] == [1, 0, 1]


@pytest.mark.parametrize("name", ALL + ["D4"])
def test_automorphisms_match_brute_force(name):
    g = build_minimal(name)
    assert {a.mapping for a in automorphism_group(name)} == {a.mapping for a in brute_force_automorphisms(g)}


def test_d4_has_six_symmetries():
    assert len(automorphism_group("D4")) == 6


def test_canonical_key_sees_symmetry():
    a = apply_script(build_minimal("E6"), [FreePoint(1)]).with_arrow(7)
    b = apply_script(build_minimal("E6"), [FreePoint(6)]).with_arrow(7)
    c = apply_script(build_minimal("E6"), [FreePoint(2)]).with_arrow(7)
    assert isomorphic_up_to_symmetry(a, b, "E6")
    assert not isomorphic_up_to_symmetry(a, c)
    assert not isomorphic_up_to_symmetry(a, b, "E7")


def test_canonical_key_distinguishes_arrow_labels():
    g = build_minimal("A3")
    a = g.with_arrow(1).with_arrow(2)
    b = g.with_arrow(2).with_arrow(1)
    assert canonical_key(a) != canonical_key(b)


def test_doc_round_trip():
    g = apply_script(build_minimal("D5").with_arrow(4), [ArrowPoint("C1"), EdgePoint(4, 6)]).with_mark(2)
    h = parse_graph(render_graph(g))
    assert h == g
    assert graph_from_doc(graph_to_doc(g)).script == g.script


def test_doc_with_bad_edge():
    doc = graph_to_doc(build_minimal("A2"))
    doc["edges"].append(["1", "9"])
    with pytest.raises(GraphError):
        graph_from_doc(doc)


def test_m_entries_are_exact_fractions():
    g = build_minimal("E6")
    assert all(isinstance(x, Fraction) for row in m_matrix(g) for x in row)
