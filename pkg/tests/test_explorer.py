import pytest

from wps import (
    AssumptionMode, EnumerationBudget, build_minimal, certify_uniqueness, enumerate_configurations,
    find_collisions, is_minimal,
)
from wps.graphs import canonical_key


@pytest.mark.parametrize("name,count", [("A1", 1), ("A4", 2), ("D4", 2), ("D5", 4), ("E6", 4), ("E7", 7), ("E8", 8)])
def test_depth_zero_counts(name, count):
    # one curvette on the minimal graph, one per orbit of vertices
    assert len(list(enumerate_configurations(name, EnumerationBudget(0), "curve"))) == count


def test_configurations_are_minimal_and_distinct():
    configs = [g for g, _ in enumerate_configurations("D4", EnumerationBudget(3, 2), "curve")]
    assert all(is_minimal(g) for g in configs)
    keys = [canonical_key(g) for g in configs]
    assert len(keys) == len(set(keys))


def test_branch_counts():
    one = list(enumerate_configurations("A3", EnumerationBudget(2, 1), "divisorial"))
    both = list(enumerate_configurations("A3", EnumerationBudget(2, 2), "divisorial"))
    two = list(enumerate_configurations("A3", EnumerationBudget(2, 2), "divisorial", branches=2))
    assert len(both) == len(one) + len(two)
    assert all(len(g.divisorial) == 2 for g, _ in two)


def test_mode_filters_configurations():
    b_none = EnumerationBudget(2, 1)
    b_mode = EnumerationBudget(2, 1, {"avoid-e7"})
    assert len(list(enumerate_configurations("E7", b_mode))) < len(list(enumerate_configurations("E7", b_none)))


def test_bad_budget():
    with pytest.raises(ValueError):
        EnumerationBudget(-1)
    with pytest.raises(ValueError):
        EnumerationBudget(1, 0)


def test_e7_collision_found():
    rep = find_collisions("E7", EnumerationBudget(2), "curve")
    assert len(rep) == 1
    _, members = rep.groups[0]
    assert len(members) == 2


def test_certificate_without_mode_fails_on_e7():
    cert = certify_uniqueness("E7", EnumerationBudget(3), "divisorial", AssumptionMode.NONE)
    assert not cert.passed
    cert = certify_uniqueness("E7", EnumerationBudget(3), "divisorial", "avoid-e7")
    assert cert.passed


def test_certificate_explains_table_rows():
    cert = certify_uniqueness("D5", EnumerationBudget(1, 2), "curve")
    assert cert.passed
    assert {e for e, _ in cert.explained} >= {"D5 {1,5}", "D5 {4,5}"}
