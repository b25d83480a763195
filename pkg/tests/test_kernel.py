from itertools import combinations

import pytest

from diagrams.errors import (
    CountOverflowError,
    EnumerationCapError,
    ManagerMismatchError,
    OrderingViolationError,
    OrderMismatchError,
    UnknownElementError,
)
from diagrams.kernel import (
    BOTTOM,
    TOP,
    DiagramManager,
    convert_semantics,
    count_sets,
    from_explicit,
    node_count,
    reachable_nodes,
    to_explicit,
)
from diagrams.models import ExplicitFamily, Semantics

from conftest import explicit


def test_zero_suppression_returns_lo():
    manager = DiagramManager(["a"])
    assert manager.make_node(0, TOP, BOTTOM) == TOP


def test_node_sharing():
    manager = DiagramManager(["a"])
    first = manager.make_node(0, BOTTOM, TOP)
    assert manager.make_node(0, BOTTOM, TOP) == first
    assert manager.stored_node_count() == 3


def test_bdd_redundant_test_elimination():
    manager = DiagramManager(["a", "b"], Semantics.BDD)
    x = manager.make_node(1, BOTTOM, TOP)
    assert manager.make_node(0, x, x) == x


def test_ordering_violation_rejected():
    manager = DiagramManager(["a", "b"])
    child = manager.make_node(0, BOTTOM, TOP)
    with pytest.raises(OrderingViolationError):
        manager.make_node(1, BOTTOM, child)
    with pytest.raises(OrderingViolationError):
        manager.make_node(2, BOTTOM, TOP)


def test_from_explicit_terminal_cases():
    manager = DiagramManager(["a", "b"])
    empty = from_explicit(manager, explicit("ab"))
    base = from_explicit(manager, explicit("ab", ""))
    assert empty.root == BOTTOM and node_count(empty) == 1
    assert base.root == TOP and node_count(base) == 1


def test_single_set_has_three_nodes():
    manager = DiagramManager(["a", "b"])
    assert node_count(from_explicit(manager, explicit("ab", "a"))) == 3


def test_canonical_regardless_of_input_order(abc):
    sets = [("a", "b"), ("c",), (), ("a", "c")]
    forward = ExplicitFamily.from_name_sets("abc", sets)
    backward = ExplicitFamily.from_name_sets("abc", list(reversed(sets)))
    assert from_explicit(abc, forward).root == from_explicit(abc, backward).root


def test_round_trip_keeps_root(build):
    family = build("ab", "bc", "", "c")
    assert from_explicit(family.manager, to_explicit(family)).root == family.root


def test_from_explicit_with_other_universe_order(abc):
    family = from_explicit(abc, explicit("cba", "cb"))
    assert to_explicit(family).name_sets() == [("b", "c")]


def test_unknown_element_only_when_used(abc):
    assert from_explicit(abc, explicit("abz", "ab")).to_explicit().cardinality == 1
    with pytest.raises(UnknownElementError):
        from_explicit(abc, explicit("abz", "az"))


def test_small_subsets_of_five_elements():
    names = ["x1", "x2", "x3", "x4", "x5"]
    manager = DiagramManager(names)
    sets = [combo for size in range(3) for combo in combinations(names, size)]
    family = from_explicit(manager, ExplicitFamily.from_name_sets(names, sets))
    result = to_explicit(family)
    assert result.cardinality == 16
    assert all(len(s) < 3 for s in result.name_sets())
    assert count_sets(family) == 16


def test_to_explicit_cap(build):
    with pytest.raises(EnumerationCapError):
        to_explicit(build("a", "b", "c"), cap=2)


def test_count_sets_overflow(monkeypatch, build):
    monkeypatch.setattr("diagrams.kernel.get_count_limit", lambda: 2)
    with pytest.raises(CountOverflowError):
        count_sets(build("a", "b", "c"))


def test_reducedness(build):
    family = build("a", "ab", "abc", "bc", "")
    manager = family.manager
    triples = set()
    for ref in reachable_nodes(family):
        if ref <= TOP:
            continue
        assert manager.hi(ref) != BOTTOM
        triples.add((manager.level(ref), manager.lo(ref), manager.hi(ref)))
    assert len(triples) == node_count(family) - 2


def test_convert_base_family_to_bdd():
    family = DiagramManager(["a"]).base()
    converted = convert_semantics(family, Semantics.BDD)
    assert converted.manager.semantics is Semantics.BDD
    assert node_count(converted) == 3
    assert to_explicit(converted) == to_explicit(family)


def test_convert_single_set_to_bdd():
    manager = DiagramManager(["a", "b"])
    converted = convert_semantics(from_explicit(manager, explicit("ab", "a")), Semantics.BDD)
    assert node_count(converted) == 4
    assert count_sets(converted) == 1


def test_convert_back_is_canonical(build):
    family = build("a", "bc", "")
    bdd = convert_semantics(family, Semantics.BDD)
    back = convert_semantics(bdd, family.manager)
    assert back == family


def test_convert_rejects_other_order(build):
    with pytest.raises(OrderMismatchError):
        convert_semantics(build("a"), DiagramManager(["c", "b", "a"], Semantics.BDD))


def test_bdd_counts_free_variables():
    manager = DiagramManager(["a", "b", "c"], Semantics.BDD)
    family = from_explicit(manager, explicit("abc", "", "a", "b", "ab"))
    assert count_sets(family) == 4
    assert to_explicit(family) == explicit("abc", "", "a", "b", "ab")


def test_families_from_different_managers(build):
    other = DiagramManager(["a", "b", "c"])
    with pytest.raises(ManagerMismatchError):
        build("a") | other.base()


def test_family_operators(build):
    f = build("a", "b")
    g = build("b", "c")
    assert f | g == build("a", "b", "c")
    assert f & g == build("b")
    assert f - g == build("a")
    assert f ^ g == build("a", "c")


def test_export_dot_terminal():
    text = DiagramManager(["a"]).base().export_dot()
    assert text.startswith('digraph "dd" {')
    assert 'label="⊤", shape=box' in text
    assert "->" not in text


def test_export_dot_single_set():
    manager = DiagramManager(["a", "b"])
    text = from_explicit(manager, explicit("ab", "a")).export_dot()
    assert text.count("style=solid") == 1
    assert text.count("style=dashed") == 1
    assert 'label="a", shape=circle' in text
