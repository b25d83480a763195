import re
from itertools import combinations
from math import comb, factorial

import pytest

from diagrams import family_ops
from diagrams.errors import InvalidIndexError, ScaleCapError, UnknownElementError, UnsupportedOperationError
from diagrams.generators import (
    W_NAME,
    BaseFamilyKind,
    base_family_manager,
    closure_set,
    default_universe,
    gen_base_family,
    gen_theorem_instance,
    row_col_set,
    x_names,
    y_names,
)
from diagrams.kernel import DiagramManager, count_sets, node_count, to_explicit
from diagrams.models import BLOWUP_KINDS, ExplicitFamily, OpKind


def generated(kind, m, k=None, l=None, over="x"):
    manager = base_family_manager(kind, m, over)
    return gen_base_family(manager, kind, m, k, l, over)


def enumerate_family(universe, predicate):
    """在全集的全部子集上直接枚举谓词"""
    sets = [combo for size in range(len(universe) + 1) for combo in combinations(universe, size)
            if predicate(set(combo))]
    return ExplicitFamily.from_name_sets(universe, sets)


def hidden_weighted(names):
    def predicate(s):
        return len(s) >= 1 and names[len(s) - 1] in s
    return predicate


def test_h3_example():
    assert to_explicit(generated(BaseFamilyKind.H, 3)).name_sets() == [
        ("y1",), ("y1", "y2"), ("y2", "y3"), ("y1", "y2", "y3"),
    ]


def test_p2_example():
    assert to_explicit(generated(BaseFamilyKind.P, 2)).name_sets() == [("y1", "y4"), ("y2", "y3")]


def test_c2_example():
    family = to_explicit(generated(BaseFamilyKind.C, 2))
    assert family.name_sets() == list(combinations(y_names(4), 2))


@pytest.mark.parametrize("m", range(1, 9))
def test_h_based_families_match_predicates(m):
    ys = y_names(m)
    h = hidden_weighted(ys)
    assert to_explicit(generated(BaseFamilyKind.H, m)) == enumerate_family(ys, h)
    assert to_explicit(generated(BaseFamilyKind.H_COMPLEMENT, m)) == enumerate_family(ys, lambda s: not h(s))
    for k in range(1, m + 1):
        e = lambda s, k=k: len(s) == k and f"y{k}" in s
        assert to_explicit(generated(BaseFamilyKind.E, m, k)) == enumerate_family(ys, e)
        assert to_explicit(generated(BaseFamilyKind.E_COMPLEMENT, m, k)) == enumerate_family(ys, lambda s: not e(s))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_permutation_families_match_predicates(m):
    ys = y_names(m * m)
    lines = [set(row_col_set(m, k)) for k in range(1, 2 * m + 1)]
    for k, line in enumerate(lines, start=1):
        assert to_explicit(generated(BaseFamilyKind.Q, m, k)) == enumerate_family(ys, lambda s: len(s & line) == 1)
        t = lambda s: len(s) == m and len(s & line) != 1
        assert to_explicit(generated(BaseFamilyKind.T, m, k)) == enumerate_family(ys, t)
    p = lambda s: all(len(s & line) == 1 for line in lines)
    assert to_explicit(generated(BaseFamilyKind.P, m)) == enumerate_family(ys, p)
    assert to_explicit(generated(BaseFamilyKind.C, m)) == enumerate_family(ys, lambda s: len(s) == m)


def test_powerset_and_singletons():
    assert count_sets(generated(BaseFamilyKind.POWERSET, 4)) == 16
    singletons = to_explicit(generated(BaseFamilyKind.SINGLETON_LIST, 3, over="y"))
    assert singletons.name_sets() == [("y1",), ("y2",), ("y3",)]


def test_row_col_sets():
    assert row_col_set(2, 1) == ["y1", "y2"]
    assert row_col_set(2, 2) == ["y3", "y4"]
    assert row_col_set(2, 3) == ["y1", "y3"]
    assert row_col_set(2, 4) == ["y2", "y4"]


def test_closure_set():
    assert closure_set(2, 1, 1) == ["x2", "x4", "y1", "y4"]


@pytest.mark.parametrize("m", range(1, 17))
def test_h_cardinality(m):
    assert count_sets(generated(BaseFamilyKind.H, m)) == 2 ** (m - 1)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow),
                               pytest.param(7, marks=pytest.mark.slow)])
def test_p_cardinality(m):
    assert count_sets(generated(BaseFamilyKind.P, m)) == factorial(m)


@pytest.mark.parametrize("m", range(1, 7))
def test_c_cardinality(m):
    assert count_sets(generated(BaseFamilyKind.C, m)) == comb(m * m, m)


def test_generators_follow_manager_order():
    ys = y_names(4)
    natural = to_explicit(generated(BaseFamilyKind.E, 4, 2))
    reversed_manager = DiagramManager(list(reversed(ys)))
    family = gen_base_family(reversed_manager, BaseFamilyKind.E, 4, 2)
    assert to_explicit(family).reindexed(ys) == natural


@pytest.mark.parametrize("kind, k", [
    (BaseFamilyKind.E, None),
    (BaseFamilyKind.E, 4),
    (BaseFamilyKind.Q, 0),
    (BaseFamilyKind.Q, 7),
    (BaseFamilyKind.T, 7),
    (BaseFamilyKind.S_ROW_COL, 7),
])
def test_invalid_indices(kind, k):
    with pytest.raises(InvalidIndexError):
        generated(kind, 3, k)


def test_invalid_closure_indices():
    with pytest.raises(InvalidIndexError):
        generated(BaseFamilyKind.R_CLOSURE, 2, 1)
    with pytest.raises(InvalidIndexError):
        generated(BaseFamilyKind.R_CLOSURE, 2, 3, 1)


def test_missing_elements():
    with pytest.raises(UnknownElementError):
        gen_base_family(DiagramManager(["y1", "y2"]), BaseFamilyKind.H, 3)


def test_default_universes():
    assert default_universe(BaseFamilyKind.H, 3) == ["y1", "y2", "y3"]
    assert default_universe(BaseFamilyKind.P, 2) == ["y1", "y2", "y3", "y4"]
    assert default_universe(BaseFamilyKind.R_CLOSURE, 2) == x_names(4) + y_names(4)


def test_join_instance_uses_whole_x():
    instance = gen_theorem_instance(OpKind.JOIN, 3)
    assert to_explicit(instance.g).name_sets() == [("x1", "x2", "x3")]
    assert instance.universe.elements == tuple(x_names(3) + y_names(3))


def test_quotient_instance_divisor():
    instance = gen_theorem_instance(OpKind.QUOTIENT, 3)
    assert to_explicit(instance.g).name_sets() == [("x1",), ("x2",), ("x3",)]


def test_hitting_instance_rows_and_columns():
    instance = gen_theorem_instance(OpKind.HITTING, 2)
    assert sorted(to_explicit(instance.f).name_sets()) == [
        ("y1", "y2"), ("y1", "y3"), ("y2", "y4"), ("y3", "y4"),
    ]
    assert instance.g is None


def test_extremal_instances_put_w_first():
    for op in (OpKind.MAXIMAL, OpKind.MINIMAL):
        instance = gen_theorem_instance(op, 2)
        assert instance.universe.elements[0] == W_NAME
        assert len(instance.universe) == 1 + 4 + 4


def test_meet_instance_expected_is_h():
    instance = gen_theorem_instance(OpKind.MEET, 4)
    assert instance.expected == gen_base_family(instance.manager, BaseFamilyKind.H, 4)


@pytest.mark.parametrize("op", BLOWUP_KINDS, ids=lambda op: op.value)
def test_instances_match_expected_outputs(op):
    instance = gen_theorem_instance(op, 2)
    output = family_ops.apply_operation(op, instance.f, instance.g)
    if instance.expected is not None:
        assert output == instance.expected


def test_unsupported_instances():
    with pytest.raises(UnsupportedOperationError):
        gen_theorem_instance(OpKind.UNION, 3)
    with pytest.raises(ScaleCapError):
        gen_theorem_instance(OpKind.JOIN, 1)


def _dot_cases():
    for m in range(1, 5):
        for kind in BaseFamilyKind:
            if kind in (BaseFamilyKind.E, BaseFamilyKind.E_COMPLEMENT):
                yield from ((kind, m, k, None) for k in range(1, m + 1))
            elif kind in (BaseFamilyKind.Q, BaseFamilyKind.T, BaseFamilyKind.S_ROW_COL):
                yield from ((kind, m, k, None) for k in range(1, 2 * m + 1))
            elif kind is BaseFamilyKind.R_CLOSURE:
                yield from ((kind, m, k, l) for k in range(1, m + 1) for l in range(1, m + 1))
            else:
                yield kind, m, None, None


DOT_NODE = re.compile(r'^\t\t"(\d+)" \[label="[^"\\]+", shape=(box|circle)\];$')
DOT_EDGE = re.compile(r'^\t"(\d+)" -> "(\d+)" \[style=(dashed|solid)\];$')
DOT_STRUCTURE = {'digraph "dd" {', "\t{", "\t\trank = same;", "\t}", "}"}


@pytest.mark.parametrize("kind, m, k, l", list(_dot_cases()))
def test_dot_export_is_well_formed(kind, m, k, l):
    family = generated(kind, m, k, l)
    lines = family.export_dot().splitlines()
    assert lines[0] == 'digraph "dd" {' and lines[-1] == "}"

    declared, edges, depth = set(), [], 0
    for line in lines:
        depth += line.count("{") - line.count("}")
        assert depth >= 0
        node = DOT_NODE.match(line)
        edge = DOT_EDGE.match(line)
        if node:
            assert node.group(1) not in declared
            declared.add(node.group(1))
        elif edge:
            edges.append(edge.groups())
        else:
            assert line in DOT_STRUCTURE, line
    assert depth == 0

    assert len(declared) == node_count(family)
    assert all(source in declared and target in declared for source, target, _ in edges)
    internal = {source for source, _, _ in edges}
    assert len(edges) == 2 * len(internal)
    assert {style for _, _, style in edges} <= {"dashed", "solid"}
