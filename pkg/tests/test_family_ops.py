import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagrams import family_ops
from diagrams.errors import (
    ConditioningError,
    DiagramError,
    EmptyDivisorError,
    SemanticsError,
)
from diagrams.kernel import BOTTOM, DiagramManager, from_explicit, node_count, reachable_nodes, to_explicit
from diagrams.models import BOOLEAN_KINDS, EXTREMAL_KINDS, OpKind, Semantics
from diagrams.oracle import oracle_apply

from conftest import explicit, operands


def run(kind, f, g=None, extra=None):
    manager = DiagramManager(f.universe)
    zf = from_explicit(manager, f)
    zg = from_explicit(manager, g) if g is not None else None
    return to_explicit(family_ops.apply_operation(kind, zf, zg, extra))


def built(*explicit_families):
    manager = DiagramManager(explicit_families[0].universe)
    return [from_explicit(manager, family) for family in explicit_families]


def test_union_examples(build):
    assert family_ops.union(build("a"), build()) == build("a")
    assert family_ops.union(build("a", "ab"), build("ab", "c")) == build("a", "ab", "c")
    f = build("a", "bc")
    assert family_ops.symmetric_difference(f, f) == build()


def test_join_examples(build):
    f = build("a", "bc")
    assert family_ops.join(f, build("")) == f
    assert family_ops.join(f, build()) == build()
    assert family_ops.join(build("a", "b"), build("b", "c")) == build("ab", "ac", "b", "bc")
    assert family_ops.disjoint_join(build("a", "b"), build("b")) == build("ab")
    assert family_ops.joint_join(build("ab"), build("bc")) == build("abc")


def test_meet_examples(build):
    assert family_ops.meet(build(), build("a")) == build()
    assert family_ops.meet(build("a", "bc"), build("")) == build("")
    assert family_ops.meet(build("ab"), build("bc")) == build("b")


def test_delta_examples(build):
    assert family_ops.delta(build("a"), build("a")) == build("")
    assert family_ops.delta(build("a", "b"), build("b")) == build("ab", "")


def test_quotient_and_remainder_examples(build):
    assert family_ops.quotient(build("ab", "b"), build("a")) == build("b")
    assert family_ops.quotient(build("a", "b"), build("a", "b")) == build("")
    assert family_ops.remainder(build("a", "c"), build("")) == build()
    assert family_ops.remainder(build("ab", "b", "c"), build("a")) == build("b", "c")


def test_empty_divisor(build):
    with pytest.raises(EmptyDivisorError):
        family_ops.quotient(build("a"), build())
    with pytest.raises(EmptyDivisorError):
        family_ops.remainder(build("a"), build())


def test_filter_examples(build):
    f = build("a", "ab")
    assert family_ops.restrict(f, build("")) == f
    assert family_ops.permit(f, build()) == build()
    assert family_ops.permit(f, build("ac")) == build("a")
    assert family_ops.restrict(f, build("b")) == build("ab")
    assert family_ops.nonsuperset(f, build("b")) == build("a")
    assert family_ops.nonsubset(f, build("ac")) == build("ab")


def test_extremal_examples(build):
    assert family_ops.maximal(build("")) == build("")
    assert family_ops.minimal(build()) == build()
    assert family_ops.maximal(build("a", "ab", "c")) == build("ab", "c")
    assert family_ops.minimal(build("a", "ab", "c")) == build("a", "c")


def test_hitting_examples(build):
    assert family_ops.minimal_hitting_sets(build()) == build("")
    assert family_ops.minimal_hitting_sets(build("", "ab")) == build()
    assert family_ops.minimal_hitting_sets(build("ab", "bc")) == build("b", "ac")


def test_closure_examples(build):
    assert family_ops.closure(build()) == build()
    assert family_ops.closure(build("a")) == build("a")
    assert family_ops.closure(build("ab", "bc")) == build("ab", "bc", "b")


def test_condition_examples(build):
    f = build("a", "ab")
    assert family_ops.condition(f, ["a"], []) == build("", "b")
    assert family_ops.condition(f, ["a"], ["b"]) == build("")


def test_condition_rejects_overlap(build):
    with pytest.raises(ConditioningError):
        family_ops.condition(build("a"), ["a"], ["a", "b"])


def test_powerset(abc):
    family = family_ops.powerset(abc, ["a", "c"])
    assert to_explicit(family) == explicit("abc", "", "a", "c", "ac")


def test_bdd_manager_rejected():
    manager = DiagramManager(["a"], Semantics.BDD)
    with pytest.raises(SemanticsError):
        family_ops.union(manager.base(), manager.empty())


def test_apply_operation_arity(build):
    with pytest.raises(DiagramError):
        family_ops.apply_operation(OpKind.JOIN, build("a"))
    with pytest.raises(DiagramError):
        family_ops.apply_operation(OpKind.MAXIMAL, build("a"), build("b"))
    with pytest.raises(ConditioningError):
        family_ops.apply_operation(OpKind.CONDITION, build("a"))


def test_group_dispatch_checks_kind(build):
    assert family_ops.boolean_combine(OpKind.UNION, build("a"), build("b")) == build("a", "b")
    with pytest.raises(DiagramError):
        family_ops.join_family(OpKind.MEET, build("a"), build("b"))
    with pytest.raises(DiagramError):
        family_ops.extremal(OpKind.HITTING, build("a"))
    with pytest.raises(DiagramError):
        family_ops.containment_filter(OpKind.JOIN, build("a"), build("b"))


def test_cache_survives_and_clears(build):
    f, g = build("a", "b"), build("b", "c")
    first = family_ops.join(f, g)
    f.manager.clear_caches()
    assert family_ops.join(f, g) == first


BINARY_KINDS = [kind for kind in OpKind if kind.is_binary and kind not in (OpKind.QUOTIENT, OpKind.REMAINDER)]


@pytest.mark.parametrize("kind", BINARY_KINDS, ids=lambda kind: kind.value)
@settings(max_examples=150, deadline=None)
@given(pair=operands(min_sizes=(0, 0)))
def test_binary_matches_oracle(kind, pair):
    f, g = pair
    assert run(kind, f, g) == oracle_apply(kind, f, g)


@pytest.mark.parametrize("kind", [OpKind.QUOTIENT, OpKind.REMAINDER], ids=lambda kind: kind.value)
@settings(max_examples=150, deadline=None)
@given(pair=operands(min_sizes=(0, 1)))
def test_division_matches_oracle(kind, pair):
    f, g = pair
    assert run(kind, f, g) == oracle_apply(kind, f, g)


@pytest.mark.parametrize("kind", sorted(kind for kind in OpKind if kind.is_unary), ids=lambda kind: kind.value)
@settings(max_examples=150, deadline=None)
@given(single=operands())
def test_unary_matches_oracle(kind, single):
    (f,) = single
    assert run(kind, f) == oracle_apply(kind, f)


@settings(max_examples=200, deadline=None)
@given(single=operands(), data=st.data())
def test_condition_matches_oracle(single, data):
    (f,) = single
    labels = data.draw(st.lists(st.integers(0, 2), min_size=len(f.universe), max_size=len(f.universe)))
    y = [name for name, label in zip(f.universe, labels) if label == 1]
    y_prime = [name for name, label in zip(f.universe, labels) if label == 2]
    assert run(OpKind.CONDITION, f, extra=(y, y_prime)) == oracle_apply(OpKind.CONDITION, f, extra=(y, y_prime))

    (zf,) = built(f)
    conditioned = family_ops.condition(zf, y, y_prime)
    assert node_count(conditioned) <= node_count(zf) * (len(f.universe) + 2)


@settings(max_examples=60, deadline=None)
@given(pair=operands(min_sizes=(0, 0)))
def test_filter_complement_identities(pair):
    zf, zg = built(*pair)
    assert family_ops.nonsubset(zf, zg) == family_ops.difference(zf, family_ops.permit(zf, zg))
    assert family_ops.nonsuperset(zf, zg) == family_ops.difference(zf, family_ops.restrict(zf, zg))


@settings(max_examples=60, deadline=None)
@given(single=operands())
def test_hitting_sets_stay_in_support(single):
    (f,) = single
    support = 0
    for bits in f.sets:
        support |= bits
    result = run(OpKind.HITTING, f)
    assert all(bits & ~support == 0 for bits in result.sets)


@settings(max_examples=80, deadline=None)
@given(triple=operands(min_sizes=(0, 0, 0)))
def test_join_algebra(triple):
    f, g, h = built(*triple)
    assert family_ops.join(f, g) == family_ops.join(g, f)
    assert family_ops.join(family_ops.join(f, g), h) == family_ops.join(f, family_ops.join(g, h))
    assert family_ops.join(family_ops.union(f, g), h) == \
        family_ops.union(family_ops.join(f, h), family_ops.join(g, h))
    assert family_ops.join(f, f.manager.base()) == f
    assert family_ops.join(f, f.manager.empty()) == f.manager.empty()


def _padded_size(family):
    """节点数，⊥ 不可达时补上 ⊥"""
    nodes = reachable_nodes(family)
    return len(nodes) + (BOTTOM not in nodes)


@pytest.mark.parametrize("kind", sorted(BOOLEAN_KINDS), ids=lambda kind: kind.value)
@settings(max_examples=60, deadline=None)
@given(pair=operands(min_sizes=(0, 0)))
def test_boolean_size_within_product(kind, pair):
    f, g = built(*pair)
    result = family_ops.boolean_combine(kind, f, g)
    assert node_count(result) <= _padded_size(f) * _padded_size(g)


def test_boolean_size_needs_bottom_padding(build):
    # 不含 ⊥ 的 {∅} 只有一个节点，但并运算要复制 f 的 lo 链
    f, g = build("b", "ab"), build("")
    assert (node_count(f), node_count(g)) == (4, 1)
    assert node_count(family_ops.union(f, g)) == 5
    assert node_count(family_ops.union(f, g)) <= _padded_size(f) * _padded_size(g)


@pytest.mark.parametrize("kind", sorted(EXTREMAL_KINDS), ids=lambda kind: kind.value)
@settings(max_examples=60, deadline=None)
@given(single=operands())
def test_extremal_is_idempotent_subfamily(kind, single):
    (f,) = built(*single)
    once = family_ops.extremal(kind, f)
    assert family_ops.extremal(kind, once) == once
    assert family_ops.difference(once, f) == f.manager.empty()


@settings(max_examples=60, deadline=None)
@given(single=operands())
def test_closure_is_idempotent(single):
    (f,) = built(*single)
    once = family_ops.closure(f)
    assert family_ops.closure(once) == once
    assert family_ops.difference(f, once) == f.manager.empty()


@settings(max_examples=80, deadline=None)
@given(pair=operands(min_sizes=(0, 1)))
def test_quotient_members_divide(pair):
    f, g = pair
    zf, zg = built(f, g)
    quotient = to_explicit(family_ops.quotient(zf, zg))
    for q in quotient.sets:
        for d in g.sets:
            assert q & d == 0
            assert q | d in f.sets


@settings(max_examples=80, deadline=None)
@given(pair=operands(min_sizes=(0, 1)))
def test_remainder_is_difference_of_rejoined_quotient(pair):
    f, g = built(*pair)
    rejoined = family_ops.join(g, family_ops.quotient(f, g))
    assert family_ops.remainder(f, g) == family_ops.difference(f, rejoined)


def test_apply_operation_routes_every_group(build):
    f, g = build("a", "ab"), build("b")
    assert family_ops.apply_operation(OpKind.RESTRICT, f, g) == family_ops.containment_filter(OpKind.RESTRICT, f, g)
    assert family_ops.apply_operation(OpKind.NONSUPERSET, f, g) == build("a")
    assert family_ops.apply_operation(OpKind.JOINT_JOIN, f, g) == build("ab")
    assert family_ops.apply_operation(OpKind.DIFFERENCE, f, g) == f
    assert family_ops.apply_operation(OpKind.MINIMAL, f) == build("a")
