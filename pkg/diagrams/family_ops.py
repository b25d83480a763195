"""
集合族代数运算
在 ZDD 上做带缓存的递归：布尔组合、join 系列、meet、delta、商/余、
包含过滤、极大/极小、最小碰集、交闭包与条件化。
运算缓存按 (运算种类, 根句柄) 记在管理器里，跨顶层调用保留。
"""

from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from diagrams.errors import (
    ConditioningError,
    DiagramError,
    EmptyDivisorError,
    SemanticsError,
)
from diagrams.kernel import BOTTOM, TOP, DiagramManager, Family, NodeRef
from diagrams.models import (
    BOOLEAN_KINDS,
    EXTREMAL_KINDS,
    FILTER_KINDS,
    JOIN_KINDS,
    OpKind,
)
from utils.logger import ops_logger


def _prepare(*families: Family) -> DiagramManager:
    manager = families[0].manager
    manager.check_same(*families[1:])
    if not manager.is_zdd:
        raise SemanticsError("集合族代数运算要求 ZDD 语义的管理器")
    return manager


def _split(manager: DiagramManager, ref: NodeRef, level: int) -> Tuple[NodeRef, NodeRef]:
    """按 level 上的元素拆分：(不含该元素的部分, 含该元素的部分去掉该元素)"""
    if manager.level(ref) == level:
        return manager.lo(ref), manager.hi(ref)
    return ref, BOTTOM


def _has_empty(manager: DiagramManager, ref: NodeRef) -> bool:
    """∅ ∈ F 当且仅当 lo 链终止于 ⊤"""
    while ref > TOP:
        ref = manager.lo(ref)
    return ref == TOP


# ---------------------------------------------------------------- 布尔组合

def _union(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM:
        return g
    if g == BOTTOM or f == g:
        return f
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.UNION)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        result = manager.make_node(v, _union(manager, f0, g0), _union(manager, f1, g1))
        cache[(f, g)] = result
    return result


def _intersection(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == g:
        return f
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.INTERSECTION)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        result = manager.make_node(v, _intersection(manager, f0, g0), _intersection(manager, f1, g1))
        cache[(f, g)] = result
    return result


def _difference(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or f == g:
        return BOTTOM
    if g == BOTTOM:
        return f
    cache = manager.cache(OpKind.DIFFERENCE)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        result = manager.make_node(v, _difference(manager, f0, g0), _difference(manager, f1, g1))
        cache[(f, g)] = result
    return result


def _symmetric_difference(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM:
        return g
    if g == BOTTOM:
        return f
    if f == g:
        return BOTTOM
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.SYMMETRIC_DIFFERENCE)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        result = manager.make_node(v, _symmetric_difference(manager, f0, g0),
                                   _symmetric_difference(manager, f1, g1))
        cache[(f, g)] = result
    return result


# ---------------------------------------------------------------- join / meet / delta

def _join(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == TOP:
        return g
    if g == TOP:
        return f
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.JOIN)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        hi = _union(manager, _join(manager, f1, g1), _join(manager, f1, g0))
        hi = _union(manager, hi, _join(manager, f0, g1))
        result = manager.make_node(v, _join(manager, f0, g0), hi)
        cache[(f, g)] = result
    return result


def _disjoint_join(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == TOP:
        return g
    if g == TOP:
        return f
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.DISJOINT_JOIN)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        hi = _union(manager, _disjoint_join(manager, f1, g0), _disjoint_join(manager, f0, g1))
        result = manager.make_node(v, _disjoint_join(manager, f0, g0), hi)
        cache[(f, g)] = result
    return result


def _joint_join(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    # ∅ 与任何集合都不相交
    if f <= TOP or g <= TOP:
        return BOTTOM
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.JOINT_JOIN)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        hi = _union(manager, _join(manager, f1, g1), _joint_join(manager, f1, g0))
        hi = _union(manager, hi, _joint_join(manager, f0, g1))
        result = manager.make_node(v, _joint_join(manager, f0, g0), hi)
        cache[(f, g)] = result
    return result


def _meet(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == TOP or g == TOP:
        return TOP
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.MEET)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        lo = _union(manager, _meet(manager, f0, g0), _meet(manager, f0, g1))
        lo = _union(manager, lo, _meet(manager, f1, g0))
        result = manager.make_node(v, lo, _meet(manager, f1, g1))
        cache[(f, g)] = result
    return result


def _delta(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == TOP:
        return g
    if g == TOP:
        return f
    if f > g:
        f, g = g, f
    cache = manager.cache(OpKind.DELTA)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        lo = _union(manager, _delta(manager, f0, g0), _delta(manager, f1, g1))
        hi = _union(manager, _delta(manager, f1, g0), _delta(manager, f0, g1))
        result = manager.make_node(v, lo, hi)
        cache[(f, g)] = result
    return result


# ---------------------------------------------------------------- 商 / 余

def _onset(manager: DiagramManager, f: NodeRef, level: int) -> NodeRef:
    """含 level 元素的集合，去掉该元素"""
    top = manager.level(f)
    if top > level:
        return BOTTOM
    if top == level:
        return manager.hi(f)
    cache = manager.cache(("onset", level))
    result = cache.get(f)
    if result is None:
        result = manager.make_node(top, _onset(manager, manager.lo(f), level),
                                   _onset(manager, manager.hi(f), level))
        cache[f] = result
    return result


def _offset(manager: DiagramManager, f: NodeRef, level: int) -> NodeRef:
    """不含 level 元素的集合"""
    top = manager.level(f)
    if top > level:
        return f
    if top == level:
        return manager.lo(f)
    cache = manager.cache(("offset", level))
    result = cache.get(f)
    if result is None:
        result = manager.make_node(top, _offset(manager, manager.lo(f), level),
                                   _offset(manager, manager.hi(f), level))
        cache[f] = result
    return result


def _quotient(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    # 调用方保证 g 非空
    if g == TOP:
        return f
    if f <= TOP:
        return BOTTOM
    if f == g:
        return TOP
    cache = manager.cache(OpKind.QUOTIENT)
    result = cache.get((f, g))
    if result is None:
        v = manager.level(g)
        g0, g1 = manager.lo(g), manager.hi(g)
        result = _quotient(manager, _onset(manager, f, v), g1)
        if result != BOTTOM and g0 != BOTTOM:
            result = _intersection(manager, result, _quotient(manager, _offset(manager, f, v), g0))
        cache[(f, g)] = result
    return result


# ---------------------------------------------------------------- 包含过滤

def _restrict(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if _has_empty(manager, g):
        return f
    if f == TOP:
        return BOTTOM
    cache = manager.cache(OpKind.RESTRICT)
    result = cache.get((f, g))
    if result is None:
        lf, lg = manager.level(f), manager.level(g)
        if lg < lf:
            # F 中的集合都不含 lg 元素
            result = _restrict(manager, f, manager.lo(g))
        else:
            g0, g1 = _split(manager, g, lf)
            result = manager.make_node(lf, _restrict(manager, manager.lo(f), g0),
                                       _restrict(manager, manager.hi(f), _union(manager, g0, g1)))
        cache[(f, g)] = result
    return result


def _permit(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    if f == BOTTOM or g == BOTTOM:
        return BOTTOM
    if f == TOP:
        return TOP
    if g == TOP:
        return TOP if _has_empty(manager, f) else BOTTOM
    cache = manager.cache(OpKind.PERMIT)
    result = cache.get((f, g))
    if result is None:
        v = min(manager.level(f), manager.level(g))
        f0, f1 = _split(manager, f, v)
        g0, g1 = _split(manager, g, v)
        result = manager.make_node(v, _permit(manager, f0, _union(manager, g0, g1)),
                                   _permit(manager, f1, g1))
        cache[(f, g)] = result
    return result


def _nonsuperset(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    return _difference(manager, f, _restrict(manager, f, g))


def _nonsubset(manager: DiagramManager, f: NodeRef, g: NodeRef) -> NodeRef:
    return _difference(manager, f, _permit(manager, f, g))


# ---------------------------------------------------------------- 单目运算

def _maximal(manager: DiagramManager, f: NodeRef) -> NodeRef:
    if f <= TOP:
        return f
    cache = manager.cache(OpKind.MAXIMAL)
    result = cache.get(f)
    if result is None:
        lo, hi = manager.lo(f), manager.hi(f)
        result = manager.make_node(manager.level(f),
                                   _nonsubset(manager, _maximal(manager, lo), hi),
                                   _maximal(manager, hi))
        cache[f] = result
    return result


def _minimal(manager: DiagramManager, f: NodeRef) -> NodeRef:
    if f <= TOP:
        return f
    cache = manager.cache(OpKind.MINIMAL)
    result = cache.get(f)
    if result is None:
        lo, hi = manager.lo(f), manager.hi(f)
        result = manager.make_node(manager.level(f),
                                   _minimal(manager, lo),
                                   _nonsuperset(manager, _minimal(manager, hi), lo))
        cache[f] = result
    return result


def _hitting(manager: DiagramManager, f: NodeRef) -> NodeRef:
    if f == BOTTOM:
        return TOP
    if f == TOP:
        return BOTTOM
    cache = manager.cache(OpKind.HITTING)
    result = cache.get(f)
    if result is None:
        lo, hi = manager.lo(f), manager.hi(f)
        # 不含 v：必须碰到 lo 与 hi 中的全部集合
        without = _hitting(manager, _union(manager, lo, hi))
        # 含 v：其余部分只需碰到 lo，且去掉 v 后不能仍是碰集
        with_v = _nonsuperset(manager, _hitting(manager, lo), without)
        result = manager.make_node(manager.level(f), without, with_v)
        cache[f] = result
    return result


def _closure(manager: DiagramManager, f: NodeRef) -> NodeRef:
    cache = manager.cache(OpKind.CLOSURE)
    result = cache.get(f)
    if result is None:
        current = f
        rounds = 0
        while True:
            rounds += 1
            grown = _union(manager, current, _meet(manager, current, current))
            if grown == current:
                break
            current = grown
        ops_logger.debug(f"交闭包在 {rounds} 轮后到达不动点")
        cache[f] = current
        result = current
    return result


# ---------------------------------------------------------------- 公开接口

def union(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _union(manager, f.root, g.root))


def intersection(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _intersection(manager, f.root, g.root))


def difference(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _difference(manager, f.root, g.root))


def symmetric_difference(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _symmetric_difference(manager, f.root, g.root))


def join(f: Family, g: Family) -> Family:
    """{F∪G | F∈f, G∈g}"""
    manager = _prepare(f, g)
    return Family(manager, _join(manager, f.root, g.root))


def disjoint_join(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _disjoint_join(manager, f.root, g.root))


def joint_join(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _joint_join(manager, f.root, g.root))


def meet(f: Family, g: Family) -> Family:
    """{F∩G | F∈f, G∈g}"""
    manager = _prepare(f, g)
    return Family(manager, _meet(manager, f.root, g.root))


def delta(f: Family, g: Family) -> Family:
    """{F⊕G | F∈f, G∈g}"""
    manager = _prepare(f, g)
    return Family(manager, _delta(manager, f.root, g.root))


def quotient(f: Family, g: Family) -> Family:
    """{S | ∀G∈g: S∪G∈f 且 S∩G=∅}，除数为空族时报错"""
    manager = _prepare(f, g)
    if g.root == BOTTOM:
        raise EmptyDivisorError("除数不能是空族")
    return Family(manager, _quotient(manager, f.root, g.root))


def remainder(f: Family, g: Family) -> Family:
    """f ∖ (g ⊔ (f ÷ g))"""
    manager = _prepare(f, g)
    if g.root == BOTTOM:
        raise EmptyDivisorError("除数不能是空族")
    q = _quotient(manager, f.root, g.root)
    return Family(manager, _difference(manager, f.root, _join(manager, g.root, q)))


def restrict(f: Family, g: Family) -> Family:
    """f 中至少包含 g 的某个集合的那些集合"""
    manager = _prepare(f, g)
    return Family(manager, _restrict(manager, f.root, g.root))


def permit(f: Family, g: Family) -> Family:
    """f 中至少被 g 的某个集合包含的那些集合"""
    manager = _prepare(f, g)
    return Family(manager, _permit(manager, f.root, g.root))


def nonsuperset(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _nonsuperset(manager, f.root, g.root))


def nonsubset(f: Family, g: Family) -> Family:
    manager = _prepare(f, g)
    return Family(manager, _nonsubset(manager, f.root, g.root))


def maximal(f: Family) -> Family:
    manager = _prepare(f)
    return Family(manager, _maximal(manager, f.root))


def minimal(f: Family) -> Family:
    manager = _prepare(f)
    return Family(manager, _minimal(manager, f.root))


def minimal_hitting_sets(f: Family) -> Family:
    """与 f 的每个集合都相交的极小集合"""
    manager = _prepare(f)
    return Family(manager, _hitting(manager, f.root))


def closure(f: Family) -> Family:
    """包含 f 且对两两求交封闭的最小族（不含空子族的交）"""
    manager = _prepare(f)
    return Family(manager, _closure(manager, f.root))


def powerset(manager: DiagramManager, names: Iterable[str]) -> Family:
    """2^names：每层 lo = hi 的链"""
    if not manager.is_zdd:
        raise SemanticsError("powerset 要求 ZDD 语义的管理器")
    ref = TOP
    for level in sorted(set(manager.order.levels_of(names)), reverse=True):
        ref = manager.make_node(level, ref, ref)
    return Family(manager, ref)


def condition(f: Family, y: Iterable[str], y_prime: Iterable[str]) -> Family:
    """{S | S∪Y ∈ f，S 与 Y∪Y′ 不相交}

    先与过滤族 G（含全部 Y、不含任何 Y′）求交，再把 Y 层的节点重定向到 hi 子节点。
    """
    manager = _prepare(f)
    y, y_prime = set(y), set(y_prime)
    overlap = y & y_prime
    if overlap:
        raise ConditioningError(f"Y 与 Y′ 相交: {sorted(overlap)}")
    y_levels = set(manager.order.levels_of(y))
    excluded = set(manager.order.levels_of(y_prime))

    chain = TOP
    for level in reversed(range(manager.num_vars)):
        if level in y_levels:
            chain = manager.make_node(level, BOTTOM, chain)
        elif level not in excluded:
            chain = manager.make_node(level, chain, chain)
    filtered = _intersection(manager, f.root, chain)

    memo: Dict[NodeRef, NodeRef] = {}

    def eliminate(ref: NodeRef) -> NodeRef:
        if ref <= TOP:
            return ref
        result = memo.get(ref)
        if result is None:
            if manager.level(ref) in y_levels:
                result = eliminate(manager.hi(ref))
            else:
                result = manager.make_node(manager.level(ref), eliminate(manager.lo(ref)),
                                           eliminate(manager.hi(ref)))
            memo[ref] = result
        return result

    return Family(manager, eliminate(filtered))


_BINARY: Dict[OpKind, Callable[[Family, Family], Family]] = {
    OpKind.UNION: union,
    OpKind.INTERSECTION: intersection,
    OpKind.DIFFERENCE: difference,
    OpKind.SYMMETRIC_DIFFERENCE: symmetric_difference,
    OpKind.JOIN: join,
    OpKind.DISJOINT_JOIN: disjoint_join,
    OpKind.JOINT_JOIN: joint_join,
    OpKind.MEET: meet,
    OpKind.DELTA: delta,
    OpKind.QUOTIENT: quotient,
    OpKind.REMAINDER: remainder,
    OpKind.RESTRICT: restrict,
    OpKind.PERMIT: permit,
    OpKind.NONSUPERSET: nonsuperset,
    OpKind.NONSUBSET: nonsubset,
}

_UNARY: Dict[OpKind, Callable[[Family], Family]] = {
    OpKind.MAXIMAL: maximal,
    OpKind.MINIMAL: minimal,
    OpKind.HITTING: minimal_hitting_sets,
    OpKind.CLOSURE: closure,
}


def boolean_combine(kind: OpKind, f: Family, g: Family) -> Family:
    kind = OpKind(kind)
    if kind not in BOOLEAN_KINDS:
        raise DiagramError(f"不是布尔组合运算: {kind.value}")
    return _BINARY[kind](f, g)


def join_family(kind: OpKind, f: Family, g: Family) -> Family:
    kind = OpKind(kind)
    if kind not in JOIN_KINDS:
        raise DiagramError(f"不是 join 类运算: {kind.value}")
    return _BINARY[kind](f, g)


def containment_filter(kind: OpKind, f: Family, g: Family) -> Family:
    kind = OpKind(kind)
    if kind not in FILTER_KINDS:
        raise DiagramError(f"不是包含过滤运算: {kind.value}")
    return _BINARY[kind](f, g)


def extremal(kind: OpKind, f: Family) -> Family:
    kind = OpKind(kind)
    if kind not in EXTREMAL_KINDS:
        raise DiagramError(f"不是极值运算: {kind.value}")
    return _UNARY[kind](f)


_GROUPS = (
    (BOOLEAN_KINDS, boolean_combine),
    (JOIN_KINDS, join_family),
    (FILTER_KINDS, containment_filter),
)


def apply_operation(kind: OpKind, f: Family, g: Optional[Family] = None,
                    extra: Optional[Tuple[Sequence[str], Sequence[str]]] = None) -> Family:
    """按运算种类分派；二元运算需要 g，condition 需要 extra=(Y, Y′)"""
    kind = OpKind(kind)
    if kind is OpKind.CONDITION:
        if extra is None:
            raise ConditioningError("condition 需要提供 (Y, Y′)")
        y, y_prime = extra
        return condition(f, y, y_prime)
    if kind.is_unary:
        if g is not None:
            raise DiagramError(f"单目运算 {kind.value} 不接受第二个操作数")
        if kind in EXTREMAL_KINDS:
            return extremal(kind, f)
        return _UNARY[kind](f)
    if g is None:
        raise DiagramError(f"二元运算 {kind.value} 需要第二个操作数")
    for group, dispatch in _GROUPS:
        if kind in group:
            return dispatch(kind, f, g)
    return _BINARY[kind](f, g)
