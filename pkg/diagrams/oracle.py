"""
暴力参照实现
直接按定义在显式位集上计算每个运算，作为所有测试的基准；
以及按穷举或抽样的变量顺序测量规范 ZDD 的大小。
"""

import itertools
from typing import Iterator, Optional, Sequence, Set, Tuple

import numpy as np

from config.settings import get_config
from diagrams.errors import (
    ConditioningError,
    DiagramError,
    EmptyDivisorError,
    ScaleCapError,
    UnknownElementError,
)
from diagrams.kernel import DiagramManager, from_explicit, node_count
from diagrams.models import ExplicitFamily, OpKind, OrderSearchResult
from utils.logger import oracle_logger

ORACLE_CONFIG = get_config("oracle")


def _check_universe_cap(n: int, kind: OpKind):
    if n > ORACLE_CONFIG["max_universe"]:
        raise ScaleCapError(f"{kind.value} 需要遍历 2^n 个子集，n={n} 超过上限 {ORACLE_CONFIG['max_universe']}")


def _maximal(family: Set[int]) -> Set[int]:
    return {a for a in family if not any(a != b and a & b == a for b in family)}


def _minimal(family: Set[int]) -> Set[int]:
    return {a for a in family if not any(a != b and a & b == b for b in family)}


def _closure(family: Set[int]) -> Set[int]:
    result = set(family)
    frontier = list(family)
    while frontier:
        found = set()
        for a in frontier:
            for b in result:
                c = a & b
                if c not in result:
                    found.add(c)
        result |= found
        frontier = list(found)
    return result


def _hitting(family: Set[int], n: int) -> Set[int]:
    members = list(family)

    def hits(s: int) -> bool:
        return all(s & member for member in members)

    result = set()
    for s in range(1 << n):
        if not hits(s):
            continue
        # 极小：去掉任一元素后都不再是碰集
        bits = [1 << i for i in range(n) if s >> i & 1]
        if all(not hits(s ^ bit) for bit in bits):
            result.add(s)
    return result


def _quotient(f: Set[int], g: Set[int], n: int) -> Set[int]:
    return {s for s in range(1 << n) if all(s & d == 0 and (s | d) in f for d in g)}


def _mask(universe: Sequence[str], names) -> int:
    position = {name: i for i, name in enumerate(universe)}
    mask = 0
    for name in names:
        if name not in position:
            raise UnknownElementError(f"未知元素: {name}")
        mask |= 1 << position[name]
    return mask


def oracle_apply(kind: OpKind, f: ExplicitFamily, g: Optional[ExplicitFamily] = None,
                 extra: Optional[Tuple[Sequence[str], Sequence[str]]] = None) -> ExplicitFamily:
    """按字面定义计算运算结果"""
    kind = OpKind(kind)
    universe = f.universe
    n = len(universe)
    a = set(f.sets)

    if kind is OpKind.CONDITION:
        if extra is None:
            raise ConditioningError("condition 需要提供 (Y, Y′)")
        y, y_prime = extra
        overlap = set(y) & set(y_prime)
        if overlap:
            raise ConditioningError(f"Y 与 Y′ 相交: {sorted(overlap)}")
        y_mask = _mask(universe, y)
        y_prime_mask = _mask(universe, y_prime)
        result = {s & ~y_mask for s in a if s & y_mask == y_mask and not s & y_prime_mask}
        return ExplicitFamily(universe=universe, sets=frozenset(result))

    if kind.is_unary:
        if g is not None:
            raise DiagramError(f"单目运算 {kind.value} 不接受第二个操作数")
        if kind is OpKind.MAXIMAL:
            result = _maximal(a)
        elif kind is OpKind.MINIMAL:
            result = _minimal(a)
        elif kind is OpKind.HITTING:
            _check_universe_cap(n, kind)
            result = _hitting(a, n)
        else:
            result = _closure(a)
        return ExplicitFamily(universe=universe, sets=frozenset(result))

    if g is None:
        raise DiagramError(f"二元运算 {kind.value} 需要第二个操作数")
    if g.universe != universe:
        if set(g.universe) != set(universe):
            raise DiagramError("两个显式族的全集不一致")
        g = g.reindexed(universe)
    b = set(g.sets)

    if kind is OpKind.UNION:
        result = a | b
    elif kind is OpKind.INTERSECTION:
        result = a & b
    elif kind is OpKind.DIFFERENCE:
        result = a - b
    elif kind is OpKind.SYMMETRIC_DIFFERENCE:
        result = a ^ b
    elif kind is OpKind.JOIN:
        result = {x | y for x in a for y in b}
    elif kind is OpKind.DISJOINT_JOIN:
        result = {x | y for x in a for y in b if not x & y}
    elif kind is OpKind.JOINT_JOIN:
        result = {x | y for x in a for y in b if x & y}
    elif kind is OpKind.MEET:
        result = {x & y for x in a for y in b}
    elif kind is OpKind.DELTA:
        result = {x ^ y for x in a for y in b}
    elif kind in (OpKind.QUOTIENT, OpKind.REMAINDER):
        if not b:
            raise EmptyDivisorError("除数不能是空族")
        _check_universe_cap(n, kind)
        q = _quotient(a, b, n)
        if kind is OpKind.QUOTIENT:
            result = q
        else:
            result = a - {x | y for x in b for y in q}
    elif kind is OpKind.RESTRICT:
        result = {x for x in a if any(y & x == y for y in b)}
    elif kind is OpKind.PERMIT:
        result = {x for x in a if any(x & y == x for y in b)}
    elif kind is OpKind.NONSUPERSET:
        result = {x for x in a if all(y & x != y for y in b)}
    else:
        result = {x for x in a if all(x & y != x for y in b)}
    return ExplicitFamily(universe=universe, sets=frozenset(result))


def iter_order_sizes(family: ExplicitFamily, mode: str = "exhaustive", samples: int = 20,
                     seed: int = 0) -> Iterator[Tuple[Tuple[str, ...], int]]:
    """逐个给出 (变量顺序, 该顺序下的规范 ZDD 节点数)，每个顺序用独立的临时管理器"""
    universe = family.universe
    n = len(universe)
    if mode == "exhaustive":
        if n > ORACLE_CONFIG["exhaustive_max_universe"]:
            raise ScaleCapError(f"穷举顺序要求 n ≤ {ORACLE_CONFIG['exhaustive_max_universe']}，当前 n={n}")
        orders = itertools.permutations(universe)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        orders = (tuple(universe[i] for i in rng.permutation(n)) for _ in range(samples))
    else:
        raise DiagramError(f"未知的搜索模式: {mode}")

    for order in orders:
        manager = DiagramManager(order)
        yield tuple(order), node_count(from_explicit(manager, family))


def min_size_over_orders(family: ExplicitFamily, mode: str = "exhaustive", sample_count: int = 20,
                         seed: int = 0) -> OrderSearchResult:
    """在穷举或抽样的变量顺序中找最小的 ZDD；相同大小时保留最先遇到的顺序"""
    best_order, best_size, examined = None, None, 0
    for order, size in iter_order_sizes(family, mode, sample_count, seed):
        examined += 1
        if best_size is None or size < best_size:
            best_order, best_size = order, size
    if best_order is None:
        raise DiagramError("没有检查任何变量顺序")

    recheck = node_count(from_explicit(DiagramManager(best_order), family))
    if recheck != best_size:
        raise DiagramError(f"最优顺序复核失败: {recheck} != {best_size}")
    oracle_logger.debug(f"顺序搜索完成: mode={mode}, examined={examined}, best={best_size}")
    return OrderSearchResult(best_order=best_order, best_size=best_size,
                             orders_examined=examined, mode=mode)
