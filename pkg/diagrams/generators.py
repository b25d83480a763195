"""
具名集合族与爆炸实例的构造器

基础族（计数型、恰好一个型）按层直接构造节点；
H、P 以及各个实例的 F / G 通过公开的族运算组合出来。
"""

from enum import Enum
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from diagrams import family_ops
from diagrams.errors import InvalidIndexError, ScaleCapError, UnsupportedOperationError
from diagrams.kernel import BOTTOM, TOP, DiagramManager, Family, NodeRef
from diagrams.models import (
    BLOWUP_KINDS,
    H_BASED_KINDS,
    OpKind,
    VariableOrder,
)
from utils.logger import get_logger

generator_logger = get_logger("Generators")

W_NAME = "w"


class BaseFamilyKind(str, Enum):
    """基础族种类"""
    E = "E"
    E_COMPLEMENT = "E_complement"
    H = "H"
    H_COMPLEMENT = "H_complement"
    Q = "Q"
    P = "P"
    C = "C"
    T = "T"
    POWERSET = "powerset"
    SINGLETON_LIST = "singleton_list"
    S_ROW_COL = "S_row_col"
    R_CLOSURE = "R_closure"


# |Y| = m 的族
_LINEAR_KINDS = {BaseFamilyKind.E, BaseFamilyKind.E_COMPLEMENT, BaseFamilyKind.H, BaseFamilyKind.H_COMPLEMENT}


class TheoremInstance(BaseModel):
    """一个爆炸实例：输入族、变量顺序与已证明的输出"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    op: OpKind
    m: int
    f: Family
    g: Optional[Family] = None
    universe: VariableOrder
    expected: Optional[Family] = None

    @property
    def manager(self) -> DiagramManager:
        return self.f.manager


def x_names(count: int) -> List[str]:
    return [f"x{i}" for i in range(1, count + 1)]


def y_names(count: int) -> List[str]:
    return [f"y{i}" for i in range(1, count + 1)]


def row_col_indices(m: int, k: int) -> List[int]:
    """S_k 的 y 下标：k ≤ m 为第 k 行，k = m + j 为第 j 列"""
    if not 1 <= k <= 2 * m:
        raise InvalidIndexError(f"S_k 要求 1 ≤ k ≤ {2 * m}，当前 k={k}")
    if k <= m:
        return [m * (k - 1) + j for j in range(1, m + 1)]
    column = k - m
    return [m * i + column for i in range(m)]


def row_col_set(m: int, k: int) -> List[str]:
    return [f"y{i}" for i in row_col_indices(m, k)]


def closure_set(m: int, k: int, l: int) -> List[str]:
    """R_{k,l} = (X∖{x_k, x_{m+l}}) ∪ (Y∖S_k∖S_{m+l}) ∪ {y_{m(k-1)+l}}，|X| = 2m"""
    if not (1 <= k <= m and 1 <= l <= m):
        raise InvalidIndexError(f"R_{{k,l}} 要求 1 ≤ k, l ≤ {m}，当前 k={k}, l={l}")
    xs = [name for name in x_names(2 * m) if name not in (f"x{k}", f"x{m + l}")]
    removed = set(row_col_indices(m, k)) | set(row_col_indices(m, m + l))
    ys = [i for i in range(1, m * m + 1) if i not in removed]
    ys.append(m * (k - 1) + l)
    return xs + [f"y{i}" for i in sorted(ys)]


def default_universe(kind: BaseFamilyKind, m: int, over: str = "x") -> List[str]:
    """基础族的自然全集"""
    kind = BaseFamilyKind(kind)
    if kind in _LINEAR_KINDS:
        return y_names(m)
    if kind in (BaseFamilyKind.POWERSET, BaseFamilyKind.SINGLETON_LIST):
        return x_names(m) if over == "x" else y_names(m)
    if kind is BaseFamilyKind.R_CLOSURE:
        return x_names(2 * m) + y_names(m * m)
    return y_names(m * m)


def build_automaton(manager: DiagramManager, names: Sequence[str], start: Hashable,
                    step: Callable[[Hashable, str, bool], Optional[Hashable]],
                    accept: Callable[[Hashable], bool]) -> Family:
    """按层构造：沿管理器顺序扫描 names，状态为 None 表示死状态（⊥）

    names 之外的元素一律不出现在集合中，因此适用于任意变量顺序。
    """
    ordered = sorted(set(names), key=manager.order.level_of)
    levels = [manager.order.level_of(name) for name in ordered]
    memo: Dict[Tuple[int, Hashable], NodeRef] = {}

    def build(index: int, state: Optional[Hashable]) -> NodeRef:
        if state is None:
            return BOTTOM
        if index == len(ordered):
            return TOP if accept(state) else BOTTOM
        key = (index, state)
        ref = memo.get(key)
        if ref is None:
            name = ordered[index]
            lo = build(index + 1, step(state, name, False))
            hi = build(index + 1, step(state, name, True))
            ref = manager.make_node(levels[index], lo, hi)
            memo[key] = ref
        return ref

    return Family(manager, build(0, start))


def _check_k(kind: BaseFamilyKind, k: Optional[int], upper: int) -> int:
    if k is None or not 1 <= k <= upper:
        raise InvalidIndexError(f"{kind.value} 要求 1 ≤ k ≤ {upper}，当前 k={k}")
    return k


def _cardinality_family(manager: DiagramManager, names: Sequence[str], size: int,
                        marked: Sequence[str] = (), marked_rule: str = "any") -> Family:
    """|S| = size 的族；marked_rule 约束 S 与 marked 的交：
    contains（含 marked 中唯一元素）/ not_one（交的大小不为 1）/ any"""
    marked = set(marked)

    def step(state, name, take):
        count, hit = state
        if take:
            count += 1
            if count > size:
                return None
            if name in marked:
                hit = min(hit + 1, 2)
        return count, hit

    def accept(state):
        count, hit = state
        if count != size:
            return False
        if marked_rule == "contains":
            return hit >= 1
        if marked_rule == "not_one":
            return hit != 1
        return True

    return build_automaton(manager, names, (0, 0), step, accept)


def _exactly_one_family(manager: DiagramManager, names: Sequence[str], marked: Sequence[str]) -> Family:
    """与 marked 恰好交于一个元素的 names 的子集族"""
    marked = set(marked)

    def step(state, name, take):
        if take and name in marked:
            return None if state else 1
        return state

    return build_automaton(manager, names, 0, step, lambda state: state == 1)


def gen_base_family(manager: DiagramManager, kind: BaseFamilyKind, m: int, k: Optional[int] = None,
                    l: Optional[int] = None, over: str = "x") -> Family:
    """构造基础族；管理器的全集必须包含所需元素"""
    kind = BaseFamilyKind(kind)
    if m < 1:
        raise InvalidIndexError(f"m 必须 ≥ 1，当前 m={m}")

    if kind is BaseFamilyKind.E:
        k = _check_k(kind, k, m)
        return _cardinality_family(manager, y_names(m), k, [f"y{k}"], "contains")
    if kind is BaseFamilyKind.E_COMPLEMENT:
        k = _check_k(kind, k, m)
        full = family_ops.powerset(manager, y_names(m))
        return family_ops.difference(full, gen_base_family(manager, BaseFamilyKind.E, m, k))
    if kind is BaseFamilyKind.H:
        result = manager.empty()
        for index in range(1, m + 1):
            result = family_ops.union(result, gen_base_family(manager, BaseFamilyKind.E, m, index))
        return result
    if kind is BaseFamilyKind.H_COMPLEMENT:
        full = family_ops.powerset(manager, y_names(m))
        return family_ops.difference(full, gen_base_family(manager, BaseFamilyKind.H, m))
    if kind is BaseFamilyKind.Q:
        k = _check_k(kind, k, 2 * m)
        return _exactly_one_family(manager, y_names(m * m), row_col_set(m, k))
    if kind is BaseFamilyKind.P:
        result = gen_base_family(manager, BaseFamilyKind.Q, m, 1)
        for index in range(2, 2 * m + 1):
            result = family_ops.intersection(result, gen_base_family(manager, BaseFamilyKind.Q, m, index))
        return result
    if kind is BaseFamilyKind.C:
        return _cardinality_family(manager, y_names(m * m), m)
    if kind is BaseFamilyKind.T:
        k = _check_k(kind, k, 2 * m)
        return _cardinality_family(manager, y_names(m * m), m, row_col_set(m, k), "not_one")
    if kind is BaseFamilyKind.POWERSET:
        return family_ops.powerset(manager, default_universe(kind, m, over))
    if kind is BaseFamilyKind.SINGLETON_LIST:
        names = default_universe(kind, m, over)
        return _exactly_one_family(manager, names, names)
    if kind is BaseFamilyKind.S_ROW_COL:
        k = _check_k(kind, k, 2 * m)
        return manager.single_set(row_col_set(m, k))
    if l is None:
        raise InvalidIndexError("R_closure 需要 k 和 l")
    return manager.single_set(closure_set(m, k or 0, l))


def base_family_manager(kind: BaseFamilyKind, m: int, over: str = "x") -> DiagramManager:
    """按自然全集新建管理器"""
    return DiagramManager(default_universe(kind, m, over))


def _union_all(manager: DiagramManager, families: Sequence[Family]) -> Family:
    result = manager.empty()
    for family in families:
        result = family_ops.union(result, family)
    return result


def _restrict_family_g(manager: DiagramManager, m: int) -> Family:
    """⋃_{k=1}^{2m} ({x_k} ⊔ T_{m,k})"""
    return _union_all(manager, [
        family_ops.join(manager.single_set([f"x{k}"]), gen_base_family(manager, BaseFamilyKind.T, m, k))
        for k in range(1, 2 * m + 1)
    ])


def gen_theorem_instance(op: OpKind, m: int) -> TheoremInstance:
    """按自然顺序构造某个运算的爆炸实例 (F_m, G_m) 及已证明的输出"""
    op = OpKind(op)
    if op not in BLOWUP_KINDS:
        raise UnsupportedOperationError(f"{op.value} 没有爆炸实例")
    if m < 2:
        raise ScaleCapError(f"爆炸实例要求 m ≥ 2，当前 m={m}")

    if op in H_BASED_KINDS:
        instance = _h_based_instance(op, m)
    else:
        instance = _perm_based_instance(op, m)
    generator_logger.debug(f"构造实例: op={op.value}, m={m}, n={len(instance.universe)}")
    return instance


def _h_based_instance(op: OpKind, m: int) -> TheoremInstance:
    xs, ys = x_names(m), y_names(m)
    manager = DiagramManager(xs + ys)
    component = BaseFamilyKind.E_COMPLEMENT if op in (OpKind.QUOTIENT, OpKind.REMAINDER) else BaseFamilyKind.E
    f = _union_all(manager, [
        family_ops.join(manager.single_set([f"x{k}"]), gen_base_family(manager, component, m, k))
        for k in range(1, m + 1)
    ])

    whole_x = manager.single_set(xs)
    expected = None
    if op in (OpKind.JOIN, OpKind.JOINT_JOIN):
        g = whole_x
    elif op is OpKind.DISJOINT_JOIN:
        g = _union_all(manager, [manager.single_set([x for x in xs if x != f"x{k}"]) for k in range(1, m + 1)])
    elif op is OpKind.MEET:
        g = manager.single_set(ys)
    elif op is OpKind.DELTA:
        g = family_ops.powerset(manager, xs)
    else:
        g = gen_base_family(manager, BaseFamilyKind.SINGLETON_LIST, m)

    if op in (OpKind.JOIN, OpKind.JOINT_JOIN, OpKind.DISJOINT_JOIN):
        expected = family_ops.join(whole_x, gen_base_family(manager, BaseFamilyKind.H, m))
    elif op is OpKind.MEET:
        expected = gen_base_family(manager, BaseFamilyKind.H, m)
    elif op is OpKind.DELTA:
        expected = family_ops.join(g, gen_base_family(manager, BaseFamilyKind.H, m))
    elif op is OpKind.QUOTIENT:
        expected = gen_base_family(manager, BaseFamilyKind.H_COMPLEMENT, m)

    return TheoremInstance(op=op, m=m, f=f, g=g, universe=manager.order, expected=expected)


def _perm_based_instance(op: OpKind, m: int) -> TheoremInstance:
    xs, ys = x_names(2 * m), y_names(m * m)
    prefix = [W_NAME] if op in (OpKind.MAXIMAL, OpKind.MINIMAL) else []
    manager = DiagramManager(prefix + xs + ys)

    if op is OpKind.HITTING:
        f = _union_all(manager, [gen_base_family(manager, BaseFamilyKind.S_ROW_COL, m, k)
                                 for k in range(1, 2 * m + 1)])
        # m ≥ 3 时还有非置换矩阵的极小覆盖，只有 m = 2 时输出恰为 P_m
        expected = gen_base_family(manager, BaseFamilyKind.P, m) if m == 2 else None
        return TheoremInstance(op=op, m=m, f=f, universe=manager.order, expected=expected)
    if op is OpKind.CLOSURE:
        f = _union_all(manager, [gen_base_family(manager, BaseFamilyKind.R_CLOSURE, m, k, l)
                                 for k in range(1, m + 1) for l in range(1, m + 1)])
        return TheoremInstance(op=op, m=m, f=f, universe=manager.order)

    c = gen_base_family(manager, BaseFamilyKind.C, m)
    p = gen_base_family(manager, BaseFamilyKind.P, m)
    g = _restrict_family_g(manager, m)
    whole_x = manager.single_set(xs)

    if op in (OpKind.PERMIT, OpKind.NONSUBSET):
        expected = family_ops.difference(c, p) if op is OpKind.PERMIT else p
        return TheoremInstance(op=op, m=m, f=c, g=g, universe=manager.order, expected=expected)
    if op in (OpKind.RESTRICT, OpKind.NONSUPERSET):
        f = family_ops.join(whole_x, c)
        inner = family_ops.difference(c, p) if op is OpKind.RESTRICT else p
        expected = family_ops.join(whole_x, inner)
        return TheoremInstance(op=op, m=m, f=f, g=g, universe=manager.order, expected=expected)

    w = manager.single_set([W_NAME])
    if op is OpKind.MAXIMAL:
        marked_g = family_ops.join(w, g)
        f = family_ops.union(c, marked_g)
        expected = family_ops.union(p, marked_g)
    else:
        w_x = manager.single_set([W_NAME] + xs)
        f = family_ops.union(g, family_ops.join(w_x, c))
        expected = family_ops.union(g, family_ops.join(w_x, p))
    return TheoremInstance(op=op, m=m, f=f, universe=manager.order, expected=expected)
