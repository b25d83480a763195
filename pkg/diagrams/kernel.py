"""
决策图内核
规范化、约简的节点存储（唯一表 + 运算缓存），支持 ZDD / BDD 两种语义：
节点创建与约简规则、显式族互转、节点数与集合数查询、语义转换
"""

from typing import Dict, Hashable, Iterable, List, Optional, Tuple, Union

from config.settings import get_count_limit, get_enumeration_cap
from diagrams.errors import (
    CountOverflowError,
    DiagramError,
    EnumerationCapError,
    ManagerMismatchError,
    OrderMismatchError,
    OrderingViolationError,
)
from diagrams.models import ExplicitFamily, Semantics, VariableOrder
from utils.logger import kernel_logger

NodeRef = int

# 保留句柄
BOTTOM: NodeRef = 0
TOP: NodeRef = 1


class DiagramManager:
    """决策图管理器：持有唯一表、变量顺序、运算缓存和语义标志

    一个管理器及其所有族同一时刻只能由一个线程使用，管理器之间互相独立。
    """

    def __init__(self, elements: Union[VariableOrder, Iterable[str]],
                 semantics: Union[Semantics, str] = Semantics.ZDD):
        if isinstance(elements, VariableOrder):
            self.order = elements
        else:
            self.order = VariableOrder(elements=tuple(elements))
        self.semantics = Semantics(semantics)

        n = len(self.order)
        # 终端节点的层级取 n，比任何变量层级都大
        self._levels: List[int] = [n, n]
        self._lo: List[NodeRef] = [BOTTOM, TOP]
        self._hi: List[NodeRef] = [BOTTOM, TOP]
        self._unique: Dict[Tuple[int, NodeRef, NodeRef], NodeRef] = {}
        self._caches: Dict[Hashable, Dict] = {}
        kernel_logger.debug(f"创建管理器: semantics={self.semantics.value}, n={n}")

    def __repr__(self) -> str:
        return f"DiagramManager(semantics={self.semantics.value}, n={self.num_vars}, nodes={self.stored_node_count()})"

    @property
    def num_vars(self) -> int:
        return len(self.order)

    @property
    def terminal_level(self) -> int:
        return len(self.order)

    @property
    def is_zdd(self) -> bool:
        return self.semantics is Semantics.ZDD

    def stored_node_count(self) -> int:
        """存储中的节点总数（含两个终端）"""
        return len(self._levels)

    def level(self, ref: NodeRef) -> int:
        return self._levels[ref]

    def lo(self, ref: NodeRef) -> NodeRef:
        return self._lo[ref]

    def hi(self, ref: NodeRef) -> NodeRef:
        return self._hi[ref]

    def is_valid(self, ref: NodeRef) -> bool:
        return isinstance(ref, int) and 0 <= ref < len(self._levels)

    def make_node(self, level: int, lo: NodeRef, hi: NodeRef) -> NodeRef:
        """返回 (level, lo, hi) 的规范节点，按语义执行约简规则"""
        if not (self.is_valid(lo) and self.is_valid(hi)):
            raise DiagramError(f"无效的子节点句柄: lo={lo}, hi={hi}")
        if not 0 <= level < self.terminal_level:
            raise OrderingViolationError(f"层级越界: {level}")
        if level >= self._levels[lo] or level >= self._levels[hi]:
            raise OrderingViolationError(
                f"违反有序性: level={level}, level(lo)={self._levels[lo]}, level(hi)={self._levels[hi]}"
            )

        if self.semantics is Semantics.ZDD:
            if hi == BOTTOM:
                return lo
        elif lo == hi:
            return lo

        key = (level, lo, hi)
        ref = self._unique.get(key)
        if ref is None:
            ref = len(self._levels)
            self._levels.append(level)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = ref
        return ref

    def family(self, ref: NodeRef) -> "Family":
        return Family(self, ref)

    def empty(self) -> "Family":
        """空族 {}（⊥）"""
        return Family(self, BOTTOM)

    def base(self) -> "Family":
        """只含空集的族 {∅}（⊤ 在 ZDD 语义下）"""
        if self.is_zdd:
            return Family(self, TOP)
        return self.single_set(())

    def single_set(self, names: Iterable[str]) -> "Family":
        """只含一个集合的族 {S}"""
        levels = set(self.order.levels_of(names))
        ref = TOP
        if self.is_zdd:
            for level in sorted(levels, reverse=True):
                ref = self.make_node(level, BOTTOM, ref)
        else:
            for level in reversed(range(self.num_vars)):
                if level in levels:
                    ref = self.make_node(level, BOTTOM, ref)
                else:
                    ref = self.make_node(level, ref, BOTTOM)
        return Family(self, ref)

    def cache(self, tag: Hashable) -> Dict:
        """按运算标签取运算缓存，跨顶层调用保留"""
        table = self._caches.get(tag)
        if table is None:
            table = {}
            self._caches[tag] = table
        return table

    def clear_caches(self):
        """清空全部运算缓存（唯一表不受影响）"""
        entries = sum(len(table) for table in self._caches.values())
        self._caches.clear()
        kernel_logger.debug(f"清空运算缓存: {entries} 条")

    def check_same(self, *families: "Family"):
        """确认所有族都属于本管理器"""
        for family in families:
            if family.manager is not self:
                raise ManagerMismatchError("参与运算的族不属于同一个管理器")


class Family:
    """族句柄：管理器 + 根节点"""

    __slots__ = ("manager", "root")

    def __init__(self, manager: DiagramManager, root: NodeRef):
        if not manager.is_valid(root):
            raise DiagramError(f"无效的根句柄: {root}")
        self.manager = manager
        self.root = root

    def __eq__(self, other) -> bool:
        return isinstance(other, Family) and self.manager is other.manager and self.root == other.root

    def __hash__(self) -> int:
        return hash((id(self.manager), self.root))

    def __repr__(self) -> str:
        return f"Family(root={self.root}, semantics={self.manager.semantics.value})"

    def size(self) -> int:
        return node_count(self)

    def count(self) -> int:
        return count_sets(self)

    def to_explicit(self, cap: Optional[int] = None) -> ExplicitFamily:
        return to_explicit(self, cap)

    def export_dot(self, name: str = "dd") -> str:
        from diagrams.dot_export import export_dot
        return export_dot(self, name)

    def __or__(self, other: "Family") -> "Family":
        from diagrams.family_ops import union
        return union(self, other)

    def __and__(self, other: "Family") -> "Family":
        from diagrams.family_ops import intersection
        return intersection(self, other)

    def __sub__(self, other: "Family") -> "Family":
        from diagrams.family_ops import difference
        return difference(self, other)

    def __xor__(self, other: "Family") -> "Family":
        from diagrams.family_ops import symmetric_difference
        return symmetric_difference(self, other)


def make_node(manager: DiagramManager, level: int, lo: NodeRef, hi: NodeRef) -> NodeRef:
    return manager.make_node(level, lo, hi)


def reachable_nodes(family: Family) -> List[NodeRef]:
    """从根可达的全部节点（含终端）"""
    manager = family.manager
    seen = {family.root}
    stack = [family.root]
    while stack:
        ref = stack.pop()
        if ref > TOP:
            for child in (manager.lo(ref), manager.hi(ref)):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
    return list(seen)


def node_count(family: Family) -> int:
    """从根可达的不同节点数，终端计入"""
    return len(reachable_nodes(family))


def count_sets(family: Family) -> int:
    """精确集合数 |F|：一次自底向上遍历，溢出定宽计数器时报错"""
    manager = family.manager
    limit = get_count_limit()
    nodes = sorted((ref for ref in reachable_nodes(family) if ref > TOP),
                   key=manager.level, reverse=True)
    counts = {BOTTOM: 0, TOP: 1}

    if manager.is_zdd:
        for ref in nodes:
            value = counts[manager.lo(ref)] + counts[manager.hi(ref)]
            if value > limit:
                raise CountOverflowError(f"集合数超出 {limit}")
            counts[ref] = value
        return counts[family.root]

    # BDD 语义：跳过的变量是自由变量
    for ref in nodes:
        level = manager.level(ref)
        value = 0
        for child in (manager.lo(ref), manager.hi(ref)):
            value += counts[child] << (manager.level(child) - level - 1)
        if value > limit:
            raise CountOverflowError(f"集合数超出 {limit}")
        counts[ref] = value
    total = counts[family.root] << manager.level(family.root)
    if total > limit:
        raise CountOverflowError(f"集合数超出 {limit}")
    return total


def from_explicit(manager: DiagramManager, explicit: ExplicitFamily) -> Family:
    """由显式族自底向上构造约简决策图，结果与集合的输入顺序无关"""
    order = manager.order
    remap: List[Optional[int]] = [order.level_of(name) if name in order else None
                                  for name in explicit.universe]
    masks = set()
    for bits in explicit.sets:
        mask = 0
        position = 0
        while bits:
            if bits & 1:
                level = remap[position]
                if level is None:
                    # 触发 UnknownElementError
                    order.level_of(explicit.universe[position])
                mask |= 1 << level
            bits >>= 1
            position += 1
        masks.add(mask)

    n = manager.num_vars
    zdd = manager.is_zdd

    def build(group: List[int], level: int) -> NodeRef:
        if not group:
            return BOTTOM
        if level == n or (zdd and group == [0]):
            return TOP
        bit = 1 << level
        lo_group = [mask for mask in group if not mask & bit]
        hi_group = [mask ^ bit for mask in group if mask & bit]
        return manager.make_node(level, build(lo_group, level + 1), build(hi_group, level + 1))

    return Family(manager, build(sorted(masks), 0))


def to_explicit(family: Family, cap: Optional[int] = None) -> ExplicitFamily:
    """枚举根所表示的全部集合；集合数超过 cap（默认 2^20）时报错"""
    cap = get_enumeration_cap() if cap is None else cap
    total = count_sets(family)
    if total > cap:
        raise EnumerationCapError(f"集合数 {total} 超过枚举上限 {cap}")

    manager = family.manager
    n = manager.num_vars
    found = set()

    if manager.is_zdd:
        stack = [(family.root, 0)]
        while stack:
            ref, mask = stack.pop()
            if ref == TOP:
                found.add(mask)
            elif ref != BOTTOM:
                stack.append((manager.lo(ref), mask))
                stack.append((manager.hi(ref), mask | 1 << manager.level(ref)))
    else:
        stack = [(family.root, 0, 0)]
        while stack:
            ref, cursor, mask = stack.pop()
            if ref == BOTTOM:
                continue
            if cursor == n:
                found.add(mask)
            elif cursor < manager.level(ref):
                stack.append((ref, cursor + 1, mask))
                stack.append((ref, cursor + 1, mask | 1 << cursor))
            else:
                stack.append((manager.lo(ref), cursor + 1, mask))
                stack.append((manager.hi(ref), cursor + 1, mask | 1 << cursor))

    return ExplicitFamily(universe=manager.order.elements, sets=frozenset(found))


def convert_semantics(family: Family,
                      target: Union[DiagramManager, Semantics, str]) -> Family:
    """在 ZDD 与 BDD 语义间转换：逐层插入/抑制被跳过变量的节点，不做枚举"""
    source = family.manager
    if not isinstance(target, DiagramManager):
        target = DiagramManager(source.order, target)
    if target.order.elements != source.order.elements:
        raise OrderMismatchError("源与目标管理器的变量顺序不一致")

    n = source.num_vars
    memo: Dict[Tuple[NodeRef, int], NodeRef] = {}

    if source.semantics is target.semantics:
        def copy(ref: NodeRef) -> NodeRef:
            if ref <= TOP:
                return ref
            key = (ref, 0)
            if key not in memo:
                memo[key] = target.make_node(source.level(ref), copy(source.lo(ref)), copy(source.hi(ref)))
            return memo[key]
        return Family(target, copy(family.root))

    zdd_to_bdd = source.is_zdd

    def convert(ref: NodeRef, level: int) -> NodeRef:
        if ref == BOTTOM:
            return BOTTOM
        if level == n:
            return TOP
        key = (ref, level)
        result = memo.get(key)
        if result is not None:
            return result
        if source.level(ref) > level:
            below = convert(ref, level + 1)
            if zdd_to_bdd:
                # ZDD 中被跳过的元素一定不在集合里
                result = target.make_node(level, below, BOTTOM)
            else:
                # BDD 中被跳过的变量取值任意
                result = target.make_node(level, below, below)
        else:
            result = target.make_node(level, convert(source.lo(ref), level + 1),
                                      convert(source.hi(ref), level + 1))
        memo[key] = result
        return result

    return Family(target, convert(family.root, 0))
