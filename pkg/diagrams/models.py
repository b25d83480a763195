"""
决策图与集合族的数据模型定义
使用Pydantic v2语法
"""

from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator

from diagrams.errors import UnknownElementError


class Semantics(str, Enum):
    """决策图语义"""
    ZDD = "zdd"
    BDD = "bdd"


class OpKind(str, Enum):
    """集合族代数运算种类"""
    UNION = "union"
    INTERSECTION = "intersection"
    DIFFERENCE = "difference"
    SYMMETRIC_DIFFERENCE = "symmetric_difference"
    JOIN = "join"
    DISJOINT_JOIN = "disjoint_join"
    JOINT_JOIN = "joint_join"
    MEET = "meet"
    DELTA = "delta"
    QUOTIENT = "quotient"
    REMAINDER = "remainder"
    RESTRICT = "restrict"
    PERMIT = "permit"
    NONSUPERSET = "nonsuperset"
    NONSUBSET = "nonsubset"
    MAXIMAL = "maximal"
    MINIMAL = "minimal"
    HITTING = "hitting"
    CLOSURE = "closure"
    CONDITION = "condition"

    @property
    def is_unary(self) -> bool:
        return self in UNARY_KINDS

    @property
    def is_binary(self) -> bool:
        return self not in UNARY_KINDS and self is not OpKind.CONDITION


BOOLEAN_KINDS = frozenset({
    OpKind.UNION, OpKind.INTERSECTION, OpKind.DIFFERENCE, OpKind.SYMMETRIC_DIFFERENCE,
})
JOIN_KINDS = frozenset({OpKind.JOIN, OpKind.DISJOINT_JOIN, OpKind.JOINT_JOIN})
FILTER_KINDS = frozenset({OpKind.RESTRICT, OpKind.PERMIT, OpKind.NONSUPERSET, OpKind.NONSUBSET})
EXTREMAL_KINDS = frozenset({OpKind.MAXIMAL, OpKind.MINIMAL})
UNARY_KINDS = frozenset({OpKind.MAXIMAL, OpKind.MINIMAL, OpKind.HITTING, OpKind.CLOSURE})

# 基于隐藏加权位函数 H_m 的爆炸实例
H_BASED_KINDS = (
    OpKind.JOIN, OpKind.DISJOINT_JOIN, OpKind.JOINT_JOIN, OpKind.MEET, OpKind.DELTA,
    OpKind.QUOTIENT, OpKind.REMAINDER,
)
# 基于置换函数 P_m 的爆炸实例
PERM_BASED_KINDS = (
    OpKind.RESTRICT, OpKind.PERMIT, OpKind.NONSUPERSET, OpKind.NONSUBSET,
    OpKind.MAXIMAL, OpKind.MINIMAL, OpKind.HITTING, OpKind.CLOSURE,
)
BLOWUP_KINDS = H_BASED_KINDS + PERM_BASED_KINDS

_FORBIDDEN_NAME_CHARS = set(",:{} \t\r\n")


def _check_element_names(names: Iterable[str]) -> Tuple[str, ...]:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError(f"元素名重复: {names}")
    for name in names:
        if not name or _FORBIDDEN_NAME_CHARS & set(name):
            raise ValueError(f"非法元素名: {name!r}")
    return names


class VariableOrder(BaseModel):
    """变量顺序：第 0 层是最先分支的元素"""
    model_config = ConfigDict(frozen=True)

    elements: Tuple[str, ...] = Field(default_factory=tuple)
    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @field_validator("elements")
    @classmethod
    def _validate_elements(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        return _check_element_names(value)

    def model_post_init(self, __context) -> None:
        self._index = {name: level for level, name in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def level_of(self, name: str) -> int:
        """元素名 -> 层级"""
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElementError(f"未知元素: {name}") from None

    def name_of(self, level: int) -> str:
        """层级 -> 元素名"""
        return self.elements[level]

    def levels_of(self, names: Iterable[str]) -> List[int]:
        return [self.level_of(name) for name in names]


class ExplicitFamily(BaseModel):
    """显式集合族：sets 中每个整数是 universe 位置上的位集"""
    model_config = ConfigDict(frozen=True)

    universe: Tuple[str, ...] = Field(default_factory=tuple)
    sets: FrozenSet[int] = Field(default_factory=frozenset)

    @field_validator("universe")
    @classmethod
    def _validate_universe(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        return _check_element_names(value)

    @field_validator("sets")
    @classmethod
    def _validate_sets(cls, value: FrozenSet[int], info) -> FrozenSet[int]:
        universe = info.data.get("universe")
        if universe is None:
            return value
        limit = 1 << len(universe)
        for bits in value:
            if bits < 0 or bits >= limit:
                raise ValueError(f"位集 {bits} 超出全集范围 (n={len(universe)})")
        return value

    @classmethod
    def from_name_sets(cls, universe: Iterable[str], sets: Iterable[Iterable[str]]) -> "ExplicitFamily":
        """由元素名集合构造"""
        universe = tuple(universe)
        position = {name: i for i, name in enumerate(universe)}
        masks = set()
        for member in sets:
            mask = 0
            for name in member:
                if name not in position:
                    raise UnknownElementError(f"未知元素: {name}")
                mask |= 1 << position[name]
            masks.add(mask)
        return cls(universe=universe, sets=frozenset(masks))

    @property
    def cardinality(self) -> int:
        return len(self.sets)

    def names_of(self, mask: int) -> Tuple[str, ...]:
        return tuple(name for i, name in enumerate(self.universe) if mask >> i & 1)

    def sorted_masks(self) -> List[int]:
        """确定性顺序：先按基数，再按位置序列"""
        return sorted(self.sets, key=lambda bits: (bin(bits).count("1"), self._positions(bits)))

    def name_sets(self) -> List[Tuple[str, ...]]:
        return [self.names_of(bits) for bits in self.sorted_masks()]

    def reindexed(self, universe: Iterable[str]) -> "ExplicitFamily":
        """换一个全集排列表示同一个族（新全集必须包含全部用到的元素）"""
        universe = tuple(universe)
        target = {name: i for i, name in enumerate(universe)}
        remap = []
        for name in self.universe:
            remap.append(target.get(name))
        masks = set()
        for bits in self.sets:
            mask = 0
            for i, new_pos in enumerate(remap):
                if bits >> i & 1:
                    if new_pos is None:
                        raise UnknownElementError(f"未知元素: {self.universe[i]}")
                    mask |= 1 << new_pos
            masks.add(mask)
        return ExplicitFamily(universe=universe, sets=frozenset(masks))

    @staticmethod
    def _positions(bits: int) -> Tuple[int, ...]:
        return tuple(i for i in range(bits.bit_length()) if bits >> i & 1)


class OrderSearchResult(BaseModel):
    """变量顺序搜索结果"""
    model_config = ConfigDict(frozen=True)

    best_order: Tuple[str, ...]
    best_size: int
    orders_examined: int
    mode: Literal["exhaustive", "sampled"]
