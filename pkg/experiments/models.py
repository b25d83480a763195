"""
实验记录与报告的数据模型定义
使用Pydantic v2语法
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from diagrams.models import OpKind


class BlowupRecord(BaseModel):
    """一次爆炸测量"""
    model_config = ConfigDict(frozen=True)

    op: OpKind
    m: int
    z_f: int
    z_g: int = 0
    z_out: int
    count_out: int
    elapsed_ms: float = 0.0

    def to_row(self) -> Dict[str, object]:
        return {
            "op": self.op.value,
            "m": self.m,
            "z_f": self.z_f,
            "z_g": self.z_g,
            "z_out": self.z_out,
            "count_out": self.count_out,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


class GrowthVerdict(BaseModel):
    """一个运算的增长判定"""
    op: OpKind
    passed: bool
    m_values: List[int] = Field(default_factory=list)
    input_bounded: bool = True
    strictly_increasing: bool = True
    min_gain: Optional[float] = None
    reasons: List[str] = Field(default_factory=list)


class OrderStudyRecord(BaseModel):
    """某个变量顺序下输出族的大小"""
    model_config = ConfigDict(frozen=True)

    op: OpKind
    m: int
    order_id: int
    order: Tuple[str, ...]
    z_out: int


class OrderStudySummary(BaseModel):
    op: OpKind
    m: int
    mode: str
    orders: int
    natural_size: int
    min_size: int
    max_size: int
    median_size: float
    best_order: Tuple[str, ...]


class BoundViolation(BaseModel):
    """多项式上界检查的一条失败"""
    family: str
    m: int
    k: Optional[int] = None
    order_id: Optional[int] = None
    size: int
    bound: int


class BoundsReport(BaseModel):
    m_max: int
    checked: int = 0
    orders_per_family: int = 0
    violations: List[BoundViolation] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class SelftestCheck(BaseModel):
    """自检中的一项"""
    name: str
    passed: bool
    instances: int = 0
    elapsed_s: float = 0.0
    details: List[str] = Field(default_factory=list)


class SelftestReport(BaseModel):
    seed: int
    checks: List[SelftestCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
