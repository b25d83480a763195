"""
决策图相关的异常定义
所有领域错误都继承自 DiagramError(ValueError)
"""


class DiagramError(ValueError):
    """决策图错误基类"""


class OrderingViolationError(DiagramError):
    """节点违反有序性：层级必须严格位于两个子节点之上"""


class UnknownElementError(DiagramError):
    """元素不在变量顺序中"""


class ManagerMismatchError(DiagramError):
    """参与运算的族不属于同一个管理器"""


class OrderMismatchError(DiagramError):
    """两个管理器的变量顺序不一致"""


class SemanticsError(DiagramError):
    """当前语义不支持该运算"""


class EnumerationCapError(DiagramError):
    """显式枚举的集合数超过上限"""


class CountOverflowError(DiagramError):
    """集合计数超出定宽计数器范围"""


class EmptyDivisorError(DiagramError):
    """商/余运算的除数为空族"""


class ConditioningError(DiagramError):
    """条件化参数不合法"""


class UnsupportedOperationError(DiagramError):
    """该运算不支持当前用途"""


class ScaleCapError(DiagramError):
    """规模参数超出桌面级上限"""


class TextFormatError(DiagramError):
    """族文本格式解析失败"""


class InsufficientRangeError(DiagramError):
    """记录跨度不足以做增长判定"""


class IdentityMismatchError(DiagramError):
    """实验中证明过的恒等式不成立"""


class InvalidIndexError(DiagramError):
    """生成器参数 m / k / l 超出合法范围"""
