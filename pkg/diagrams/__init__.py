"""
决策图模块
"""

from .kernel import (
    BOTTOM,
    TOP,
    DiagramManager,
    Family,
    convert_semantics,
    count_sets,
    from_explicit,
    make_node,
    node_count,
    to_explicit,
)
from .models import ExplicitFamily, OpKind, Semantics, VariableOrder

__all__ = [
    'BOTTOM',
    'TOP',
    'DiagramManager',
    'Family',
    'ExplicitFamily',
    'OpKind',
    'Semantics',
    'VariableOrder',
    'convert_semantics',
    'count_sets',
    'from_explicit',
    'make_node',
    'node_count',
    'to_explicit',
]
