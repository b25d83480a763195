import pytest
from hypothesis import strategies as st

from diagrams.kernel import DiagramManager, from_explicit
from diagrams.models import ExplicitFamily

UNIVERSE = tuple(f"e{i}" for i in range(8))


def explicit(universe, *sets) -> ExplicitFamily:
    """单字符元素的简写：explicit("abc", "ab", "") = {{a,b}, ∅}"""
    return ExplicitFamily.from_name_sets(tuple(universe), [tuple(s) for s in sets])


@st.composite
def operands(draw, min_sizes=(0,), max_n=len(UNIVERSE)):
    """同一个随机全集（1..max_n 个元素）上的若干随机族，min_sizes 给出每个族的最少集合数"""
    n = draw(st.integers(1, max_n))
    universe = UNIVERSE[:n]
    return [
        ExplicitFamily(universe=universe,
                       sets=draw(st.frozensets(st.integers(0, (1 << n) - 1), min_size=size, max_size=12)))
        for size in min_sizes
    ]


@pytest.fixture
def abc():
    return DiagramManager(["a", "b", "c"])


@pytest.fixture
def build(abc):
    """在 a<b<c 管理器上按简写构造族"""
    def _build(*sets):
        return from_explicit(abc, explicit("abc", *sets))
    return _build
