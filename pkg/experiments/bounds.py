"""
基础族的多项式大小上界检查

    Z(E_{m,k}) ≤ 2 + m·2^(⌈log₂(m+1)⌉+1)
    Z(Q_{m,k}) ≤ 2 + 4m²
    Z(C_m)     ≤ 2 + m²·2^⌈log₂(m+2)⌉
    Z(T_{m,k}) ≤ 2 + m²·2^(⌈log₂(m+2)⌉+2)

自然顺序之外再检查若干抽样顺序。
"""

from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import get_config
from diagrams.generators import BaseFamilyKind, default_universe, gen_base_family
from diagrams.kernel import DiagramManager, node_count
from experiments.models import BoundsReport, BoundViolation
from utils.logger import experiment_logger, log_exceptions

EXPERIMENT_CONFIG = get_config("experiment")


def ceil_log2(value: int) -> int:
    return (value - 1).bit_length()


def e_bound(m: int) -> int:
    return 2 + m * 2 ** (ceil_log2(m + 1) + 1)


def q_bound(m: int) -> int:
    return 2 + 4 * m * m


def c_bound(m: int) -> int:
    return 2 + m * m * 2 ** ceil_log2(m + 2)


def t_bound(m: int) -> int:
    return 2 + m * m * 2 ** (ceil_log2(m + 2) + 2)


def _cases(m_max: int) -> Iterator[Tuple[BaseFamilyKind, int, Optional[int], Callable[[int], int]]]:
    linear_cap = min(m_max, EXPERIMENT_CONFIG["bounds_e_max_m"])
    square_cap = min(m_max, EXPERIMENT_CONFIG["bounds_ct_max_m"])
    for m in range(1, linear_cap + 1):
        for k in range(1, m + 1):
            yield BaseFamilyKind.E, m, k, e_bound
    for m in range(1, square_cap + 1):
        for k in range(1, 2 * m + 1):
            yield BaseFamilyKind.Q, m, k, q_bound
        yield BaseFamilyKind.C, m, None, c_bound
        for k in range(1, 2 * m + 1):
            yield BaseFamilyKind.T, m, k, t_bound


@log_exceptions(experiment_logger)
def verify_bounds(m_max: int, samples: Optional[int] = None, seed: Optional[int] = None,
                  progress: bool = False) -> BoundsReport:
    """失败不抛异常，全部记录在报告里"""
    samples = EXPERIMENT_CONFIG["bounds_orders"] if samples is None else samples
    seed = EXPERIMENT_CONFIG["bounds_seed"] if seed is None else seed
    if m_max > EXPERIMENT_CONFIG["bounds_e_max_m"]:
        experiment_logger.warning(f"m_max={m_max} 超过上限，按 {EXPERIMENT_CONFIG['bounds_e_max_m']} 检查")

    rng = np.random.default_rng(seed)
    report = BoundsReport(m_max=m_max, orders_per_family=samples + 1)
    cases = list(_cases(m_max))
    for kind, m, k, bound_of in tqdm(cases, desc="bounds", disable=not progress):
        names = default_universe(kind, m)
        bound = bound_of(m)
        orders: List[Tuple[Optional[int], List[str]]] = [(None, names)]
        for order_id in range(samples):
            orders.append((order_id, [names[i] for i in rng.permutation(len(names))]))
        for order_id, order in orders:
            family = gen_base_family(DiagramManager(order), kind, m, k)
            size = node_count(family)
            report.checked += 1
            if size > bound:
                report.violations.append(BoundViolation(
                    family=kind.value, m=m, k=k, order_id=order_id, size=size, bound=bound,
                ))
    if report.violations:
        experiment_logger.warning(f"上界检查发现 {len(report.violations)} 处违反")
    return report
