"""
变量顺序研究：把运算输出经显式枚举在其他顺序下重建，记录每个顺序下的大小
"""

from typing import List, Optional, Sequence

from config.settings import get_config
from diagrams import family_ops
from diagrams.errors import DiagramError, ScaleCapError
from diagrams.generators import gen_theorem_instance
from diagrams.kernel import DiagramManager, from_explicit, node_count, to_explicit
from diagrams.models import OpKind
from diagrams.oracle import iter_order_sizes
from experiments.blowup import validate_blowup_range
from experiments.models import OrderStudyRecord, OrderStudySummary
from utils.data_utils import describe_sizes
from utils.logger import experiment_logger, log_exceptions

EXPERIMENT_CONFIG = get_config("experiment")


@log_exceptions(experiment_logger)
def run_order_study(op: OpKind, m: int, mode: str = "sampled", samples: int = 20,
                    seed: int = 0) -> List[OrderStudyRecord]:
    """穷举模式要求全集不超过 8 个元素；抽样模式在相同种子下结果完全相同"""
    op = validate_blowup_range(op, m, m)
    instance = gen_theorem_instance(op, m)
    n = len(instance.universe)
    if mode == "exhaustive" and n > EXPERIMENT_CONFIG["exhaustive_max_universe"]:
        raise ScaleCapError(
            f"穷举顺序要求全集不超过 {EXPERIMENT_CONFIG['exhaustive_max_universe']} 个元素，"
            f"{op.value} m={m} 的全集有 {n} 个"
        )

    output = family_ops.apply_operation(op, instance.f, instance.g)
    explicit = to_explicit(output)
    records = [
        OrderStudyRecord(op=op, m=m, order_id=order_id, order=order, z_out=size)
        for order_id, (order, size) in enumerate(iter_order_sizes(explicit, mode, samples, seed))
    ]
    experiment_logger.info(f"顺序研究: {op.value} m={m} mode={mode}, {len(records)} 个顺序")
    return records


def natural_order_size(op: OpKind, m: int) -> int:
    """自然顺序下的输出大小"""
    instance = gen_theorem_instance(op, m)
    return node_count(family_ops.apply_operation(op, instance.f, instance.g))


def rebuild_size(op: OpKind, m: int, order: Sequence[str]) -> int:
    """在给定顺序下重建输出并返回大小，用于复核记录"""
    instance = gen_theorem_instance(op, m)
    explicit = to_explicit(family_ops.apply_operation(op, instance.f, instance.g))
    return node_count(from_explicit(DiagramManager(order), explicit))


def summarize_order_study(records: List[OrderStudyRecord], mode: str,
                          natural_size: Optional[int] = None) -> OrderStudySummary:
    if not records:
        raise DiagramError("没有顺序研究记录")
    first = records[0]
    stats = describe_sizes([record.z_out for record in records])
    best = min(records, key=lambda record: (record.z_out, record.order_id))
    if natural_size is None:
        natural_size = natural_order_size(first.op, first.m)
    return OrderStudySummary(
        op=first.op,
        m=first.m,
        mode=mode,
        orders=len(records),
        natural_size=natural_size,
        min_size=stats["min"],
        max_size=stats["max"],
        median_size=stats["median"],
        best_order=best.order,
    )
