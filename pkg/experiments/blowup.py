"""
爆炸实验
对每个 m 构造实例、执行运算、测量大小并核对已证明的输出恒等式；
再根据一组记录判定输出大小是否呈指数增长而输入保持多项式大小。
"""

import time
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from config.settings import get_config
from diagrams import family_ops
from diagrams.errors import (
    IdentityMismatchError,
    InsufficientRangeError,
    ScaleCapError,
    UnsupportedOperationError,
)
from diagrams.generators import (
    W_NAME,
    BaseFamilyKind,
    TheoremInstance,
    gen_base_family,
    gen_theorem_instance,
    x_names,
)
from diagrams.kernel import Family, count_sets, from_explicit, node_count
from diagrams.models import BLOWUP_KINDS, H_BASED_KINDS, ExplicitFamily, OpKind
from experiments.base_experiment import BaseExperiment, ExperimentCell
from experiments.models import BlowupRecord, GrowthVerdict
from utils.data_utils import log2_gains, write_csv
from utils.logger import experiment_logger, log_exceptions

EXPERIMENT_CONFIG = get_config("experiment")

# 输出经条件化后应得到的基础族
_CONDITION_CHECKS = {
    OpKind.JOIN: ("x", "", "H"),
    OpKind.DISJOINT_JOIN: ("x", "", "H"),
    OpKind.JOINT_JOIN: ("x", "", "H"),
    OpKind.DELTA: ("x", "", "H"),
    OpKind.RESTRICT: ("x", "", "C-P"),
    OpKind.NONSUPERSET: ("x", "", "P"),
    OpKind.MAXIMAL: ("", "wx", "P"),
    OpKind.MINIMAL: ("wx", "", "P"),
}


def max_m_for(op: OpKind) -> int:
    return EXPERIMENT_CONFIG["h_based_max_m"] if op in H_BASED_KINDS else EXPERIMENT_CONFIG["perm_based_max_m"]


def _ensure(condition: bool, op: OpKind, m: int, what: str):
    if not condition:
        raise IdentityMismatchError(f"{op.value} m={m}: {what} 不成立")


def _hidden_weighted(bits: int) -> bool:
    size = bin(bits).count("1")
    return size >= 1 and bool(bits >> (size - 1) & 1)


def enumerate_h_based_output(op: OpKind, m: int) -> ExplicitFamily:
    """在 x1..xm, y1..ym 上直接枚举 H 系实例的输出（只适合小 m）"""
    universe = tuple(x_names(m)) + tuple(f"y{j}" for j in range(1, m + 1))
    whole_x = (1 << m) - 1
    ys = range(1 << m)
    if op in (OpKind.JOIN, OpKind.JOINT_JOIN, OpKind.DISJOINT_JOIN):
        sets = {whole_x | s << m for s in ys if _hidden_weighted(s)}
    elif op is OpKind.MEET:
        sets = {s << m for s in ys if _hidden_weighted(s)}
    elif op is OpKind.DELTA:
        sets = {xs | s << m for xs in range(1 << m) for s in ys if _hidden_weighted(s)}
    elif op is OpKind.QUOTIENT:
        sets = {s << m for s in ys if not _hidden_weighted(s)}
    elif op is OpKind.REMAINDER:
        sets = set()
        for k in range(1, m + 1):
            for s in ys:
                in_e = bin(s).count("1") == k and s >> (k - 1) & 1
                if not in_e and _hidden_weighted(s):
                    sets.add(1 << (k - 1) | s << m)
    else:
        raise UnsupportedOperationError(f"{op.value} 不是 H 系实例")
    return ExplicitFamily(universe=universe, sets=frozenset(sets))


def _condition_names(code: str, instance: TheoremInstance) -> List[str]:
    names = []
    if "w" in code:
        names.append(W_NAME)
    if "x" in code:
        names.extend(name for name in instance.universe.elements if name.startswith("x"))
    return names


def check_identities(instance: TheoremInstance, output: Family) -> List[str]:
    """核对实例输出满足的恒等式，返回通过的检查名；不成立时抛出 IdentityMismatchError"""
    op, m = instance.op, instance.m
    manager = instance.manager
    passed = []

    if instance.expected is not None:
        _ensure(output == instance.expected, op, m, "输出等于已证明的族")
        passed.append("expected")

    if op in H_BASED_KINDS and m <= EXPERIMENT_CONFIG["identity_enum_max_m"]:
        enumerated = from_explicit(manager, enumerate_h_based_output(op, m))
        _ensure(output == enumerated, op, m, "输出等于枚举结果")
        passed.append("enumerated")

    if op is OpKind.REMAINDER:
        h_complement = gen_base_family(manager, BaseFamilyKind.H_COMPLEMENT, m)
        composed = manager.empty()
        for k in range(1, m + 1):
            part = family_ops.difference(gen_base_family(manager, BaseFamilyKind.E_COMPLEMENT, m, k), h_complement)
            composed = family_ops.union(composed, family_ops.join(manager.single_set([f"x{k}"]), part))
        _ensure(output == composed, op, m, "余数等于 ⋃_k({x_k} ⊔ (E′_k ∖ H′))")
        passed.append("remainder")

    if op in (OpKind.HITTING, OpKind.CLOSURE):
        c = gen_base_family(manager, BaseFamilyKind.C, m)
        p = gen_base_family(manager, BaseFamilyKind.P, m)
        _ensure(family_ops.intersection(output, c) == p, op, m, "输出 ∩ C_m = P_m")
        passed.append("slice")

    if op in _CONDITION_CHECKS:
        y_code, y_prime_code, target = _CONDITION_CHECKS[op]
        conditioned = family_ops.condition(output, _condition_names(y_code, instance),
                                           _condition_names(y_prime_code, instance))
        if target == "H":
            wanted = gen_base_family(manager, BaseFamilyKind.H, m)
        elif target == "P":
            wanted = gen_base_family(manager, BaseFamilyKind.P, m)
        else:
            wanted = family_ops.difference(gen_base_family(manager, BaseFamilyKind.C, m),
                                           gen_base_family(manager, BaseFamilyKind.P, m))
        _ensure(conditioned == wanted, op, m, f"条件化后等于 {target}")
        passed.append("condition")

    return passed


def measure_blowup_cell(op: OpKind, m: int, check: bool = True) -> BlowupRecord:
    """单个 (op, m) 单元：自己的管理器、计时、核对恒等式"""
    instance = gen_theorem_instance(op, m)
    start_time = time.perf_counter()
    output = family_ops.apply_operation(op, instance.f, instance.g)
    elapsed_ms = (time.perf_counter() - start_time) * 1000.0

    record = BlowupRecord(
        op=op,
        m=m,
        z_f=node_count(instance.f),
        z_g=node_count(instance.g) if instance.g is not None else 0,
        z_out=node_count(output),
        count_out=count_sets(output),
        elapsed_ms=elapsed_ms,
    )
    if check:
        checks = check_identities(instance, output)
        experiment_logger.debug(f"{op.value} m={m} 恒等式通过: {checks}")
    return record


class BlowupExperiment(BaseExperiment):
    """一个运算在 m 区间上的爆炸测量"""

    def __init__(self, op: OpKind, m_min: int, m_max: int, max_workers: Optional[int] = None,
                 check: bool = True):
        super().__init__(f"blowup[{op.value}]", max_workers)
        self.op = op
        self.m_min = m_min
        self.m_max = m_max
        self.check = check

    def build_cells(self) -> List[ExperimentCell]:
        return [
            ExperimentCell(f"{self.op.value}@m={m}", measure_blowup_cell, (self.op, m, self.check))
            for m in range(self.m_min, self.m_max + 1)
        ]


def validate_blowup_range(op: OpKind, m_min: int, m_max: int) -> OpKind:
    op = OpKind(op)
    if op not in BLOWUP_KINDS:
        raise UnsupportedOperationError(f"{op.value} 不是爆炸实验运算")
    cap = max_m_for(op)
    if m_min < EXPERIMENT_CONFIG["min_m"] or m_max > cap or m_min > m_max:
        raise ScaleCapError(f"{op.value} 的 m 范围必须在 [{EXPERIMENT_CONFIG['min_m']}, {cap}] 内，当前 [{m_min}, {m_max}]")
    return op


@log_exceptions(experiment_logger)
def run_blowup(op: OpKind, m_min: int, m_max: int, csv_path: Optional[Union[str, Path]] = None,
               jobs: int = 1, check: bool = True) -> List[BlowupRecord]:
    """每个 m 一条记录；CSV 在全部单元结束后按 m 顺序一次写出"""
    op = validate_blowup_range(op, m_min, m_max)
    records = BlowupExperiment(op, m_min, m_max, max_workers=jobs, check=check).run()
    if csv_path is not None:
        write_csv([record.to_row() for record in records], csv_path)
        experiment_logger.info(f"写出 CSV: {csv_path} ({len(records)} 行)")
    return records


def check_growth(records: Iterable[BlowupRecord]) -> Dict[OpKind, GrowthVerdict]:
    """输入大小受多项式约束且输出大小按校准阈值增长时通过"""
    grouped: Dict[OpKind, List[BlowupRecord]] = {}
    for record in records:
        grouped.setdefault(record.op, []).append(record)

    verdicts = {}
    for op, group in grouped.items():
        group = sorted(group, key=lambda record: record.m)
        m_values = [record.m for record in group]
        h_based = op in H_BASED_KINDS
        span = EXPERIMENT_CONFIG["h_min_span"] if h_based else EXPERIMENT_CONFIG["perm_min_span"]
        consecutive = all(b - a == 1 for a, b in zip(m_values, m_values[1:]))
        if len(group) < span or not consecutive:
            raise InsufficientRangeError(f"{op.value} 需要至少 {span} 个连续的 m，当前 {m_values}")

        reasons = []
        degree = 3 if h_based else 4
        constant = EXPERIMENT_CONFIG["input_bound_constant"]
        input_bounded = True
        for record in group:
            bound = constant * record.m ** degree
            if record.z_f + record.z_g > bound:
                input_bounded = False
                reasons.append(f"m={record.m}: 输入大小 {record.z_f + record.z_g} > {bound}")

        sizes = [record.z_out for record in group]
        strictly_increasing = all(b > a for a, b in zip(sizes, sizes[1:]))
        if not strictly_increasing:
            reasons.append("输出大小不是严格递增")

        step = EXPERIMENT_CONFIG["growth_window"] if h_based else 1
        gains = log2_gains(sizes, step)
        min_gain = min(gains) if gains else None
        threshold = EXPERIMENT_CONFIG["growth_min_gain"]
        if min_gain is None or min_gain < threshold:
            reasons.append(f"log₂ 增量最小值 {min_gain} 低于 {threshold}（窗口 {step}）")

        verdicts[op] = GrowthVerdict(
            op=op,
            passed=not reasons,
            m_values=m_values,
            input_bounded=input_bounded,
            strictly_increasing=strictly_increasing,
            min_gain=min_gain,
            reasons=reasons,
        )
    return verdicts
