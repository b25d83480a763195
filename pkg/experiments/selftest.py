"""
自检套件
- 参照实现等价：每种运算随机实例，决策图结果与暴力结果逐集合一致
- 规范性：同一个族按不同插入顺序得到同一个根，且枚举后重建仍是同一个根
- ZDD / BDD 大小比：B ≤ 2·max(n,2)·Z 且 Z ≤ 2·max(n,2)·B
- 条件化：结果大小不超过 Z(F)·(n+2)，内容与定义一致
"""

import time
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import get_config
from diagrams import family_ops
from diagrams.kernel import DiagramManager, convert_semantics, from_explicit, node_count, to_explicit
from diagrams.models import ExplicitFamily, OpKind, Semantics
from diagrams.oracle import oracle_apply
from experiments.models import SelftestCheck, SelftestReport
from utils.logger import experiment_logger, log_exceptions

SELFTEST_CONFIG = get_config("selftest")

# 最多保留的失败样例条数
_MAX_DETAILS = 5


def random_explicit_family(rng: np.random.Generator, n: Optional[int] = None, min_sets: int = 0,
                           max_sets: Optional[int] = None) -> ExplicitFamily:
    """n ∈ 1..max_universe 个元素上的随机族"""
    if n is None:
        n = int(rng.integers(1, SELFTEST_CONFIG["max_universe"] + 1))
    max_sets = SELFTEST_CONFIG["max_sets"] if max_sets is None else max_sets
    universe = tuple(f"e{i}" for i in range(n))
    count = int(rng.integers(min_sets, max_sets + 1))
    sets = frozenset(int(bits) for bits in rng.integers(0, 1 << n, size=count))
    while len(sets) < min_sets:
        sets |= {int(rng.integers(0, 1 << n))}
    return ExplicitFamily(universe=universe, sets=sets)


def random_condition_sets(rng: np.random.Generator, universe: Tuple[str, ...]) -> Tuple[List[str], List[str]]:
    """不相交的随机 (Y, Y′)"""
    labels = rng.integers(0, 3, size=len(universe))
    y = [name for name, label in zip(universe, labels) if label == 1]
    y_prime = [name for name, label in zip(universe, labels) if label == 2]
    return y, y_prime


def _size_ratio_factor(n: int) -> int:
    return SELFTEST_CONFIG["size_ratio_factor"] * max(n, 2)


def check_oracle_equivalence(rng: np.random.Generator, instances: int,
                             progress: bool = False) -> Tuple[SelftestCheck, SelftestCheck]:
    """同一批随机输入同时用于 ZDD / BDD 大小比检查"""
    start_time = time.perf_counter()
    failures, ratio_failures = [], []
    worst_ratio = 0.0
    total = 0
    for kind in tqdm(list(OpKind), desc="oracle", disable=not progress):
        for _ in range(instances):
            f = random_explicit_family(rng)
            g = None
            extra = None
            if kind is OpKind.CONDITION:
                extra = random_condition_sets(rng, f.universe)
            elif kind.is_binary:
                divisor = kind in (OpKind.QUOTIENT, OpKind.REMAINDER)
                g = random_explicit_family(rng, n=len(f.universe), min_sets=1 if divisor else 0)

            manager = DiagramManager(f.universe)
            zf = from_explicit(manager, f)
            zg = from_explicit(manager, g) if g is not None else None
            result = to_explicit(family_ops.apply_operation(kind, zf, zg, extra))
            expected = oracle_apply(kind, f, g, extra)
            total += 1
            if result != expected and len(failures) < _MAX_DETAILS:
                failures.append(f"{kind.value}: f={sorted(f.sets)} g={sorted(g.sets) if g else None} extra={extra}")

            for family in (zf, zg):
                if family is None:
                    continue
                z = node_count(family)
                b = node_count(convert_semantics(family, Semantics.BDD))
                n = len(f.universe)
                worst_ratio = max(worst_ratio, b / (n * z), z / (n * b))
                factor = _size_ratio_factor(n)
                if (b > factor * z or z > factor * b) and len(ratio_failures) < _MAX_DETAILS:
                    ratio_failures.append(f"n={n} Z={z} B={b} sets={sorted(to_explicit(family).sets)}")

    elapsed = time.perf_counter() - start_time
    equivalence = SelftestCheck(name="oracle_equivalence", passed=not failures, instances=total,
                                elapsed_s=elapsed, details=failures)
    ratio = SelftestCheck(name="semantics_size_ratio", passed=not ratio_failures, instances=total,
                          elapsed_s=elapsed,
                          details=ratio_failures + [f"max(B/(nZ), Z/(nB)) = {worst_ratio:.3f}"])
    return equivalence, ratio


def check_canonicity(rng: np.random.Generator, families: int, shuffles: int,
                     progress: bool = False) -> SelftestCheck:
    start_time = time.perf_counter()
    failures = []
    manager_cache = {}
    for _ in tqdm(range(families), desc="canonicity", disable=not progress):
        family = random_explicit_family(rng)
        manager = manager_cache.get(family.universe)
        if manager is None:
            manager = manager_cache[family.universe] = DiagramManager(family.universe)
        name_sets = family.name_sets()
        roots = set()
        for _ in range(shuffles):
            shuffled = [name_sets[i] for i in rng.permutation(len(name_sets))]
            rebuilt = ExplicitFamily.from_name_sets(family.universe, shuffled)
            roots.add(from_explicit(manager, rebuilt).root)
        root = roots.pop() if len(roots) == 1 else None
        round_trip = None
        if root is not None:
            round_trip = from_explicit(manager, to_explicit(manager.family(root))).root
        if (root is None or round_trip != root) and len(failures) < _MAX_DETAILS:
            failures.append(f"sets={sorted(family.sets)} roots={roots} round_trip={round_trip}")
    return SelftestCheck(name="canonicity", passed=not failures, instances=families,
                         elapsed_s=time.perf_counter() - start_time, details=failures)


def check_conditioning(rng: np.random.Generator, families: int, progress: bool = False) -> SelftestCheck:
    start_time = time.perf_counter()
    failures = []
    for _ in tqdm(range(families), desc="conditioning", disable=not progress):
        family = random_explicit_family(rng)
        y, y_prime = random_condition_sets(rng, family.universe)
        manager = DiagramManager(family.universe)
        f = from_explicit(manager, family)
        conditioned = family_ops.condition(f, y, y_prime)
        n = len(family.universe)
        bound = node_count(f) * (n + 2)
        size_ok = node_count(conditioned) <= bound
        content_ok = to_explicit(conditioned) == oracle_apply(OpKind.CONDITION, family, extra=(y, y_prime))
        if not (size_ok and content_ok) and len(failures) < _MAX_DETAILS:
            failures.append(f"sets={sorted(family.sets)} Y={y} Y′={y_prime} size_ok={size_ok} content_ok={content_ok}")
    return SelftestCheck(name="conditioning", passed=not failures, instances=families,
                         elapsed_s=time.perf_counter() - start_time, details=failures)


@log_exceptions(experiment_logger)
def run_selftest(instances_per_kind: Optional[int] = None, canonicity_families: Optional[int] = None,
                 conditioning_families: Optional[int] = None, seed: Optional[int] = None,
                 progress: bool = False) -> SelftestReport:
    """省略的参数取 selftest 配置段里的默认值"""
    instances_per_kind = instances_per_kind or SELFTEST_CONFIG["instances_per_kind"]
    canonicity_families = canonicity_families or SELFTEST_CONFIG["canonicity_families"]
    conditioning_families = conditioning_families or SELFTEST_CONFIG["conditioning_families"]
    seed = SELFTEST_CONFIG["seed"] if seed is None else seed
    rng = np.random.default_rng(seed)

    report = SelftestReport(seed=seed)
    report.checks.extend(check_oracle_equivalence(rng, instances_per_kind, progress))
    report.checks.append(check_canonicity(rng, canonicity_families, SELFTEST_CONFIG["canonicity_shuffles"], progress))
    report.checks.append(check_conditioning(rng, conditioning_families, progress))
    for check in report.checks:
        if check.passed:
            experiment_logger.info(f"自检通过: {check.name} ({check.instances} 例, {check.elapsed_s:.2f}s)")
        else:
            experiment_logger.warning(f"自检失败: {check.name}: {check.details}")
    return report
