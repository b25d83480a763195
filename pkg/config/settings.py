from typing import Any, Dict, List

# 内核配置
KERNEL_CONFIG = {
    "count_bits": 64,  # count_sets 使用的定宽计数器位数
    "enumeration_cap": 2 ** 20,  # to_explicit 默认枚举上限
}

# 暴力参照实现配置
ORACLE_CONFIG = {
    "max_universe": 16,  # 需要遍历 2^n 个子集的运算的硬上限
    "exhaustive_max_universe": 8,  # 全排列搜索变量顺序的上限
}

# 实验配置
EXPERIMENT_CONFIG = {
    "min_m": 2,
    "h_based_max_m": 18,
    "perm_based_max_m": 6,
    "identity_enum_max_m": 3,  # 需要显式枚举的恒等式检查上限
    # 增长判定的校准常数
    "growth_window": 5,
    "growth_min_gain": 0.8,
    "input_bound_constant": 32,
    "h_min_span": 6,
    "perm_min_span": 3,
    # 多项式上界检查
    "bounds_e_max_m": 24,
    "bounds_ct_max_m": 8,
    "bounds_orders": 20,
    "bounds_seed": 7,
    "exhaustive_max_universe": 8,
    "csv_columns": ["op", "m", "z_f", "z_g", "z_out", "count_out", "elapsed_ms"],
    "max_workers": 1,
}

# 自检配置
SELFTEST_CONFIG = {
    "instances_per_kind": 500,
    "max_universe": 8,
    "max_sets": 24,
    "canonicity_families": 1000,
    "canonicity_shuffles": 3,
    "conditioning_families": 200,
    "size_ratio_factor": 2,
    "seed": 20240917,
}

# 系统配置
SYSTEM_CONFIG = {
    "log_level": "WARNING",
    "log_file": None,
    "log_rotation": "1 day",
    "log_retention": "7 days",
}


def get_config(section: str) -> Dict[str, Any]:
    """获取指定配置段"""
    config_map = {
        "kernel": KERNEL_CONFIG,
        "oracle": ORACLE_CONFIG,
        "experiment": EXPERIMENT_CONFIG,
        "selftest": SELFTEST_CONFIG,
        "system": SYSTEM_CONFIG,
    }
    return config_map.get(section, {})


def get_csv_columns() -> List[str]:
    """获取实验 CSV 的列顺序"""
    return list(EXPERIMENT_CONFIG["csv_columns"])


def get_enumeration_cap() -> int:
    """获取显式枚举的默认上限"""
    return int(KERNEL_CONFIG["enumeration_cap"])


def get_count_limit() -> int:
    """获取集合计数器能表示的最大值"""
    return (1 << KERNEL_CONFIG["count_bits"]) - 1
