"""
实验模块
"""

from .blowup import check_growth, run_blowup
from .bounds import verify_bounds
from .order_study import run_order_study, summarize_order_study
from .selftest import run_selftest

__all__ = [
    'run_blowup',
    'check_growth',
    'run_order_study',
    'summarize_order_study',
    'verify_bounds',
    'run_selftest'
]
