import time
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Any, Callable, List, Optional, Tuple

from config.settings import get_config
from utils.logger import experiment_logger


class ExperimentStatus(Enum):
    """实验状态枚举"""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class CellStatus(Enum):
    """单元状态枚举"""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class ExperimentCell:
    """实验单元：每个单元使用自己的管理器，彼此独立

    并行执行时 handler 必须是模块级函数（可被 pickle）。
    """

    def __init__(self, name: str, handler: Callable, args: Tuple = ()):
        self.name = name
        self.handler = handler
        self.args = args
        self.status = CellStatus.PENDING
        self.result = None
        self.error: Optional[BaseException] = None
        self.execution_time: Optional[float] = None

    def reset(self):
        """重置单元状态"""
        self.status = CellStatus.PENDING
        self.result = None
        self.error = None
        self.execution_time = None


class BaseExperiment(ABC):
    """实验基类：构造单元、顺序或多进程执行、按单元顺序汇总结果"""

    def __init__(self, name: str, max_workers: Optional[int] = None):
        self.name = name
        self.max_workers = max_workers or get_config("experiment")["max_workers"]
        self.status = ExperimentStatus.PENDING
        self.cells: List[ExperimentCell] = []
        self.execution_time: Optional[float] = None

    @abstractmethod
    def build_cells(self) -> List[ExperimentCell]:
        """构造实验单元"""

    def run(self) -> List[Any]:
        """执行全部单元，任一单元失败时整个实验失败并继续抛出原异常"""
        self.cells = self.build_cells()
        for cell in self.cells:
            cell.reset()
        experiment_logger.info(f"开始实验: {self.name} ({len(self.cells)} 个单元, workers={self.max_workers})")

        self.status = ExperimentStatus.RUNNING
        start_time = time.perf_counter()
        try:
            if self.max_workers > 1 and len(self.cells) > 1:
                self._run_parallel()
            else:
                for cell in self.cells:
                    self._run_cell(cell)
        except Exception as e:
            self.status = ExperimentStatus.FAILED
            self.execution_time = time.perf_counter() - start_time
            experiment_logger.error(f"实验 {self.name} 执行失败", error=e)
            raise

        self.status = ExperimentStatus.COMPLETED
        self.execution_time = time.perf_counter() - start_time
        experiment_logger.log_performance(self.name, self.execution_time, cells=len(self.cells))
        return [cell.result for cell in self.cells]

    def _run_cell(self, cell: ExperimentCell):
        cell.status = CellStatus.RUNNING
        start_time = time.perf_counter()
        try:
            cell.result = cell.handler(*cell.args)
        except Exception as e:
            cell.status = CellStatus.FAILED
            cell.error = e
            raise
        finally:
            cell.execution_time = time.perf_counter() - start_time
        cell.status = CellStatus.COMPLETED
        experiment_logger.info(f"单元完成: {cell.name} ({cell.execution_time:.3f}s)")

    def _run_parallel(self):
        with ProcessPoolExecutor(max_workers=self.max_workers) as pool:
            futures = []
            for cell in self.cells:
                cell.status = CellStatus.RUNNING
                futures.append(pool.submit(cell.handler, *cell.args))
            for cell, future in zip(self.cells, futures):
                try:
                    cell.result = future.result()
                except Exception as e:
                    cell.status = CellStatus.FAILED
                    cell.error = e
                    raise
                cell.status = CellStatus.COMPLETED
                experiment_logger.info(f"单元完成: {cell.name}")
