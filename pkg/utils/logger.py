"""
日志系统
基于 loguru，统一输出格式，提供性能计时与异常跟踪
"""

import functools
import sys
import time
import traceback
from pathlib import Path
from typing import Optional

from loguru import logger

from config.settings import SYSTEM_CONFIG

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[component]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[component]}:{function}:{line} - {message}"

# 移除默认的loguru处理器，日志统一写到stderr，stdout留给结果输出
logger.remove()
logger.configure(extra={"component": "-"})
_console_sink_id = logger.add(
    sys.stderr,
    format=CONSOLE_FORMAT,
    level=SYSTEM_CONFIG["log_level"],
    colorize=True,
)
_file_sink_id: Optional[int] = None


class DiagramLogger:
    """按组件绑定的日志记录器"""

    def __init__(self, component: str = "DD"):
        self.component = component
        self.logger = logger.bind(component=component)

    def debug(self, message: str, **kwargs):
        self.logger.opt(depth=1).debug(message, **kwargs)

    def info(self, message: str, **kwargs):
        self.logger.opt(depth=1).info(message, **kwargs)

    def warning(self, message: str, **kwargs):
        self.logger.opt(depth=1).warning(message, **kwargs)

    def error(self, message: str, error: Exception = None, **kwargs):
        """错误日志，附带异常堆栈"""
        if error:
            tb_str = "".join(traceback.format_exception(type(error), error, error.__traceback__))
            self.logger.opt(depth=1).error(f"{message}\n错误详情: {error}\n堆栈跟踪:\n{tb_str}", **kwargs)
        else:
            self.logger.opt(depth=1).error(message, **kwargs)

    def log_function_call(self, func_name: str, args: tuple = None, kwargs: dict = None):
        """记录函数调用"""
        self.debug(f"调用函数: {func_name} | args={args or ()} | kwargs={kwargs or {}}")

    def log_performance(self, operation: str, duration: float, **details):
        """记录性能指标"""
        detail_str = " ".join(f"{key}={value}" for key, value in details.items())
        self.info(f"性能监控: {operation} 耗时 {duration:.3f}s {detail_str}".rstrip())


def log_exceptions(logger_instance: DiagramLogger = None):
    """异常日志装饰器：记录调用、耗时，失败时记录堆栈后继续抛出"""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            _logger = logger_instance or experiment_logger
            _logger.log_function_call(func.__name__, args, kwargs)
            start_time = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                _logger.error(f"函数 {func.__name__} 执行失败", error=e)
                raise
            _logger.log_performance(func.__name__, time.perf_counter() - start_time)
            return result

        return wrapper
    return decorator


def setup_logging(level: str = None, log_file: Optional[str] = None):
    """重新配置日志级别与可选的文件日志"""
    global _console_sink_id, _file_sink_id
    level = (level or SYSTEM_CONFIG["log_level"]).upper()

    logger.remove(_console_sink_id)
    _console_sink_id = logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True)

    if _file_sink_id is not None:
        logger.remove(_file_sink_id)
        _file_sink_id = None

    log_file = log_file or SYSTEM_CONFIG["log_file"]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        _file_sink_id = logger.add(
            log_file,
            format=FILE_FORMAT,
            level="DEBUG",
            rotation=SYSTEM_CONFIG["log_rotation"],
            retention=SYSTEM_CONFIG["log_retention"],
        )


def get_logger(component: str) -> DiagramLogger:
    """获取指定组件的日志记录器"""
    return DiagramLogger(component)


# 全局日志实例
kernel_logger = DiagramLogger("Kernel")
ops_logger = DiagramLogger("FamilyOps")
oracle_logger = DiagramLogger("Oracle")
experiment_logger = DiagramLogger("Experiment")
cli_logger = DiagramLogger("CLI")
