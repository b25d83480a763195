from pathlib import Path
from typing import Union

from loguru import logger


class FileUtils:
    """文件处理工具类"""

    @staticmethod
    def ensure_directory(directory: Union[str, Path]) -> Path:
        """确保目录存在，如果不存在则创建"""
        dir_path = Path(directory)
        dir_path.mkdir(parents=True, exist_ok=True)
        logger.debug(f"确保目录存在: {dir_path}")
        return dir_path

    @staticmethod
    def ensure_parent(file_path: Union[str, Path]) -> Path:
        """确保文件所在目录存在"""
        path = Path(file_path)
        if str(path.parent) not in ("", "."):
            FileUtils.ensure_directory(path.parent)
        return path

    @staticmethod
    def read_text(file_path: Union[str, Path]) -> str:
        """读取 UTF-8 文本文件"""
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"文件不存在: {file_path}")
        return path.read_text(encoding="utf-8")

    @staticmethod
    def write_text(file_path: Union[str, Path], content: str) -> Path:
        """写入 UTF-8 文本文件，自动创建上级目录"""
        path = FileUtils.ensure_parent(file_path)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        logger.debug(f"写入文件: {path} ({len(content)} 字符)")
        return path

