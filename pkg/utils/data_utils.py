from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.settings import get_csv_columns
from utils.file_utils import FileUtils


def records_to_frame(rows: Iterable[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """把记录行转成固定列顺序的 DataFrame"""
    columns = list(columns or get_csv_columns())
    frame = pd.DataFrame(list(rows))
    if frame.empty:
        return pd.DataFrame(columns=columns)
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise ValueError(f"记录缺少列: {missing}")
    return frame[columns]


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    """十进制数值、换行结尾、不带索引"""
    return frame.to_csv(index=False, lineterminator="\n")


def write_csv(rows: Iterable[Dict[str, Any]], file_path: Union[str, Path],
              columns: Optional[Sequence[str]] = None) -> Path:
    """一次性写出 CSV"""
    text = frame_to_csv_text(records_to_frame(rows, columns))
    return FileUtils.write_text(file_path, text)


def read_csv(file_path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(file_path)


def describe_sizes(values: Sequence[int]) -> Dict[str, float]:
    """最小 / 最大 / 中位数"""
    if not len(values):
        raise ValueError("没有可汇总的数据")
    array = np.asarray(values, dtype=np.int64)
    return {
        "min": int(array.min()),
        "max": int(array.max()),
        "median": float(np.median(array)),
    }


def log2_gains(values: Sequence[int], step: int = 1) -> List[float]:
    """log₂(v[i+step]) - log₂(v[i])"""
    logs = np.log2(np.asarray(values, dtype=np.float64))
    if len(logs) <= step:
        return []
    return (logs[step:] - logs[:-step]).tolist()
