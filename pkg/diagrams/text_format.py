"""
族文本格式

    elements: a,b,c
    a,b
    {}

第一行声明全集及其顺序，之后每个非空行是一个集合，`{}` 表示空集。
"""

from pathlib import Path
from typing import List, Union

from pydantic import ValidationError

from diagrams.errors import TextFormatError
from diagrams.models import ExplicitFamily
from utils.file_utils import FileUtils

HEADER = "elements:"
EMPTY_SET_TOKEN = "{}"


def _split_names(text: str) -> List[str]:
    text = text.strip()
    if not text:
        return []
    return [name.strip() for name in text.split(",")]


def parse_family_text(text: str) -> ExplicitFamily:
    """解析族文本，重复集合与未声明元素都视为格式错误"""
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines or not lines[0].startswith(HEADER):
        raise TextFormatError(f"首行必须以 '{HEADER}' 开头")

    universe = _split_names(lines[0][len(HEADER):])
    try:
        empty = ExplicitFamily(universe=tuple(universe))
    except ValidationError as e:
        raise TextFormatError(f"全集声明无效: {e.errors()[0]['msg']}") from None
    position = {name: i for i, name in enumerate(empty.universe)}

    masks = set()
    for number, line in enumerate(lines[1:], start=2):
        if line == EMPTY_SET_TOKEN:
            names = []
        else:
            names = _split_names(line)
        mask = 0
        for name in names:
            if name not in position:
                raise TextFormatError(f"第 {number} 行: 未声明的元素 {name!r}")
            bit = 1 << position[name]
            if mask & bit:
                raise TextFormatError(f"第 {number} 行: 元素 {name!r} 重复")
            mask |= bit
        if mask in masks:
            raise TextFormatError(f"第 {number} 行: 重复的集合")
        masks.add(mask)

    return ExplicitFamily(universe=empty.universe, sets=frozenset(masks))


def format_family_text(family: ExplicitFamily) -> str:
    """确定性输出：集合先按基数再按元素位置排序"""
    lines = [f"{HEADER} {','.join(family.universe)}".rstrip()]
    for names in family.name_sets():
        lines.append(",".join(names) if names else EMPTY_SET_TOKEN)
    return "\n".join(lines) + "\n"


def read_family_file(file_path: Union[str, Path]) -> ExplicitFamily:
    return parse_family_text(FileUtils.read_text(file_path))


def write_family_file(file_path: Union[str, Path], family: ExplicitFamily) -> Path:
    return FileUtils.write_text(file_path, format_family_text(family))
