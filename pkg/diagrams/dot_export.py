"""
导出决策图为 graphviz dot 文本

同一层的节点放在同一 rank，终端画成方框。
例如把输出保存为 dd.gv 后执行:

    dot -Tpng -O dd.gv
"""

from typing import Dict, List

from diagrams.kernel import BOTTOM, TOP, Family, reachable_nodes


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(family: Family, name: str = "dd") -> str:
    """实线表示 hi 边，虚线表示 lo 边"""
    manager = family.manager
    nodes = reachable_nodes(family)
    layers: Dict[int, List[int]] = {}
    for ref in nodes:
        layers.setdefault(manager.level(ref), []).append(ref)

    lines = [f"digraph {_quote(name)} {{"]
    for level in sorted(layers):
        refs = sorted(layers[level])
        lines.append("\t{")
        lines.append("\t\trank = same;")
        for ref in refs:
            if ref == TOP:
                lines.append(f'\t\t"{ref}" [label="⊤", shape=box];')
            elif ref == BOTTOM:
                lines.append(f'\t\t"{ref}" [label="⊥", shape=box];')
            else:
                label = _quote(manager.order.name_of(level))
                lines.append(f'\t\t"{ref}" [label={label}, shape=circle];')
        lines.append("\t}")

    for ref in sorted(nodes):
        if ref <= TOP:
            continue
        lines.append(f'\t"{ref}" -> "{manager.lo(ref)}" [style=dashed];')
        lines.append(f'\t"{ref}" -> "{manager.hi(ref)}" [style=solid];')
    lines.append("}")
    return "\n".join(lines) + "\n"
