"""Graphviz export of tableau graphs. States get a double border."""

from __future__ import annotations

from .graph import TableauGraph
from .syntax import sort_formulas


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(graph: TableauGraph, max_formulas: int = 40) -> str:
    lines = ["digraph tableau {", "  node [shape=box, fontname=monospace];"]
    for n in graph.nodes:
        fs = [str(f) for f in sort_formulas(n.label)]
        if len(fs) > max_formulas:
            fs = fs[:max_formulas] + [f"... {len(fs) - max_formulas} more"]
        head = f"{n.id} {n.kind_glyph()} {n.status}"
        if n is graph.root:
            head = "ν " + head
        text = _escape(head + "\n" + "\n".join(fs))
        extra = ", peripheries=2" if n.is_state else ""
        lines.append(f'  n{n.id} [label="{text}"{extra}];')
    for u in graph.nodes:
        for w in u.succs:
            attr = ""
            if u.is_state and w.ce_label is not None:
                attr = f' [label="{_escape(str(w.ce_label))}"]'
            lines.append(f"  n{u.id} -> n{w.id}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
