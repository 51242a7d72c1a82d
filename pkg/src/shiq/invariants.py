"""Structural checks over a tableau graph, for tests and debug runs."""

from __future__ import annotations

from .closure import closure_set
from .graph import ALLOWED_TRANSITIONS


class InvariantViolation(AssertionError):
    pass


def _closure(tab):
    c = getattr(tab, "_closure_cache", None)
    if c is None:
        c = closure_set(tab.kb, tab.rc)
        tab._closure_cache = c
    return c


def check_tableau(tab, strict: bool = False, closure: bool = True) -> list[str]:
    g = tab.graph
    out = []

    seen_states = {}
    seen_local = {}
    for n in g.nodes:
        if n.is_state:
            key = (n.complex, n.label)
            if key in seen_states:
                out.append(f"states {seen_states[key]} and {n.id} share a label")
            seen_states[key] = n.id
        else:
            key = (n.at_pred.id, n.complex, n.label)
            if key in seen_local:
                out.append(f"nodes {seen_local[key]} and {n.id} share a label in one local graph")
            seen_local[key] = n.id

    for nid, old, new in g.lattice_violations:
        out.append(f"node {nid}: attempted status change {old} -> {new}")

    for n in g.nodes:
        if n.reexpanded > 1:
            out.append(f"node {n.id} re-expanded {n.reexpanded} times")
        for w in n.succs:
            if w.is_state:
                if n.is_state:
                    out.append(f"state {n.id} has state successor {w.id}")
                elif len(n.succs) != 1:
                    out.append(f"non-state {n.id} has state successor {w.id} among others")
            elif not n.is_state and w.at_pred is not n.at_pred:
                out.append(f"edge {n.id}->{w.id} crosses local graphs")

    out += _local_cycles(g)

    if closure:
        cl = _closure(tab)
        for n in g.nodes:
            for f in n.label | n.rfmls:
                if f not in cl:
                    out.append(f"node {n.id}: {f} outside the closure set")

    if strict and out:
        raise InvariantViolation("; ".join(out[:10]))
    return out


def _local_cycles(g) -> list[str]:
    """Cycles among non-states (they would live inside one local graph)."""
    color = {}
    out = []
    for start in g.nodes:
        if start.is_state or start.id in color:
            continue
        stack = [(start, iter(start.succs))]
        color[start.id] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node.id] = 2
                stack.pop()
                continue
            if nxt.is_state:
                continue
            c = color.get(nxt.id)
            if c == 1:
                out.append(f"cycle through non-states {node.id} -> {nxt.id}")
            elif c is None:
                color[nxt.id] = 1
                stack.append((nxt, iter(nxt.succs)))
    return out


def status_history_ok(old, new) -> bool:
    return new in ALLOWED_TRANSITIONS[old]
