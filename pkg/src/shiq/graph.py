"""Tableau graph: nodes, edges, proxy lookup and the node-creation procedures."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .syntax import Formula, is_pending, sort_formulas


class Status(enum.Enum):
    UNEXPANDED = "unexpanded"
    P_EXPANDED = "p-expanded"
    F_EXPANDED = "f-expanded"
    INCOMPLETE = "incomplete"
    CLOSED = "closed"
    OPEN = "open"

    @property
    def is_final(self) -> bool:
        return self in FINAL

    def __str__(self):
        return self.value


FINAL = frozenset({Status.INCOMPLETE, Status.CLOSED, Status.OPEN})

ALLOWED_TRANSITIONS = {
    Status.UNEXPANDED: frozenset(Status) - {Status.UNEXPANDED},
    Status.P_EXPANDED: frozenset({Status.F_EXPANDED, Status.INCOMPLETE, Status.CLOSED}),
    Status.F_EXPANDED: frozenset({Status.INCOMPLETE, Status.CLOSED, Status.OPEN}),
    Status.INCOMPLETE: frozenset(),
    Status.CLOSED: frozenset(),
    Status.OPEN: frozenset(),
}

TESTING_CLOSEDNESS = "testingClosedness"
CHECKING_FEASIBILITY = "checkingFeasibility"


@dataclass(frozen=True)
class CELabel:
    """Label of the edge coming into an after-transition node."""

    kind: str
    roles: frozenset
    ind: Optional[str] = None

    def __str__(self):
        roles = ",".join(sorted(str(r) for r in self.roles))
        kind = "TC" if self.kind == TESTING_CLOSEDNESS else "CF"
        return f"<{kind}, {{{roles}}}, {self.ind or 'null'}>"


class Node:
    __slots__ = (
        "id", "is_state", "complex", "status", "label", "rfmls", "state_pred",
        "at_pred", "ce_label", "fmls_rc", "fml_fb", "succs", "preds", "_full",
        "il_constraints", "il_vars", "il_pins", "local_nodes", "reexpanded",
        "us_checked", "expanded_by", "_ordered",
    )

    def __init__(self, id: int, is_state: bool, complex: bool, label: frozenset,
                 rfmls: frozenset):
        self.id = id
        self.is_state = is_state
        self.complex = complex
        self.status = Status.UNEXPANDED
        self.label = label
        self.rfmls = rfmls
        self.state_pred: Optional[Node] = None
        self.at_pred: Optional[Node] = None
        self.ce_label: Optional[CELabel] = None
        self.fmls_rc: frozenset = frozenset()
        self.fml_fb = None
        self.succs: list[Node] = []
        self.preds: list[Node] = []
        self._full: Optional[frozenset] = None
        # states only: ILConstraints over successor ids, and their pins
        self.il_constraints: tuple = ()
        self.il_vars: tuple = ()
        self.il_pins: set = set()
        self.local_nodes: list[Node] = []
        self.reexpanded = 0
        self.us_checked = False
        self.expanded_by: Optional[str] = None
        self._ordered: Optional[list] = None

    @property
    def after_trans(self) -> bool:
        return self.at_pred is self

    @property
    def full_label(self) -> frozenset:
        """Label ∪ RFmls without pending restrictions."""
        if self._full is None:
            self._full = frozenset(f for f in self.label | self.rfmls if not is_pending(f))
        return self._full

    @property
    def ordered_label(self) -> list:
        """Label in a fixed order, so rule choices do not depend on hashing."""
        if self._ordered is None:
            self._ordered = sort_formulas(self.label)
        return self._ordered

    def kind_glyph(self) -> str:
        return ("S" if self.is_state else "N") + ("c" if self.complex else "s")

    def __repr__(self):
        kind = "state" if self.is_state else "non-state"
        sub = "complex" if self.complex else "simple"
        return f"<Node {self.id} {kind}/{sub} {self.status}>"


class GraphListener:
    """Callbacks fired by TableauGraph; the engine uses them for scheduling."""

    def node_created(self, node: Node) -> None:
        pass

    def edge_added(self, u: Node, w: Node) -> None:
        pass

    def edge_removed(self, u: Node, w: Node) -> None:
        pass

    def rfmls_grew(self, node: Node) -> None:
        pass

    def status_changed(self, node: Node, old: Status, new: Status) -> None:
        pass

    def proxy_hit(self, node: Node) -> None:
        pass


class TableauGraph:
    def __init__(self, listener: Optional[GraphListener] = None):
        self.nodes: list[Node] = []
        self.root: Optional[Node] = None
        self.state_index: dict = {}
        self.local_index: dict = {}
        self.listener = listener or GraphListener()
        self.lattice_violations: list = []

    def __len__(self):
        return len(self.nodes)

    def node(self, id: int) -> Node:
        return self.nodes[id]

    # -- procedures ------------------------------------------------------

    def new_succ(self, v: Optional[Node], is_state: bool, complex: bool,
                 label: Iterable[Formula], rfmls: Iterable[Formula] = (),
                 ce_label: Optional[CELabel] = None) -> Node:
        """Always create a fresh node, with an edge from v when v is given."""
        w = Node(len(self.nodes), is_state, complex, frozenset(label), frozenset(rfmls))
        self.nodes.append(w)
        if not is_state:
            if v is None or v.is_state:
                w.state_pred = v
                w.at_pred = w
            else:
                w.state_pred = v.state_pred
                w.at_pred = v.at_pred
            if v is not None and v.is_state:
                w.ce_label = ce_label
            self.local_index.setdefault((w.at_pred.id, complex, w.label), w)
            if w.state_pred is not None:
                w.state_pred.local_nodes.append(w)
        else:
            self.state_index.setdefault((complex, w.label), w)
        if v is None and self.root is None:
            self.root = w
        self.listener.node_created(w)
        if v is not None:
            self.add_edge(v, w)
        return w

    def find_proxy(self, is_state: bool, complex: bool, v1: Optional[Node],
                   label: frozenset) -> Optional[Node]:
        if is_state:
            return self.state_index.get((complex, label))
        if v1 is None:
            raise ValueError("a non-state lookup needs the after-transition node")
        return self.local_index.get((v1.id, complex, label))

    def con_to_succ(self, v: Node, is_state: bool, complex: bool,
                    label: Iterable[Formula], rfmls: Iterable[Formula] = (),
                    ce_label: Optional[CELabel] = None) -> Node:
        """Connect v to a proxy with the same label if one exists, else to a new node."""
        label = frozenset(label)
        rfmls = frozenset(rfmls)
        v1 = None if is_state else v.at_pred
        w = self.find_proxy(is_state, complex, v1, label)
        if w is None:
            return self.new_succ(v, is_state, complex, label, rfmls, ce_label)
        self.listener.proxy_hit(w)
        self.add_edge(v, w)
        if not rfmls <= w.rfmls:
            w.rfmls = w.rfmls | rfmls
            w._full = None
            self.listener.rfmls_grew(w)
        return w

    # -- edges and statuses ---------------------------------------------

    def add_edge(self, u: Node, w: Node) -> None:
        if w in u.succs:
            return
        u.succs.append(w)
        w.preds.append(u)
        self.listener.edge_added(u, w)

    def remove_edge(self, u: Node, w: Node) -> None:
        u.succs.remove(w)
        w.preds.remove(u)
        self.listener.edge_removed(u, w)

    def set_status(self, node: Node, new: Status) -> bool:
        """Change a status along the lattice; returns whether it changed."""
        old = node.status
        if old is new:
            return False
        if new not in ALLOWED_TRANSITIONS[old]:
            self.lattice_violations.append((node.id, old, new))
            return False
        node.status = new
        self.listener.status_changed(node, old, new)
        return True

    def add_rfmls(self, node: Node, extra: Iterable[Formula]) -> None:
        extra = frozenset(extra)
        if not extra <= node.rfmls:
            node.rfmls = node.rfmls | extra
            node._full = None
            self.listener.rfmls_grew(node)

    # -- views -------------------------------------------------------------

    def states(self) -> list[Node]:
        return [n for n in self.nodes if n.is_state]

    def local_graph(self, v0: Node) -> list[Node]:
        """Nodes reachable from the non-state v0 without passing through states."""
        seen = {v0.id}
        out = [v0]
        stack = [v0]
        while stack:
            x = stack.pop()
            for y in x.succs:
                if not y.is_state and y.id not in seen:
                    seen.add(y.id)
                    out.append(y)
                    stack.append(y)
        return out

    def edges(self):
        for u in self.nodes:
            for w in u.succs:
                yield u, w


def full_label(node: Node) -> frozenset:
    return node.full_label
