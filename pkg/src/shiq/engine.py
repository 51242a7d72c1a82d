"""The tableau procedure: rules, scheduling and the satisfiability decision.

Rules fall into two groups. Status updates, the unary static rule and the
converse-compatibility rules fire as soon as they become applicable; they
are driven by work queues filled from graph events. The remaining rules
(non-unary static, forming-state, transitional) are applied to one chosen
node at a time, picked FIFO or, with a seed, at random.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from .graph import (
    CHECKING_FEASIBILITY,
    TESTING_CLOSEDNESS,
    CELabel,
    GraphListener,
    Node,
    Status,
    TableauGraph,
)
from .ilfc import GE, LE, FeasibilityProblem, LinearConstraint, is_feasible
from .rbox import RBoxClosure, closure_for_kb
from .syntax import (
    BOTTOM,
    And,
    AtLeast,
    AtMost,
    Bottom,
    Concept,
    ConceptAssertion,
    Distinct,
    Equal,
    Exists,
    Forall,
    KnowledgeBase,
    MaxPending,
    MinPending,
    NegRoleAssertion,
    Or,
    RoleAssertion,
    TopR,
    at,
    complement,
    complement_formula,
    internalize_tbox,
    normalize_kb,
    rename_individual,
    sort_formulas,
    split,
)

UNEXPANDED = Status.UNEXPANDED
P_EXPANDED = Status.P_EXPANDED
F_EXPANDED = Status.F_EXPANDED
INCOMPLETE = Status.INCOMPLETE
CLOSED = Status.CLOSED
OPEN = Status.OPEN


class ResourceLimitExceeded(RuntimeError):
    """The node budget ran out before a verdict was reached."""


@dataclass
class Result:
    satisfiable: bool
    tableau: "Tableau"
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"

    @property
    def graph(self) -> TableauGraph:
        return self.tableau.graph


class _Reach:
    """Nodes reachable from the root through non-final nodes.

    Grown incrementally as edges appear; shrinking events only mark it
    stale, so between recomputations it over-approximates.
    """

    def __init__(self):
        self.nodes: set = set()
        self.stale = False
        self.since_recompute = 0

    def grow_from(self, w: Node) -> list:
        added = []
        stack = [w]
        while stack:
            x = stack.pop()
            if x.id in self.nodes:
                continue
            self.nodes.add(x.id)
            added.append(x.id)
            if not x.status.is_final:
                stack.extend(x.succs)
        return added

    def recompute(self, root: Node):
        self.nodes = set()
        self.stale = False
        self.since_recompute = 0
        if root is not None:
            self.grow_from(root)


class Tableau(GraphListener):
    def __init__(self, kb: KnowledgeBase, rc: Optional[RBoxClosure] = None, *,
                 seed: Optional[int] = None, max_nodes: int = 10**6,
                 trace: Optional[Callable[[str], None]] = None,
                 check_invariants: bool = False):
        self.kb = normalize_kb(kb)
        self.rc = rc if rc is not None else closure_for_kb(self.kb)
        self.tbox = frozenset(internalize_tbox(self.kb.tbox))
        self.max_nodes = max_nodes
        self.rng = random.Random(seed) if seed is not None else None
        self.trace_fn = trace
        self.trace_lines: list[str] = []
        self.check_invariants = check_invariants
        self.stats: Counter = Counter()
        self.graph = TableauGraph(self)

        self._status_q: deque = deque()
        self._status_set: set = set()
        self._us_q: deque = deque()
        self._kcc1_q: deque = deque()
        self._kcc2_q: deque = deque()
        self._kcc2_eligible: set = set()
        # per state: node ids still to scan for KCC3, KCC4, KCC5
        self._kcc_todo: dict = {}
        self._candidates: list = []
        self._cand_head = 0
        self._parked: dict = {}
        self._reach = _Reach()
        self._clash_checked: dict = {}
        self._feasible_cache: dict = {}
        self.done = False

    # ------------------------------------------------------------------
    # public entry points
    # ------------------------------------------------------------------

    def initial_label(self) -> frozenset:
        label = set(self.kb.abox)
        for a in self.kb.individuals():
            for c in self.tbox:
                label.add(ConceptAssertion(a, c))
        return frozenset(label)

    def run(self) -> Result:
        if self.graph.root is None:
            self.graph.new_succ(None, False, True, self.initial_label(), ())
            self._reach.recompute(self.graph.root)
        root = self.graph.root
        while not root.status in (CLOSED, OPEN):
            if self._status_q:
                self._process_status_queue()
                continue
            if self._us_q:
                v = self._us_q.popleft()
                if not v.is_state and v.status is UNEXPANDED and not v.us_checked:
                    v.us_checked = True
                    if not self.apply_us(v):
                        self._add_candidate(v)
                continue
            if self._kcc1_q:
                u, v = self._kcc1_q.popleft()
                self.apply_kcc1(u, v)
                continue
            if self._kcc2_q:
                v = self._kcc2_q.popleft()
                if v.status is P_EXPANDED and v.id in self._kcc2_eligible:
                    self.apply_kcc2(v)
                self._kcc2_eligible.discard(v.id)
                continue
            if self._scan_kcc():
                continue
            node = self._select()
            if node is None:
                break
            self._expand(node)
            if self.check_invariants:
                from .invariants import check_tableau
                check_tableau(self, strict=True)
        self.done = True
        self.stats["nodes"] = len(self.graph)
        self.stats["states"] = sum(1 for n in self.graph.nodes if n.is_state)
        return Result(root.status is not CLOSED, self, dict(self.stats))

    # ------------------------------------------------------------------
    # graph events
    # ------------------------------------------------------------------

    def node_created(self, node: Node) -> None:
        self.stats["nodes_created"] += 1
        if len(self.graph) > self.max_nodes:
            raise ResourceLimitExceeded(f"node budget of {self.max_nodes} exhausted")
        self._enqueue_status(node)
        if node.is_state:
            self._add_candidate(node)
        else:
            self._us_q.append(node)
            u = node.state_pred
            if u is not None:
                self._kcc_mark(u, node)

    def edge_added(self, u: Node, w: Node) -> None:
        if u.id in self._reach.nodes and not u.status.is_final:
            for x in self._reach.grow_from(w):
                if x in self._parked:
                    self._add_candidate(self._parked.pop(x))
        if w.status is INCOMPLETE:
            self._kcc1_q.append((u, w))
        elif w.status in (CLOSED, OPEN):
            self._enqueue_status(u)

    def edge_removed(self, u: Node, w: Node) -> None:
        self._reach.stale = True

    def rfmls_grew(self, node: Node) -> None:
        self._enqueue_status(node)
        if node.is_state:
            self._kcc_mark_all(node)

    def proxy_hit(self, node: Node) -> None:
        self.stats["cache_hits"] += 1

    def status_changed(self, node: Node, old: Status, new: Status) -> None:
        if new.is_final:
            self._reach.stale = True
        if new in (CLOSED, OPEN):
            for p in node.preds:
                self._enqueue_status(p)
            if new is CLOSED and not node.is_state and node.after_trans \
                    and node.ce_label is not None \
                    and node.ce_label.kind == CHECKING_FEASIBILITY:
                u = node.state_pred
                u.il_pins.add(node.id)
                self._enqueue_status(u)
        elif new is INCOMPLETE:
            for p in list(node.preds):
                self._kcc1_q.append((p, node))
        if node.is_state:
            if new is P_EXPANDED:
                self._add_candidate(node)
            if new in (P_EXPANDED, F_EXPANDED):
                self._kcc_mark_all(node)
            if new is F_EXPANDED:
                self._enqueue_status(node)

    # ------------------------------------------------------------------
    # status updates
    # ------------------------------------------------------------------

    def _enqueue_status(self, node: Node):
        if node.id not in self._status_set:
            self._status_set.add(node.id)
            self._status_q.append(node)

    def _process_status_queue(self):
        while self._status_q:
            node = self._status_q.popleft()
            self._status_set.discard(node.id)
            self.update_status(node)

    def _set(self, node: Node, status: Status, rule: str) -> bool:
        changed = self.graph.set_status(node, status)
        if changed and rule.startswith("UPS"):
            self.stats[f"rule_{rule}"] += 1
            self._trace(rule, node)
        return changed

    def update_status(self, v: Node) -> None:
        if v.status.is_final:
            return
        # (UPS1)
        if self._clashes(v):
            self._set(v, CLOSED, "UPS1")
            return
        if v.is_state and v.status is F_EXPANDED:
            if not self.state_feasible(v):
                self._set(v, CLOSED, "UPS1")
                return
            if not v.succs:
                self._set(v, OPEN, "UPS1")
                return
        # (UPS2)
        if not v.is_state:
            if not v.succs:
                return
            if any(w.status is OPEN for w in v.succs):
                self._set(v, OPEN, "UPS2")
            elif all(w.status is CLOSED for w in v.succs):
                self._set(v, CLOSED, "UPS2")
            return
        tc = [w for w in v.succs if w.ce_label.kind == TESTING_CLOSEDNESS]
        if any(w.status is CLOSED for w in tc):
            self._set(v, CLOSED, "UPS2")
            return
        if v.status is not F_EXPANDED:
            return
        if v.il_pins and not self.state_feasible(v):
            self._set(v, CLOSED, "UPS2")
            return
        if all(w.status is OPEN for w in tc):
            extra = {w.id for w in v.succs
                     if w.ce_label.kind == CHECKING_FEASIBILITY and w.status is not OPEN}
            if self.state_feasible(v, extra):
                self._set(v, OPEN, "UPS2")

    def il_problem(self, u: Node, extra_pins=()) -> FeasibilityProblem:
        return FeasibilityProblem(frozenset(u.il_vars), u.il_constraints,
                                  frozenset(u.il_pins) | frozenset(extra_pins))

    def state_feasible(self, u: Node, extra_pins=()) -> bool:
        pins = frozenset(u.il_pins) | frozenset(extra_pins)
        key = (u.id, pins)
        hit = self._feasible_cache.get(key)
        if hit is None:
            self.stats["ilp_calls"] += 1
            hit = is_feasible(self.il_problem(u, extra_pins))
            self._feasible_cache[key] = hit
        return hit

    def _clashes(self, v: Node) -> bool:
        full = v.full_label
        if self._clash_checked.get(v.id) is full:
            return False
        for f in v.label:
            _, c = split(f)
            if isinstance(c, Bottom):
                return True
            if isinstance(f, Distinct) and f.a == f.b:
                return True
        for f in full:
            if isinstance(f, (Concept, ConceptAssertion)):
                _, c = split(f)
                if c.is_pending:
                    continue
            if complement_formula(f) in full:
                return True
        if not v.is_state and v.complex and self._too_many_distinct(v):
            return True
        self._clash_checked[v.id] = full
        return False

    def _too_many_distinct(self, v: Node) -> bool:
        full = v.full_label
        for f in v.label:
            if not (isinstance(f, ConceptAssertion) and isinstance(f.concept, AtMost)):
                continue
            a, c = f.ind, f.concept
            ws = sorted({g.b for g in full if isinstance(g, RoleAssertion) and g.role is c.role
                         and g.a == a and ConceptAssertion(g.b, c.body) in full})
            if len(ws) <= c.n:
                continue

            def distinct(x, y):
                return Distinct(x, y) in v.label or Distinct(y, x) in v.label

            if _has_clique(ws, c.n + 1, distinct):
                return True
        return False

    # ------------------------------------------------------------------
    # (US)
    # ------------------------------------------------------------------

    def apply_us(self, v: Node) -> bool:
        rc = self.rc
        lab = v.label
        X = set()
        new = set(lab)
        role_as = [f for f in lab if isinstance(f, RoleAssertion)]
        for f in lab:
            alpha, c = split(f)
            if c is None:
                continue
            if isinstance(c, And):
                X.add(f)
                new.add(at(alpha, c.left))
                new.add(at(alpha, c.right))
            elif isinstance(c, AtLeast) and c.n == 0:
                X.add(f)
            elif isinstance(c, AtMost) and c.n == 0:
                X.add(f)
                new.add(at(alpha, Forall(c.role, complement(c.body))))
            elif isinstance(c, Forall):
                for r in rc.subs(c.role):
                    new.add(at(alpha, Forall(r, c.body)))
                if alpha is not None:
                    for ra in role_as:
                        if ra.a == alpha and ra.role is c.role:
                            new.add(ConceptAssertion(ra.b, c.body))
                            if rc.is_transitive(c.role):
                                new.add(ConceptAssertion(ra.b, c))
        for ra in role_as:
            new.add(RoleAssertion(ra.role.inverse, ra.b, ra.a))
            for s in rc.supers(ra.role):
                new.add(RoleAssertion(s, ra.a, ra.b))
        label = frozenset(new - X - v.rfmls)
        if not (label - lab):
            return False
        w = self.graph.con_to_succ(v, False, v.complex, label, v.rfmls | X)
        self._set(v, F_EXPANDED, "US")
        self._applied("US", v, [w])
        return True

    # ------------------------------------------------------------------
    # (KCC)
    # ------------------------------------------------------------------

    def apply_kcc1(self, u: Node, v: Node) -> None:
        if v not in u.succs or v.status is not INCOMPLETE:
            return
        self.graph.remove_edge(u, v)
        u.reexpanded += 1
        if v.fmls_rc:
            new = [self.graph.con_to_succ(u, False, u.complex, u.label | v.fmls_rc, u.rfmls)]
        else:
            fb = v.fml_fb
            new = [
                self.graph.con_to_succ(u, False, u.complex, u.label | {fb}, u.rfmls),
                self.graph.con_to_succ(u, False, u.complex, u.label | {complement_formula(fb)},
                                       u.rfmls),
            ]
        self._applied("KCC1", u, new)
        self._enqueue_status(u)

    def apply_kcc2(self, v: Node) -> bool:
        full = v.full_label
        X = set()
        for w in v.local_nodes:
            w0 = w.at_pred
            ce = w0.ce_label
            alpha = ce.ind
            for c in w.label:
                if isinstance(c, Forall) and c.role.inverse in ce.roles:
                    f = at(alpha, c.body)
                    if f not in full:
                        X.add(f)
                    if self.rc.is_transitive(c.role.inverse):
                        g = at(alpha, c)
                        if g not in full:
                            X.add(g)
        if not X:
            return False
        v.fmls_rc = frozenset(X)
        self._set(v, INCOMPLETE, "KCC2")
        self._applied("KCC2", v, [])
        return True

    def _kcc_mark(self, u: Node, node: Node):
        todo = self._kcc_todo.get(u.id)
        if todo is None:
            todo = self._kcc_todo[u.id] = ([], [], [])
        for lst in todo:
            lst.append(node)

    def _kcc_mark_all(self, u: Node):
        self._kcc_todo[u.id] = tuple(list(u.local_nodes) for _ in range(3))

    def _scan_kcc(self) -> bool:
        """Apply one KCC3/4/5 instance if any is applicable; KCC3 first."""
        if not self._kcc_todo:
            return False
        for phase, rule in enumerate((self.kcc3, self.kcc4, self.kcc5)):
            for uid in sorted(self._kcc_todo):
                u = self.graph.nodes[uid]
                if u.status not in (P_EXPANDED, F_EXPANDED):
                    continue
                todo = self._kcc_todo[uid][phase]
                while todo:
                    v = todo[-1]
                    if v.status is not CLOSED and rule(u, v):
                        return True
                    todo.pop()
        self._kcc_todo.clear()
        return False

    def kcc3(self, u: Node, v: Node) -> bool:
        v0 = v.at_pred
        ce = v0.ce_label
        alpha = ce.ind
        full = u.full_label
        for c in v.ordered_label:
            if not (isinstance(c, Forall) and c.role.inverse in ce.roles):
                continue
            R = c.role.inverse
            C = c.body
            trans = self.rc.is_transitive(R)
            if at(alpha, complement(C)) in full:
                self._set(v, CLOSED, "KCC3")
                self._applied("KCC3", v, [])
                return True
            if trans and at(alpha, Exists(c.role, complement(C))) in full:
                self._set(v, CLOSED, "KCC3")
                self._applied("KCC3", v, [])
                return True
            if u.status in (P_EXPANDED, F_EXPANDED):
                if at(alpha, C) not in full:
                    return self._make_incomplete(u, at(alpha, C), "KCC3")
                if trans and at(alpha, c) not in full:
                    return self._make_incomplete(u, at(alpha, c), "KCC3")
        return False

    def kcc4(self, u: Node, v: Node) -> bool:
        v0 = v.at_pred
        ce = v0.ce_label
        alpha = ce.ind
        full = u.full_label
        for c in v.ordered_label:
            if isinstance(c, AtMost):
                pass
            elif isinstance(c, Exists) or (isinstance(c, AtLeast) and c.n >= 1):
                if not self.rc.is_numeric(c.role.inverse):
                    continue
            else:
                continue
            if c.role.inverse not in ce.roles:
                continue
            f = at(alpha, c.body)
            if f not in full and at(alpha, complement(c.body)) not in full:
                return self._make_incomplete(u, f, "KCC4")
        return False

    def kcc5(self, u: Node, v: Node) -> bool:
        if u.status is not F_EXPANDED:
            return False
        v0 = v.at_pred
        ce = v0.ce_label
        if ce.kind != CHECKING_FEASIBILITY:
            return False
        alpha = ce.ind
        full = u.full_label
        labels = v.ordered_label
        for c1 in labels:
            if not isinstance(c1, AtMost):
                continue
            R = c1.role.inverse
            if R not in ce.roles or at(alpha, c1.body) not in full:
                continue
            for c2 in labels:
                if not (isinstance(c2, Exists) or (isinstance(c2, AtLeast) and c2.n >= 1)):
                    continue
                S = c2.role.inverse
                if not self.rc.sub(S, R) or S in ce.roles:
                    continue
                if at(alpha, complement(c2.body)) in full:
                    continue
                yes = at(alpha, Exists(S, TopR(R)))
                no = at(alpha, Forall(S, BOTTOM))
                if yes in u.label or no in u.label:
                    continue
                return self._make_incomplete(u, yes, "KCC5")
        return False

    def _make_incomplete(self, u: Node, fb, rule: str) -> bool:
        u.fml_fb = fb
        self._set(u, INCOMPLETE, rule)
        self._applied(rule, u, [])
        return True

    # ------------------------------------------------------------------
    # node selection
    # ------------------------------------------------------------------

    def _add_candidate(self, node: Node):
        self._candidates.append(node)

    def _pop_candidate(self) -> Optional[Node]:
        if self.rng is None:
            if self._cand_head >= len(self._candidates):
                return None
            node = self._candidates[self._cand_head]
            self._cand_head += 1
            if self._cand_head > 1024 and self._cand_head * 2 > len(self._candidates):
                del self._candidates[:self._cand_head]
                self._cand_head = 0
            return node
        if not self._candidates:
            return None
        i = self.rng.randrange(len(self._candidates))
        self._candidates[i], self._candidates[-1] = self._candidates[-1], self._candidates[i]
        return self._candidates.pop()

    def _select(self) -> Optional[Node]:
        reach = self._reach
        while True:
            node = self._pop_candidate()
            if node is None:
                if not self._parked:
                    return None
                reach.recompute(self.graph.root)
                back = [x for x in self._parked if x in reach.nodes]
                if not back:
                    return None
                for x in sorted(back):
                    self._add_candidate(self._parked.pop(x))
                continue
            if node.status not in (UNEXPANDED, P_EXPANDED):
                continue
            reach.since_recompute += 1
            if reach.stale and reach.since_recompute > len(self.graph) // 8:
                reach.recompute(self.graph.root)
            if node.id not in reach.nodes:
                self._parked[node.id] = node
                continue
            return node

    def _expand(self, v: Node) -> None:
        if v.is_state:
            if v.status is UNEXPANDED:
                self.apply_tp(v)
            elif v.status is P_EXPANDED:
                self.apply_tf(v)
            return
        if v.status is not UNEXPANDED:
            return
        if v.state_pred is not None:
            self._kcc2_eligible.discard(v.state_pred.id)
        if self.apply_nus(v):
            return
        if v.complex:
            self.apply_fs2(v)
        else:
            self.apply_fs1(v)

    # ------------------------------------------------------------------
    # (NUS)
    # ------------------------------------------------------------------

    def apply_nus(self, v: Node) -> bool:
        g = self.graph
        full = v.full_label
        lab = v.label
        ordered = v.ordered_label
        # 1: syntactic branching on disjunctions
        for f in ordered:
            alpha, c = split(f)
            if not isinstance(c, Or):
                continue
            left, right = at(alpha, c.left), at(alpha, c.right)
            if left in full or right in full:
                continue
            X = lab - {f}
            Y = v.rfmls | {f}
            w1 = g.con_to_succ(v, False, v.complex, X | {left}, Y)
            w2 = g.con_to_succ(v, False, v.complex, X | {right}, Y)
            self._set(v, F_EXPANDED, "NUS1")
            self._applied("NUS1", v, [w1, w2])
            return True
        if not v.complex:
            return False
        role_as = sort_formulas(f for f in lab if isinstance(f, RoleAssertion))
        # 2: semantic branching on the successor's membership
        for f in ordered:
            if not isinstance(f, ConceptAssertion):
                continue
            c = f.concept
            if isinstance(c, AtMost):
                pass
            elif isinstance(c, (AtLeast, Exists)) and self.rc.is_numeric(c.role):
                pass
            else:
                continue
            comp = complement(c.body)
            for ra in role_as:
                if ra.a != f.ind or ra.role is not c.role:
                    continue
                yes = ConceptAssertion(ra.b, c.body)
                no = ConceptAssertion(ra.b, comp)
                if yes in full or no in full:
                    continue
                w1 = g.con_to_succ(v, False, True, lab | {yes}, v.rfmls)
                w2 = g.con_to_succ(v, False, True, lab | {no}, v.rfmls)
                self._set(v, F_EXPANDED, "NUS2")
                self._applied("NUS2", v, [w1, w2])
                return True
        # 3: merge two named successors or keep them apart
        for f in sort_formulas(full):
            if not (isinstance(f, ConceptAssertion) and isinstance(f.concept, AtMost)):
                continue
            a, c = f.ind, f.concept
            bs = sorted({g_.b for g_ in full if isinstance(g_, RoleAssertion)
                         and g_.role is c.role and g_.a == a
                         and ConceptAssertion(g_.b, c.body) in full})
            for b, b2 in combinations(bs, 2):
                if Distinct(b, b2) in lab or Distinct(b2, b) in lab:
                    continue
                X = frozenset(rename_individual(x, b2, b) for x in lab)
                Y = frozenset(x if isinstance(x, Equal) else rename_individual(x, b2, b)
                              for x in v.rfmls) | {Equal(b, b2)}
                w1 = g.con_to_succ(v, False, True, X, Y)
                w2 = g.con_to_succ(v, False, True, lab | {Distinct(b, b2)}, v.rfmls)
                self._set(v, F_EXPANDED, "NUS3")
                self._applied("NUS3", v, [w1, w2])
                return True
        # 4: decide whether a named successor is also an S-successor
        for f in ordered:
            if not (isinstance(f, ConceptAssertion) and isinstance(f.concept, AtMost)):
                continue
            a, R = f.ind, f.concept.role
            for ra in role_as:
                if ra.a != a or ra.role is not R:
                    continue
                for h in ordered:
                    if not (isinstance(h, ConceptAssertion) and h.ind == a
                            and isinstance(h.concept, (AtLeast, Exists))):
                        continue
                    S = h.concept.role
                    if not self.rc.sub(S, R):
                        continue
                    pos = RoleAssertion(S, a, ra.b)
                    neg = NegRoleAssertion(S, a, ra.b)
                    if pos in full or neg in full:
                        continue
                    w1 = g.con_to_succ(v, False, True, lab | {pos}, v.rfmls)
                    # the negative assertion also goes into the label so that
                    # the successor differs from v itself
                    w2 = g.con_to_succ(v, False, True, lab | {neg}, v.rfmls | {neg})
                    self._set(v, F_EXPANDED, "NUS4")
                    self._applied("NUS4", v, [w1, w2])
                    return True
        return False

    # ------------------------------------------------------------------
    # (FS)
    # ------------------------------------------------------------------

    def apply_fs1(self, v: Node) -> None:
        u = v.state_pred
        v0 = v.at_pred
        ce = v0.ce_label
        alpha = ce.ind if ce is not None else None
        roles = ce.roles if ce is not None else frozenset()
        ufull = u.full_label if u is not None else frozenset()
        X = set(v.label)
        for c in v.label:
            if not isinstance(c, (AtMost, AtLeast, Exists)):
                continue
            back = c.role.inverse in roles and at(alpha, c.body) in ufull
            if isinstance(c, AtMost):
                X.add(MaxPending(c.n - 1 if back else c.n, c.role, c.body))
            elif isinstance(c, AtLeast) and c.n >= 2:
                X.add(MinPending(c.n - 1 if back else c.n, c.role, c.body))
            elif (isinstance(c, Exists) or c.n == 1) and self.rc.is_numeric(c.role):
                if not back:
                    X.add(MinPending(1, c.role, c.body))
        w = self.graph.con_to_succ(v, True, False, X, v.rfmls)
        self._set(v, F_EXPANDED, "FS1")
        self._applied("FS1", v, [w])

    def apply_fs2(self, v: Node) -> None:
        full = v.full_label
        X = set(v.label)

        def named(a, R, D):
            return len({f.b for f in full if isinstance(f, RoleAssertion) and f.role is R
                        and f.a == a and ConceptAssertion(f.b, D) in full})

        for f in v.label:
            if not isinstance(f, ConceptAssertion):
                continue
            c = f.concept
            if isinstance(c, AtMost):
                m = named(f.ind, c.role, c.body)
                if m > c.n:
                    self._set(v, CLOSED, "FS2")
                    self._applied("FS2", v, [])
                    return
                X.add(ConceptAssertion(f.ind, MaxPending(c.n - m, c.role, c.body)))
            elif isinstance(c, (AtLeast, Exists)) and self.rc.is_numeric(c.role):
                n = 1 if isinstance(c, Exists) else c.n
                m = named(f.ind, c.role, c.body)
                if n > m:
                    X.add(ConceptAssertion(f.ind, MinPending(n - m, c.role, c.body)))
        w = self.graph.con_to_succ(v, True, True, X, v.rfmls)
        self._set(v, F_EXPANDED, "FS2")
        self._applied("FS2", v, [w])

    # ------------------------------------------------------------------
    # (TP) and (TF)
    # ------------------------------------------------------------------

    def _successor_label(self, v: Node, alpha, R, D) -> frozenset:
        rc = self.rc
        Y = {D}
        for f in v.label:
            beta, c = split(f)
            if beta != alpha or not isinstance(c, Forall):
                continue
            if c.role is R:
                Y.add(c.body)
            if rc.sub(R, c.role) and rc.is_transitive(c.role):
                Y.add(c)
        Y |= self.tbox
        return frozenset(Y)

    def apply_tp(self, v: Node) -> None:
        new = []
        for f in v.ordered_label:
            alpha, c = split(f)
            if not isinstance(c, Exists) or self.rc.is_numeric(c.role):
                continue
            Y = self._successor_label(v, alpha, c.role, c.body)
            ce = CELabel(TESTING_CLOSEDNESS, self.rc.supers(c.role), alpha)
            new.append(self.graph.new_succ(v, False, False, Y, (), ce))
        self._kcc2_eligible.add(v.id)
        self._kcc2_q.append(v)
        self._set(v, P_EXPANDED, "TP")
        self._applied("TP", v, new)

    def tf_tuples(self, v: Node) -> list:
        """The tuple set E of the full-expansion rule, in creation order."""
        rc = self.rc
        E: dict = {}
        ordered = v.ordered_label
        for f in ordered:
            alpha, c = split(f)
            if isinstance(c, MinPending):
                t = (rc.supers(c.role), self._successor_label(v, alpha, c.role, c.body), alpha)
                E.setdefault(t, None)
        maxes = []
        for f in ordered:
            alpha, c = split(f)
            if isinstance(c, MaxPending):
                maxes.append((alpha, c))
        for alpha, c in maxes:
            comp = complement(c.body)
            E2: dict = {}
            for (X, Y, beta) in E:
                if beta == alpha and c.role in X and c.body not in Y and comp not in Y:
                    E2.setdefault((X, Y | {c.body}, beta), None)
                    E2.setdefault((X, Y | {comp}, beta), None)
                else:
                    E2.setdefault((X, Y, beta), None)
            E = E2
        changed = True
        while changed:
            changed = False
            tuples = list(E)
            for t1, t2 in combinations(tuples, 2):
                X1, Y1, a1 = t1
                X2, Y2, a2 = t2
                if a1 != a2:
                    continue
                XY = (X1 | X2, Y1 | Y2, a1)
                if XY in E:
                    continue
                ok = False
                for alpha, c in maxes:
                    if alpha == a1 and c.role in X1 and c.role in X2 \
                            and c.body in Y1 and c.body in Y2:
                        ok = True
                        break
                if not ok:
                    for R in X1 & X2:
                        top = TopR(R)
                        if top in Y1 or top in Y2:
                            ok = True
                            break
                if ok and not _concepts_clash(XY[1]):
                    E[XY] = None
                    changed = True
        return list(E)

    def apply_tf(self, v: Node) -> None:
        new = []
        for X, Y, alpha in self.tf_tuples(v):
            ce = CELabel(CHECKING_FEASIBILITY, X, alpha)
            new.append(self.graph.new_succ(v, False, False, Y, (), ce))
        W = [w for w in v.succs if w.ce_label.kind == CHECKING_FEASIBILITY]
        cons = []
        for f in v.ordered_label:
            alpha, c = split(f)
            if isinstance(c, (MinPending, MaxPending)):
                vars = frozenset(w.id for w in W if w.ce_label.ind == alpha
                                 and c.role in w.ce_label.roles and c.body in w.label)
                rel = GE if isinstance(c, MinPending) else LE
                cons.append(LinearConstraint(vars, rel, c.n))
        v.il_vars = tuple(w.id for w in W)
        v.il_constraints = tuple(dict.fromkeys(cons))
        self._set(v, F_EXPANDED, "TF")
        self._applied("TF", v, new)

    # ------------------------------------------------------------------
    # bookkeeping
    # ------------------------------------------------------------------

    def _applied(self, rule: str, node: Node, new) -> None:
        self.stats[f"rule_{rule}"] += 1
        self.stats["rule_applications"] += 1
        if node.expanded_by is None and rule in ("US", "NUS1", "NUS2", "NUS3", "NUS4",
                                                 "FS1", "FS2", "TP", "TF"):
            node.expanded_by = rule
        self._trace(rule, node, new)

    def _trace(self, rule: str, node: Node, new=()) -> None:
        line = f"{rule} {node.id}"
        if new:
            line += " -> " + " ".join(str(w.id) for w in new)
        self.trace_lines.append(line)
        if self.trace_fn is not None:
            self.trace_fn(line)


def _concepts_clash(ys) -> bool:
    for c in ys:
        if isinstance(c, Bottom):
            return True
        if not c.is_pending and complement(c) in ys:
            return True
    return False


def _has_clique(items: list, k: int, adjacent) -> bool:
    """Whether `items` contains k pairwise adjacent elements."""
    if k <= 1:
        return len(items) >= k

    def extend(chosen: list, rest: list) -> bool:
        if len(chosen) == k:
            return True
        for i, x in enumerate(rest):
            if len(chosen) + len(rest) - i < k:
                return False
            if all(adjacent(x, y) for y in chosen):
                if extend(chosen + [x], rest[i + 1:]):
                    return True
        return False

    return extend([], items)


def check_satisfiability(kb: KnowledgeBase, rc: Optional[RBoxClosure] = None, **options) -> Result:
    """Decide satisfiability of a knowledge base; SAT iff the root is not closed."""
    return Tableau(kb, rc, **options).run()
