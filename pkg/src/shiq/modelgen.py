"""Reading a model off a finished tableau, and checking models against a KB.

Extraction follows saturation paths from the root down to a complex state,
then grows trees below it: every unresolved element picks a solution of the
state's linear constraints and receives that many copies of each successor.
The result can be infinite, so growth stops at a depth cap and an element
budget; elements left unresolved form the frontier, and semantic checks
that depend on what lies beyond them are reported as unknown.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .graph import CHECKING_FEASIBILITY, Node, Status, TableauGraph
from .ilfc import find_solution
from .rbox import RBoxClosure
from .syntax import (
    And,
    AtLeast,
    AtMost,
    Atom,
    Bottom,
    Concept,
    ConceptAssertion,
    Distinct,
    Equal,
    Exists,
    Forall,
    KnowledgeBase,
    Not,
    Or,
    Role,
    RoleAssertion,
    SubRole,
    Top,
    TopR,
    TransAxiom,
    complement,
    internalize_tbox,
    normalize_kb,
)

DEFAULT_DEPTH = 32
DEFAULT_MAX_ELEMENTS = 20000


class ExtractionError(RuntimeError):
    pass


@dataclass
class ModelGraph:
    domain: list = field(default_factory=list)
    individuals: dict = field(default_factory=dict)  # name -> element
    concepts: dict = field(default_factory=dict)  # element -> set of concepts
    edges: dict = field(default_factory=lambda: defaultdict(set))  # role -> {(x, y)}
    frontier: set = field(default_factory=set)
    origin: dict = field(default_factory=dict)  # element -> tableau node id
    depth: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return not self.frontier

    def add_edge(self, role: Role, x: int, y: int):
        self.edges[role].add((x, y))
        self.edges[role.inverse].add((y, x))


def _eligible(w: Node) -> bool:
    if w.is_state:
        return w.status not in (Status.CLOSED, Status.INCOMPLETE)
    return w.status is not Status.CLOSED


def saturation_path(graph: TableauGraph, v: Node) -> list[Node]:
    """v = v0, ..., vk through non-closed non-states to a usable state.

    Open successors are preferred, then the lowest id. Below an open node
    only open nodes are visited, which keeps the path inside the part of the
    graph that was fully expanded.
    """
    if v.is_state or v.status is Status.CLOSED:
        raise ExtractionError(f"node {v.id} has no saturation path")
    path = [v]
    seen = {v.id}
    while not path[-1].is_state:
        x = path[-1]
        options = [w for w in x.succs if _eligible(w) and w.id not in seen]
        if x.status is Status.OPEN:
            options = [w for w in options if w.status is Status.OPEN] or options
        if not options:
            raise ExtractionError(f"dead end at node {x.id} on a saturation path")
        options.sort(key=lambda w: (w.status is not Status.OPEN, w.id))
        nxt = options[0]
        seen.add(nxt.id)
        path.append(nxt)
    return path


class _Extractor:
    def __init__(self, tableau, depth_cap: int, max_elements: int):
        self.tab = tableau
        self.graph = tableau.graph
        self.depth_cap = depth_cap
        self.max_elements = max_elements
        self.solutions: dict = {}

    def solution(self, u: Node) -> dict:
        sol = self.solutions.get(u.id)
        if sol is None:
            extra = ()
            if u.status is Status.OPEN:
                extra = {w.id for w in u.succs if w.ce_label.kind == CHECKING_FEASIBILITY
                         and w.status is not Status.OPEN}
            sol = find_solution(self.tab.il_problem(u, extra))
            if sol is None:
                raise ExtractionError(f"constraints of state {u.id} have no solution")
            self.solutions[u.id] = sol
        return sol

    def children(self, u: Node, ind: Optional[str]) -> list:
        """(successor, copies) pairs for one element attached to state u."""
        out = []
        sol = None
        for w in u.succs:
            if w.ce_label is None or w.ce_label.ind != ind:
                continue
            if w.ce_label.kind == CHECKING_FEASIBILITY:
                if sol is None:
                    sol = self.solution(u)
                n = sol.get(w.id, 0)
            else:
                n = 1
            if n > 0:
                out.append((w, n))
        return out

    def run(self) -> ModelGraph:
        root = self.graph.root
        if root.status is Status.CLOSED:
            raise ExtractionError("the tableau is closed; there is no model")
        path = saturation_path(self.graph, root)
        vk = path[-1]
        full = vk.full_label
        m = ModelGraph()
        inds = sorted({x for f in vk.label for x in _individuals(f)})
        elem = {}
        for a in inds:
            e = len(m.domain)
            m.domain.append(e)
            elem[a] = e
            m.individuals[a] = e
            m.concepts[e] = set()
            m.origin[e] = vk.id
            m.depth[e] = 0
        for f in full:
            if isinstance(f, ConceptAssertion) and f.ind in elem:
                m.concepts[elem[f.ind]].add(f.concept)
            elif isinstance(f, RoleAssertion) and f.a in elem and f.b in elem:
                m.add_edge(f.role, elem[f.a], elem[f.b])
        # individuals merged away map to their representative
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for f in vk.rfmls:
            if isinstance(f, Equal):
                ra, rb = find(f.a), find(f.b)
                if ra != rb:
                    keep, drop = (ra, rb) if ra in elem else (rb, ra)
                    parent[drop] = keep
        for a in self.tab.kb.individuals():
            if a not in m.individuals:
                rep = find(a)
                m.individuals[a] = elem.get(rep, m.domain[0] if m.domain else 0)

        # y -> (state, individual or None)
        anchor = {e: (vk, a) for a, e in elem.items()}
        queue = list(anchor)
        head = 0
        while head < len(queue):
            y = queue[head]
            head += 1
            u, ind = anchor[y]
            if m.depth[y] >= self.depth_cap:
                m.frontier.add(y)
                continue
            kids = self.children(u, ind)
            if len(m.domain) + sum(n for _, n in kids) > self.max_elements:
                m.frontier.add(y)
                continue
            for w0, n in kids:
                wpath = saturation_path(self.graph, w0)
                wh = wpath[-1]
                cs = {f for f in wh.full_label if isinstance(f, Concept)}
                for _ in range(n):
                    z = len(m.domain)
                    m.domain.append(z)
                    for r in w0.ce_label.roles:
                        m.add_edge(r, y, z)
                    m.concepts[z] = set(cs)
                    m.origin[z] = wh.id
                    m.depth[z] = m.depth[y] + 1
                    anchor[z] = (wh, None)
                    queue.append(z)
        return m


def _individuals(f) -> tuple:
    return () if isinstance(f, Concept) else f.individuals()


def extract_model(tableau, depth_cap: int = DEFAULT_DEPTH,
                  max_elements: int = DEFAULT_MAX_ELEMENTS) -> ModelGraph:
    """Model graph of a finished tableau whose root is not closed."""
    return _Extractor(tableau, depth_cap, max_elements).run()


# --------------------------------------------------------------------------
# interpretations
# --------------------------------------------------------------------------


@dataclass
class Interpretation:
    domain: list
    individuals: dict  # name -> element
    concepts: dict  # concept name -> set of elements
    roles: dict  # role name -> set of pairs
    frontier: set = field(default_factory=set)

    def role_ext(self, r: Role) -> set:
        pairs = self.roles.get(r.name, set())
        if r.inverted:
            return {(y, x) for x, y in pairs}
        return pairs

    def successors(self, r: Role) -> dict:
        out = defaultdict(set)
        for x, y in self.role_ext(r):
            out[x].add(y)
        return out


def close_relations(edges: dict, rc: RBoxClosure) -> dict:
    """E′: the least relations containing E, closed under ⊑ and transitivity."""
    rel = defaultdict(set)
    for r, pairs in edges.items():
        rel[r] |= set(pairs)
    changed = True
    while changed:
        changed = False
        for r in list(rel):
            pairs = rel[r]
            for s in rc.supers(r):
                if s is not r and not pairs <= rel[s]:
                    rel[s] |= pairs
                    changed = True
            if rc.is_transitive(r) and pairs:
                closed = _transitive_closure(pairs)
                if closed != pairs:
                    rel[r] = closed
                    changed = True
            # keep R and R⁻ mirror images
            inv = {(y, x) for x, y in rel[r]}
            if not inv <= rel[r.inverse]:
                rel[r.inverse] |= inv
                changed = True
    return rel


def _transitive_closure(pairs: set) -> set:
    succ = defaultdict(set)
    for x, y in pairs:
        succ[x].add(y)
    out = set()
    for x in list(succ):
        seen = set()
        stack = list(succ[x])
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ.get(y, ()))
        out |= {(x, y) for y in seen}
    return out


def corresponding_model(m: ModelGraph, rc: RBoxClosure) -> Interpretation:
    rel = close_relations(m.edges, rc)
    roles = defaultdict(set)
    for r, pairs in rel.items():
        if r.inverted:
            roles[r.name] |= {(y, x) for x, y in pairs}
        else:
            roles[r.name] |= pairs
    concepts = defaultdict(set)
    for x, cs in m.concepts.items():
        for c in cs:
            if isinstance(c, Atom):
                concepts[c.name].add(x)
    return Interpretation(list(m.domain), dict(m.individuals), dict(concepts), dict(roles),
                          set(m.frontier))


# --------------------------------------------------------------------------
# checking
# --------------------------------------------------------------------------


class Evaluator:
    """Three-valued concept evaluation: True, False or None (unknown).

    Quantified constructs are unknown where the interpretation was cut off:
    at frontier elements, and for non-simple roles at elements that reach
    the frontier, since transitivity may add successors beyond it.
    """

    def __init__(self, interp: Interpretation, rc: Optional[RBoxClosure] = None):
        self.i = interp
        self.rc = rc
        self._succ: dict = {}
        self._memo: dict = {}

    def succs(self, r: Role) -> dict:
        s = self._succ.get(r)
        if s is None:
            s = self._succ[r] = self.i.successors(r)
        return s

    def _cut(self, x, r: Role, ys) -> bool:
        if x in self.i.frontier:
            return True
        if self.i.frontier and self.rc is not None and not self.rc.is_simple(r):
            return any(y in self.i.frontier for y in ys)
        return False

    def eval(self, c: Concept, x) -> Optional[bool]:
        key = (c, x)
        if key in self._memo:
            return self._memo[key]
        v = self._eval(c, x)
        self._memo[key] = v
        return v

    def _eval(self, c: Concept, x) -> Optional[bool]:
        if isinstance(c, (Top, TopR)):
            return True
        if isinstance(c, Bottom):
            return False
        if isinstance(c, Atom):
            return x in self.i.concepts.get(c.name, ())
        if isinstance(c, Not):
            v = self.eval(c.arg, x)
            return None if v is None else not v
        if isinstance(c, And):
            a, b = self.eval(c.left, x), self.eval(c.right, x)
            if a is False or b is False:
                return False
            return None if a is None or b is None else True
        if isinstance(c, Or):
            a, b = self.eval(c.left, x), self.eval(c.right, x)
            if a is True or b is True:
                return True
            return None if a is None or b is None else False
        ys = self.succs(c.role).get(x, ())
        cut = self._cut(x, c.role, ys)
        vals = [self.eval(c.body, y) for y in ys]
        yes = sum(1 for v in vals if v is True)
        maybe = sum(1 for v in vals if v is None)
        if isinstance(c, Exists):
            c = AtLeast(1, c.role, c.body)
        if isinstance(c, Forall):
            if any(v is False for v in vals):
                return False
            return None if cut or maybe else True
        if isinstance(c, AtLeast):
            if yes >= c.n:
                return True
            return None if cut or yes + maybe >= c.n else False
        if isinstance(c, AtMost):
            if yes > c.n:
                return False
            return None if cut or yes + maybe > c.n else True
        raise TypeError(f"cannot evaluate {c}")


PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class Check:
    kind: str
    subject: str
    status: str
    detail: str = ""

    def __str__(self):
        s = f"{self.status.upper():7} {self.kind:6} {self.subject}"
        return s + (f"  ({self.detail})" if self.detail else "")


@dataclass
class ModelReport:
    checks: list

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def unknowns(self) -> list:
        return [c for c in self.checks if c.status == UNKNOWN]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


def _status(v: Optional[bool]) -> str:
    return UNKNOWN if v is None else (PASS if v else FAIL)


def verify_model(interp: Interpretation, kb: KnowledgeBase,
                 rc: Optional[RBoxClosure] = None) -> ModelReport:
    """Check every assertion, TBox axiom and role axiom by direct evaluation."""
    from .rbox import closure_for_kb

    kb_n = normalize_kb(kb)
    rc = rc or closure_for_kb(kb_n)
    ev = Evaluator(interp, rc)
    checks = []
    ind = interp.individuals

    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            if a.ind not in ind:
                checks.append(Check("abox", str(a), FAIL, "individual not interpreted"))
                continue
            checks.append(Check("abox", str(a), _status(ev.eval(a.concept, ind[a.ind]))))
        elif isinstance(a, RoleAssertion):
            ok = a.a in ind and a.b in ind and (ind[a.a], ind[a.b]) in interp.role_ext(a.role)
            checks.append(Check("abox", str(a), _status(ok)))
        elif isinstance(a, Distinct):
            ok = a.a in ind and a.b in ind and ind[a.a] != ind[a.b]
            checks.append(Check("abox", str(a), _status(ok)))

    for c in internalize_tbox(kb.tbox):
        bad, unknown = [], []
        for x in interp.domain:
            v = ev.eval(c, x)
            if v is False:
                bad.append(x)
            elif v is None:
                unknown.append(x)
        if bad:
            checks.append(Check("tbox", str(c), FAIL, f"fails at {bad[:10]}"))
        elif unknown:
            checks.append(Check("tbox", str(c), UNKNOWN, f"undetermined at {len(unknown)} element(s)"))
        else:
            checks.append(Check("tbox", str(c), PASS))

    for ax in kb.rbox:
        if isinstance(ax, SubRole):
            ok = interp.role_ext(ax.sub) <= interp.role_ext(ax.sup)
            checks.append(Check("rbox", str(ax), _status(ok)))
        elif isinstance(ax, TransAxiom):
            pairs = interp.role_ext(ax.role)
            ok = _transitive_closure(pairs) <= pairs
            checks.append(Check("rbox", str(ax), _status(ok)))
    return ModelReport(checks)


def check_model_graph(m: ModelGraph, rc: RBoxClosure) -> list[str]:
    """Violations of the local saturation conditions at non-frontier elements."""
    out = []
    succ = defaultdict(lambda: defaultdict(set))
    for r, pairs in m.edges.items():
        for x, y in pairs:
            succ[r][x].add(y)
            if (y, x) not in m.edges.get(r.inverse, ()):
                out.append(f"edge {r}({x},{y}) lacks its inverse")
            for s in rc.supers(r):
                if (x, y) not in m.edges.get(s, ()):
                    out.append(f"edge {r}({x},{y}) not in super-role {s}")
    for x in m.domain:
        cs = m.concepts.get(x, set())
        for c in cs:
            if isinstance(c, Bottom):
                out.append(f"⊥ at {x}")
            elif not c.is_pending and complement(c) in cs:
                out.append(f"clash {c} at {x}")
            if isinstance(c, And) and not {c.left, c.right} <= cs:
                out.append(f"{c} not decomposed at {x}")
            if isinstance(c, Or) and c.left not in cs and c.right not in cs:
                out.append(f"{c} not decomposed at {x}")
            if isinstance(c, Forall):
                for r in rc.subs(c.role):
                    if Forall(r, c.body) not in cs:
                        out.append(f"{c} lacks ∀{r} at {x}")
                for y in succ[c.role].get(x, ()):
                    if c.body not in m.concepts.get(y, ()):
                        out.append(f"{c} not applied to {y} at {x}")
                    if rc.is_transitive(c.role) and c not in m.concepts.get(y, ()):
                        out.append(f"{c} not propagated to {y} at {x}")
            if x in m.frontier:
                continue
            if isinstance(c, (Exists, AtLeast, AtMost)):
                ys = succ[c.role].get(x, set())
                k = sum(1 for y in ys if c.body in m.concepts.get(y, ()))
                if isinstance(c, Exists) and k < 1:
                    out.append(f"{c} unwitnessed at {x}")
                if isinstance(c, AtLeast) and k < c.n:
                    out.append(f"{c} has {k} witnesses at {x}")
                if isinstance(c, AtMost):
                    if k > c.n:
                        out.append(f"{c} has {k} witnesses at {x}")
                    comp = complement(c.body)
                    for y in ys:
                        cy = m.concepts.get(y, ())
                        if c.body not in cy and comp not in cy:
                            out.append(f"{c}: {y} undecided at {x}")
    return out


# --------------------------------------------------------------------------
# model files
# --------------------------------------------------------------------------


def format_model(interp: Interpretation) -> str:
    lines = ["# model"]
    lines += [f"element {x}" for x in interp.domain]
    lines += [f"individual {a} = {x}" for a, x in sorted(interp.individuals.items())]
    for name in sorted(interp.concepts):
        xs = " ".join(str(x) for x in sorted(interp.concepts[name]))
        lines.append(f"concept {name}: {xs}".rstrip())
    for name in sorted(interp.roles):
        ps = " ".join(f"({x},{y})" for x, y in sorted(interp.roles[name]))
        lines.append(f"role {name}: {ps}".rstrip())
    if interp.frontier:
        lines.append("frontier " + " ".join(str(x) for x in sorted(interp.frontier)))
    return "\n".join(lines) + "\n"


class ModelSyntaxError(ValueError):
    pass


def parse_model(text: str) -> Interpretation:
    import re

    domain, inds, concepts, roles, frontier = [], {}, {}, {}, set()
    pair = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "element":
                domain.append(int(rest))
            elif head == "individual":
                name, _, x = rest.partition("=")
                inds[name.strip()] = int(x)
            elif head == "concept":
                name, _, xs = rest.partition(":")
                concepts[name.strip()] = {int(x) for x in xs.split()}
            elif head == "role":
                name, _, ps = rest.partition(":")
                if pair.sub("", ps).strip():
                    raise ModelSyntaxError(f"line {lineno}: expected pairs like (0,1)")
                roles[name.strip()] = {(int(a), int(b)) for a, b in pair.findall(ps)}
            elif head == "frontier":
                frontier = {int(x) for x in rest.split()}
            else:
                raise ModelSyntaxError(f"line {lineno}: unknown entry {head!r}")
        except ValueError as e:
            if isinstance(e, ModelSyntaxError):
                raise
            raise ModelSyntaxError(f"line {lineno}: {e}") from None
    known = set(domain)
    used = set(inds.values()) | frontier
    used.update(x for xs in concepts.values() for x in xs)
    used.update(x for ps in roles.values() for p in ps for x in p)
    if used - known:
        raise ModelSyntaxError(f"undeclared element(s): {sorted(used - known)[:10]}")
    return Interpretation(domain, inds, concepts, roles, frontier)


def model_for(result, depth_cap: int = DEFAULT_DEPTH,
              max_elements: int = DEFAULT_MAX_ELEMENTS) -> tuple[ModelGraph, Interpretation]:
    m = extract_model(result.tableau, depth_cap, max_elements)
    return m, corresponding_model(m, result.tableau.rc)
