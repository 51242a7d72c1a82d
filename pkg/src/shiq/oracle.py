"""Brute-force reference: finite-model search with a SAT solver, plus a
plain two-valued evaluator. Used to cross-check the tableau on small KBs.

`find_model` looks for a model with at most `max_size` elements. Finding
one proves satisfiability; not finding one proves nothing in general, but
on small random KBs it is a useful witness against wrong UNSAT verdicts.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Optional

from pysat.formula import IDPool
from pysat.solvers import Solver

from .syntax import (
    And,
    AtLeast,
    AtMost,
    Atom,
    Bottom,
    Concept,
    ConceptAssertion,
    Distinct,
    Exists,
    Forall,
    KnowledgeBase,
    Not,
    Or,
    Role,
    RoleAssertion,
    SubRole,
    Subsumption,
    Equivalence,
    Top,
    TopR,
    TransAxiom,
)


class _Encoder:
    def __init__(self, kb: KnowledgeBase, size: int):
        self.kb = kb
        self.size = size
        self.dom = range(size)
        self.pool = IDPool()
        self.clauses: list[list[int]] = []
        self.true = self.pool.id(("true",))
        self.clauses.append([self.true])
        self._cache: dict = {}

    def var(self, *key) -> int:
        return self.pool.id(key)

    def role(self, r: Role, x: int, y: int) -> int:
        return self.var("role", r.name, y, x) if r.inverted else self.var("role", r.name, x, y)

    # Tseitin helpers; each returns a literal equivalent to the expression
    def land(self, lits: list) -> int:
        lits = list(lits)
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        key = ("and", tuple(sorted(lits)))
        if key in self._cache:
            return self._cache[key]
        t = self.var(*key)
        for l in lits:
            self.clauses.append([-t, l])
        self.clauses.append([t] + [-l for l in lits])
        self._cache[key] = t
        return t

    def lor(self, lits: list) -> int:
        return -self.land([-l for l in lits])

    def at_least(self, lits: list, n: int) -> int:
        if n <= 0:
            return self.true
        if n > len(lits):
            return -self.true
        return self.lor([self.land(list(c)) for c in combinations(lits, n)])

    def holds(self, c: Concept, x: int) -> int:
        key = ("c", c, x)
        if key in self._cache:
            return self._cache[key]
        lit = self._holds(c, x)
        self._cache[key] = lit
        return lit

    def _holds(self, c: Concept, x: int) -> int:
        if isinstance(c, (Top, TopR)):
            return self.true
        if isinstance(c, Bottom):
            return -self.true
        if isinstance(c, Atom):
            return self.var("atom", c.name, x)
        if isinstance(c, Not):
            return -self.holds(c.arg, x)
        if isinstance(c, And):
            return self.land([self.holds(c.left, x), self.holds(c.right, x)])
        if isinstance(c, Or):
            return self.lor([self.holds(c.left, x), self.holds(c.right, x)])
        pairs = [self.land([self.role(c.role, x, y), self.holds(c.body, y)]) for y in self.dom]
        if isinstance(c, Exists):
            return self.lor(pairs)
        if isinstance(c, Forall):
            return self.land([self.lor([-self.role(c.role, x, y), self.holds(c.body, y)])
                              for y in self.dom])
        if isinstance(c, AtLeast):
            return self.at_least(pairs, c.n)
        if isinstance(c, AtMost):
            return -self.at_least(pairs, c.n + 1)
        raise TypeError(f"cannot encode {c}")

    def encode(self) -> None:
        kb = self.kb
        inds = kb.individuals()
        for a in inds:
            lits = [self.var("ind", a, x) for x in self.dom]
            self.clauses.append(lits)
            for l1, l2 in combinations(lits, 2):
                self.clauses.append([-l1, -l2])
        for ax in kb.tbox:
            if isinstance(ax, Subsumption):
                c = Or(Not(ax.sub), ax.sup)
            elif isinstance(ax, Equivalence):
                c = And(Or(Not(ax.left), ax.right), Or(Not(ax.right), ax.left))
            else:
                c = ax
            for x in self.dom:
                self.clauses.append([self.holds(c, x)])
        for a in kb.abox:
            if isinstance(a, ConceptAssertion):
                for x in self.dom:
                    self.clauses.append([-self.var("ind", a.ind, x), self.holds(a.concept, x)])
            elif isinstance(a, RoleAssertion):
                for x, y in product(self.dom, self.dom):
                    self.clauses.append([-self.var("ind", a.a, x), -self.var("ind", a.b, y),
                                         self.role(a.role, x, y)])
            elif isinstance(a, Distinct):
                for x in self.dom:
                    self.clauses.append([-self.var("ind", a.a, x), -self.var("ind", a.b, x)])
        for ax in kb.rbox:
            if isinstance(ax, SubRole):
                for x, y in product(self.dom, self.dom):
                    self.clauses.append([-self.role(ax.sub, x, y), self.role(ax.sup, x, y)])
            elif isinstance(ax, TransAxiom):
                for x, y, z in product(self.dom, self.dom, self.dom):
                    self.clauses.append([-self.role(ax.role, x, y), -self.role(ax.role, y, z),
                                         self.role(ax.role, x, z)])

    def decode(self, model: list) -> dict:
        true = {l for l in model if l > 0}
        inds, concepts, roles = {}, {}, {}
        for key, vid in list(self.pool.obj2id.items()):
            if vid not in true:
                continue
            if key[0] == "ind":
                inds[key[1]] = key[2]
            elif key[0] == "atom":
                concepts.setdefault(key[1], set()).add(key[2])
            elif key[0] == "role":
                roles.setdefault(key[1], set()).add((key[2], key[3]))
        return {"domain": list(self.dom), "individuals": inds, "concepts": concepts,
                "roles": roles}


def find_model(kb: KnowledgeBase, max_size: int = 4, min_size: int = 1) -> Optional[dict]:
    """A model with at most max_size elements as a plain dict, or None.

    Keys: domain, individuals (name -> element), concepts (name -> set),
    roles (name -> set of pairs).
    """
    for size in range(max(1, min_size), max_size + 1):
        enc = _Encoder(kb, size)
        enc.encode()
        with Solver(name="minisat22", bootstrap_with=enc.clauses) as s:
            if s.solve():
                return enc.decode(s.get_model())
    return None


# --------------------------------------------------------------------------
# independent two-valued evaluation
# --------------------------------------------------------------------------


def _ext(model: dict, r: Role) -> set:
    pairs = model["roles"].get(r.name, set())
    return {(y, x) for x, y in pairs} if r.inverted else set(pairs)


def holds(model: dict, c: Concept, x) -> bool:
    if isinstance(c, (Top, TopR)):
        return True
    if isinstance(c, Bottom):
        return False
    if isinstance(c, Atom):
        return x in model["concepts"].get(c.name, ())
    if isinstance(c, Not):
        return not holds(model, c.arg, x)
    if isinstance(c, And):
        return holds(model, c.left, x) and holds(model, c.right, x)
    if isinstance(c, Or):
        return holds(model, c.left, x) or holds(model, c.right, x)
    ys = [y for (x2, y) in _ext(model, c.role) if x2 == x]
    k = sum(1 for y in ys if holds(model, c.body, y))
    if isinstance(c, Exists):
        return k >= 1
    if isinstance(c, Forall):
        return k == len(ys)
    if isinstance(c, AtLeast):
        return k >= c.n
    if isinstance(c, AtMost):
        return k <= c.n
    raise TypeError(f"cannot evaluate {c}")


def satisfies(model: dict, kb: KnowledgeBase) -> bool:
    """Whether the finite interpretation `model` is a model of kb."""
    ind = model["individuals"]
    for ax in kb.rbox:
        if isinstance(ax, SubRole):
            if not _ext(model, ax.sub) <= _ext(model, ax.sup):
                return False
        elif isinstance(ax, TransAxiom):
            e = _ext(model, ax.role)
            if any((x, z) not in e for (x, y) in e for (y2, z) in e if y == y2):
                return False
    for ax in kb.tbox:
        for x in model["domain"]:
            if isinstance(ax, Subsumption):
                if holds(model, ax.sub, x) and not holds(model, ax.sup, x):
                    return False
            elif isinstance(ax, Equivalence):
                if holds(model, ax.left, x) != holds(model, ax.right, x):
                    return False
            elif not holds(model, ax, x):
                return False
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            if a.ind not in ind or not holds(model, a.concept, ind[a.ind]):
                return False
        elif isinstance(a, RoleAssertion):
            if a.a not in ind or a.b not in ind or (ind[a.a], ind[a.b]) not in _ext(model, a.role):
                return False
        elif isinstance(a, Distinct):
            if ind.get(a.a) == ind.get(a.b):
                return False
    return True


def as_oracle_model(interp) -> dict:
    """View a modelgen Interpretation in the oracle's dict form."""
    return {"domain": list(interp.domain), "individuals": dict(interp.individuals),
            "concepts": {k: set(v) for k, v in interp.concepts.items()},
            "roles": {k: set(v) for k, v in interp.roles.items()}}
