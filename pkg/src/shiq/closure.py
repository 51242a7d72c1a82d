"""The closure set of a knowledge base and a size measure for knowledge bases.

Pending restrictions come in ranges (⪯0 .. ⪯n for every ≤n R.C), and role
and equality assertions range over all pairs of individuals, so the set is
kept symbolic: membership and cardinality are computed without listing
every element. `iter(closure)` does list them and should be reserved for
small knowledge bases.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterator

from .rbox import RBoxClosure
from .syntax import (
    BOTTOM,
    And,
    Assertion,
    AtLeast,
    AtMost,
    Atom,
    Bottom,
    ConceptAssertion,
    Concept,
    Distinct,
    Equal,
    Equivalence,
    Exists,
    Forall,
    KnowledgeBase,
    MaxPending,
    MinPending,
    NegRoleAssertion,
    Not,
    Or,
    RoleAssertion,
    SubRole,
    Subsumption,
    Top,
    TopR,
    TransAxiom,
    complement,
    internalize_tbox,
    normalize_kb,
    subconcepts,
)


class Closure:
    def __init__(self, concepts: frozenset, max_pending: dict, min_pending: dict,
                 individuals: frozenset, assertion_roles: frozenset, abox: frozenset):
        self.concepts = concepts
        self.max_pending = max_pending  # (role, body) -> largest n with ⪯n allowed
        self.min_pending = min_pending  # (role, body) -> largest n with ⪰n allowed (from 1)
        self.individuals = individuals
        self.assertion_roles = assertion_roles
        self.abox = abox
        self._extra = sum(1 for a in abox if not self._generated(a))

    def has_concept(self, c: Concept) -> bool:
        if isinstance(c, MaxPending):
            top = self.max_pending.get((c.role, c.body))
            return top is not None and 0 <= c.n <= top
        if isinstance(c, MinPending):
            top = self.min_pending.get((c.role, c.body))
            return top is not None and 1 <= c.n <= top
        return c in self.concepts

    def __contains__(self, f) -> bool:
        return f in self.abox or self._generated(f)

    def _generated(self, f) -> bool:
        if isinstance(f, Concept):
            return self.has_concept(f)
        if isinstance(f, ConceptAssertion):
            return f.ind in self.individuals and self.has_concept(f.concept)
        if isinstance(f, (RoleAssertion, NegRoleAssertion)):
            return (f.role in self.assertion_roles and f.a in self.individuals
                    and f.b in self.individuals)
        if isinstance(f, (Distinct, Equal)):
            return f.a in self.individuals and f.b in self.individuals
        return False

    def concept_count(self) -> int:
        return (len(self.concepts) + sum(n + 1 for n in self.max_pending.values())
                + sum(self.min_pending.values()))

    def __len__(self) -> int:
        k = len(self.individuals)
        n = self.concept_count() * (1 + k)
        n += 2 * len(self.assertion_roles) * k * k
        n += 2 * k * k
        return n + self._extra

    def __iter__(self) -> Iterator:
        yield from self._iter_concepts()
        inds = sorted(self.individuals)
        for a in inds:
            for c in self._iter_concepts():
                yield ConceptAssertion(a, c)
        for r in sorted(self.assertion_roles, key=lambda r: r.sort_key()):
            for a in inds:
                for b in inds:
                    yield RoleAssertion(r, a, b)
                    yield NegRoleAssertion(r, a, b)
        for a in inds:
            for b in inds:
                yield Equal(a, b)
                yield Distinct(a, b)

    def _iter_concepts(self) -> Iterator[Concept]:
        yield from sorted(self.concepts, key=lambda c: c.sort_key())
        for (r, c), top in sorted(self.max_pending.items(), key=lambda kv: str(kv[0][1]) + str(kv[0][0])):
            for n in range(top + 1):
                yield MaxPending(n, r, c)
        for (r, c), top in sorted(self.min_pending.items(), key=lambda kv: str(kv[0][1]) + str(kv[0][0])):
            for n in range(1, top + 1):
                yield MinPending(n, r, c)

    def stats(self) -> dict:
        return {
            "concepts": len(self.concepts),
            "pending_ranges": len(self.max_pending) + len(self.min_pending),
            "individuals": len(self.individuals),
            "assertion_roles": len(self.assertion_roles),
            "size": len(self),
        }


def closure_set(kb: KnowledgeBase, rc: RBoxClosure) -> Closure:
    """Least set closed under the closure clauses; see the module docstring."""
    kb = normalize_kb(kb)
    tbox = internalize_tbox(kb.tbox)
    seeds: list[Concept] = list(tbox)
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            seeds.append(a.concept)

    concepts: set[Concept] = set()
    todo: list[Concept] = []

    def add(c: Concept):
        if c not in concepts:
            concepts.add(c)
            todo.append(c)

    for c in seeds:
        for d in subconcepts(c):
            add(d)
    numeric = rc.numeric
    for r in numeric:
        for s in rc.subs(r):
            if s in numeric:
                add(Exists(s, TopR(r)))
                add(Forall(s, BOTTOM))
                add(TopR(r))
                add(BOTTOM)

    max_pending: dict = defaultdict(int)
    min_pending: dict = defaultdict(int)
    while todo:
        c = todo.pop()
        for d in subconcepts(c):
            add(d)
        add(complement(c))
        if isinstance(c, Forall):
            for r in rc.subs(c.role):
                add(Forall(r, c.body))
        elif isinstance(c, AtMost):
            if c.n == 0:
                add(Forall(c.role, complement(c.body)))
            key = (c.role, c.body)
            max_pending[key] = max(max_pending.get(key, 0), c.n)
        elif isinstance(c, AtLeast):
            if c.n >= 1:
                key = (c.role, c.body)
                min_pending[key] = max(min_pending.get(key, 0), c.n)
        elif isinstance(c, Exists) and rc.is_numeric(c.role):
            key = (c.role, c.body)
            min_pending[key] = max(min_pending.get(key, 0), 1)

    individuals = set(kb.individuals())
    roles = set()
    for a in kb.abox:
        if isinstance(a, (RoleAssertion, NegRoleAssertion)):
            roles.add(a.role)
    # closed under inverse, super- and subroles
    stack = list(roles)
    roles = set()
    while stack:
        r = stack.pop()
        if r in roles:
            continue
        roles.add(r)
        stack.append(r.inverse)
        stack.extend(rc.supers(r))
        stack.extend(rc.subs(r))

    return Closure(frozenset(concepts), dict(max_pending), dict(min_pending),
                   frozenset(individuals), frozenset(roles), frozenset(kb.abox))


def concept_size(c: Concept) -> int:
    if isinstance(c, (Top, Bottom, Atom)):
        return 1
    if isinstance(c, TopR):
        return 2
    if isinstance(c, Not):
        return 1 + concept_size(c.arg)
    if isinstance(c, (And, Or)):
        return 1 + concept_size(c.left) + concept_size(c.right)
    if isinstance(c, (Exists, Forall)):
        return 2 + concept_size(c.body)
    # counting restrictions: constructor, role, number in binary
    return 2 + max(1, c.n.bit_length()) + concept_size(c.body)


def kb_size(kb: KnowledgeBase) -> int:
    """Symbol count with numbers measured by their binary length."""
    size = 0
    for ax in kb.rbox:
        if isinstance(ax, SubRole):
            size += 3
        elif isinstance(ax, TransAxiom):
            size += 2
    for ax in kb.tbox:
        if isinstance(ax, Subsumption):
            size += 1 + concept_size(ax.sub) + concept_size(ax.sup)
        elif isinstance(ax, Equivalence):
            size += 1 + concept_size(ax.left) + concept_size(ax.right)
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            size += 1 + concept_size(a.concept)
        elif isinstance(a, (RoleAssertion, NegRoleAssertion)):
            size += 3
        elif isinstance(a, (Distinct, Equal)):
            size += 3
        elif isinstance(a, Assertion):
            size += 1
    return size
