"""Role hierarchy closure: subsumption, transitivity, simplicity, numericity."""

from __future__ import annotations

from typing import Iterable

from .syntax import Role, SubRole, TransAxiom


class NonSimpleRoleError(ValueError):
    """A number restriction uses a role that is transitive or has a transitive subrole."""

    def __init__(self, roles):
        self.roles = sorted(roles, key=Role.sort_key)
        names = ", ".join(str(r) for r in self.roles)
        super().__init__(f"non-simple role(s) under a number restriction: {names}")


class RBoxClosure:
    """Precomputed role tables for a fixed RBox.

    Roles that never occur in the RBox are still handled: they are only
    subsumed by themselves, not transitive, simple, and numeric iff they
    were passed as number-restriction roles.
    """

    def __init__(self, supers: dict, transitive: frozenset, numeric: frozenset):
        self._supers = supers
        self._subs: dict[Role, set] = {}
        for r, ss in supers.items():
            for s in ss:
                self._subs.setdefault(s, set()).add(r)
        self._subs = {s: frozenset(rs) for s, rs in self._subs.items()}
        self.transitive = transitive
        self.numeric = numeric
        self.roles = frozenset(supers)

    def sub(self, r: Role, s: Role) -> bool:
        """R ⊑_R S."""
        if r is s:
            return True
        return s in self._supers.get(r, ())

    def supers(self, r: Role) -> frozenset:
        return self._supers.get(r) or frozenset((r,))

    def subs(self, s: Role) -> frozenset:
        return self._subs.get(s) or frozenset((s,))

    def is_transitive(self, r: Role) -> bool:
        return r in self.transitive

    def is_simple(self, r: Role) -> bool:
        return not any(s in self.transitive for s in self.subs(r))

    def is_numeric(self, r: Role) -> bool:
        return r in self.numeric

    @property
    def subsumes(self) -> set:
        return {(r, s) for r, ss in self._supers.items() for s in ss}

    @property
    def simple_roles(self) -> frozenset:
        return frozenset(r for r in self.roles if self.is_simple(r))


def compute_rbox_closure(rbox: Iterable, number_roles: Iterable[Role] = (),
                         roles: Iterable[Role] = ()) -> RBoxClosure:
    """Close an RBox under reflexivity, inversion and transitivity of ⊑.

    `number_roles` are the roles occurring under a number restriction; they
    seed the numeric roles and must be simple. `roles` adds further roles to
    the universe of the tables.
    """
    rbox = list(rbox)
    number_roles = set(number_roles)
    universe: set[Role] = set(roles) | number_roles
    edges: set[tuple[Role, Role]] = set()
    trans: set[Role] = set()
    for ax in rbox:
        if isinstance(ax, SubRole):
            universe.update((ax.sub, ax.sup))
            edges.add((ax.sub, ax.sup))
            edges.add((ax.sub.inverse, ax.sup.inverse))
        elif isinstance(ax, TransAxiom):
            universe.add(ax.role)
            trans.update((ax.role, ax.role.inverse))
        else:
            raise TypeError(f"not a role axiom: {ax!r}")
    universe |= {r.inverse for r in universe}

    succ: dict[Role, set] = {r: set() for r in universe}
    for a, b in edges:
        succ[a].add(b)
    supers: dict[Role, frozenset] = {}
    for r in universe:
        seen = {r}
        stack = [r]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        supers[r] = frozenset(seen)

    rc = RBoxClosure(supers, frozenset(trans), frozenset())
    bad = {r for r in number_roles if not rc.is_simple(r)}
    if bad:
        raise NonSimpleRoleError(bad)

    numeric: set[Role] = set()
    stack = list(number_roles)
    while stack:
        r = stack.pop()
        if r in numeric:
            continue
        numeric.add(r)
        stack.append(r.inverse)
        stack.extend(rc.subs(r))
    rc.numeric = frozenset(numeric)
    return rc


def closure_for_kb(kb) -> RBoxClosure:
    return compute_rbox_closure(kb.rbox, kb.number_restriction_roles(), kb.roles())
