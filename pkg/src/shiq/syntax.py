"""Abstract syntax for SHIQ: roles, concepts, ABox assertions and knowledge bases.

All syntax objects are interned: building the same structure twice returns
the same object, so equality and hashing are by identity. Label sets of the
tableau are plain frozensets of these objects.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

MAX_NUMBER = 2**60

_intern_lock = threading.Lock()
_intern_table: dict = {}


class Term:
    """Base class of interned syntax objects."""

    __slots__ = ("__weakref__",)
    _fields: tuple[str, ...] = ()

    def __new__(cls, *args):
        key = (cls, args)
        obj = _intern_table.get(key)
        if obj is not None:
            return obj
        with _intern_lock:
            obj = _intern_table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                for name, value in zip(cls._fields, args):
                    object.__setattr__(obj, name, value)
                obj._setup()
                _intern_table[key] = obj
        return obj

    def _setup(self) -> None:
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self._fields))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __repr__(self) -> str:
        args = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"


# --------------------------------------------------------------------------
# Roles
# --------------------------------------------------------------------------


class Role(Term):
    """A role name or the inverse of a role name."""

    __slots__ = ("name", "inverted")
    _fields = ("name", "inverted")

    def __new__(cls, name: str, inverted: bool = False):
        return super().__new__(cls, name, bool(inverted))

    @property
    def inverse(self) -> "Role":
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return f"{self.name}⁻" if self.inverted else self.name

    def sort_key(self):
        return (self.name, self.inverted)


def inv(role: Union[Role, str]) -> Role:
    if isinstance(role, str):
        role = Role(role)
    return role.inverse


# --------------------------------------------------------------------------
# Concepts
# --------------------------------------------------------------------------


class Concept(Term):
    __slots__ = ("_complement", "_key")

    def _setup(self) -> None:
        object.__setattr__(self, "_complement", None)
        object.__setattr__(self, "_key", None)

    @property
    def is_pending(self) -> bool:
        return False

    def sort_key(self) -> str:
        # Deterministic ordering for traces, DOT output and iteration order.
        if self._key is None:
            object.__setattr__(self, "_key", str(self))
        return self._key


class Top(Concept):
    __slots__ = ()

    def __str__(self):
        return "⊤"


class Bottom(Concept):
    __slots__ = ()

    def __str__(self):
        return "⊥"


class TopR(Concept):
    """⊤ annotated by a role; semantically ⊤."""

    __slots__ = ("role",)
    _fields = ("role",)

    def __str__(self):
        return f"⊤_{self.role}"


class Atom(Concept):
    __slots__ = ("name",)
    _fields = ("name",)

    def __str__(self):
        return self.name


class Not(Concept):
    __slots__ = ("arg",)
    _fields = ("arg",)

    def __str__(self):
        if isinstance(self.arg, Atom):
            return f"¬{self.arg}"
        return f"¬({self.arg})"


class And(Concept):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __str__(self):
        return f"({self.left} ⊓ {self.right})"


class Or(Concept):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __str__(self):
        return f"({self.left} ⊔ {self.right})"


class Exists(Concept):
    __slots__ = ("role", "body")
    _fields = ("role", "body")

    def __str__(self):
        return f"∃{self.role}.{self.body}"


class Forall(Concept):
    __slots__ = ("role", "body")
    _fields = ("role", "body")

    def __str__(self):
        return f"∀{self.role}.{self.body}"


class _Counting(Concept):
    __slots__ = ("n", "role", "body")
    _fields = ("n", "role", "body")
    _symbol = "?"

    def __new__(cls, n: int, role: Role, body: Concept):
        n = int(n)
        if n < 0:
            raise ValueError(f"negative number in {cls.__name__}: {n}")
        return Term.__new__(cls, n, role, body)

    def __str__(self):
        return f"{self._symbol}{self.n} {self.role}.{self.body}"


class AtLeast(_Counting):
    __slots__ = ()
    _symbol = "≥"


class AtMost(_Counting):
    __slots__ = ()
    _symbol = "≤"


class MaxPending(_Counting):
    """Pending upper bound ⪯n R.C; has no semantics of its own."""

    __slots__ = ()
    _symbol = "⪯"

    @property
    def is_pending(self) -> bool:
        return True


class MinPending(_Counting):
    """Pending lower bound ⪰n R.C; has no semantics of its own."""

    __slots__ = ()
    _symbol = "⪰"

    @property
    def is_pending(self) -> bool:
        return True


TOP = Top()
BOTTOM = Bottom()

NUMBER_RESTRICTIONS = (AtLeast, AtMost)
PENDING = (MaxPending, MinPending)


# --------------------------------------------------------------------------
# Assertions
# --------------------------------------------------------------------------


class Assertion(Term):
    __slots__ = ("_key",)

    def _setup(self) -> None:
        object.__setattr__(self, "_key", None)

    @property
    def is_pending(self) -> bool:
        return False

    def sort_key(self) -> str:
        if self._key is None:
            object.__setattr__(self, "_key", str(self))
        return self._key

    def individuals(self) -> tuple[str, ...]:
        raise NotImplementedError


class ConceptAssertion(Assertion):
    __slots__ = ("ind", "concept")
    _fields = ("ind", "concept")

    @property
    def is_pending(self) -> bool:
        return self.concept.is_pending

    def individuals(self):
        return (self.ind,)

    def __str__(self):
        return f"{self.ind}:{self.concept}"


class RoleAssertion(Assertion):
    __slots__ = ("role", "a", "b")
    _fields = ("role", "a", "b")

    def individuals(self):
        return (self.a, self.b)

    def __str__(self):
        return f"{self.role}({self.a},{self.b})"


class NegRoleAssertion(Assertion):
    __slots__ = ("role", "a", "b")
    _fields = ("role", "a", "b")

    def individuals(self):
        return (self.a, self.b)

    def __str__(self):
        return f"¬{self.role}({self.a},{self.b})"


class Distinct(Assertion):
    __slots__ = ("a", "b")
    _fields = ("a", "b")

    def individuals(self):
        return (self.a, self.b)

    def __str__(self):
        return f"{self.a}≠{self.b}"


class Equal(Assertion):
    __slots__ = ("a", "b")
    _fields = ("a", "b")

    def individuals(self):
        return (self.a, self.b)

    def __str__(self):
        return f"{self.a}≐{self.b}"


Formula = Union[Concept, Assertion]


def at(alpha: Optional[str], concept: Concept) -> Formula:
    """The formula α:C, where null:C stands for C itself."""
    return concept if alpha is None else ConceptAssertion(alpha, concept)


def split(formula: Formula) -> tuple[Optional[str], Optional[Concept]]:
    """Inverse of `at`: (α, C) for concept formulas, (None, None) otherwise."""
    if isinstance(formula, Concept):
        return None, formula
    if isinstance(formula, ConceptAssertion):
        return formula.ind, formula.concept
    return None, None


def is_pending(formula: Formula) -> bool:
    return formula.is_pending


def sort_formulas(formulas: Iterable[Formula]) -> list:
    return sorted(formulas, key=lambda f: f.sort_key())


# --------------------------------------------------------------------------
# Negation normal form and complement
# --------------------------------------------------------------------------


def nnf(c: Concept) -> Concept:
    """Negation normal form: negation only directly before atomic concepts."""
    if isinstance(c, (Top, Bottom, Atom, TopR)):
        return c
    if isinstance(c, Not):
        return _negate(c.arg)
    if isinstance(c, And):
        return And(nnf(c.left), nnf(c.right))
    if isinstance(c, Or):
        return Or(nnf(c.left), nnf(c.right))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.body))
    if isinstance(c, Forall):
        return Forall(c.role, nnf(c.body))
    if isinstance(c, _Counting):
        return type(c)(c.n, c.role, nnf(c.body))
    raise TypeError(f"not a concept: {c!r}")


def _negate(c: Concept) -> Concept:
    """NNF of ¬c."""
    if isinstance(c, Top):
        return BOTTOM
    if isinstance(c, Bottom):
        return TOP
    if isinstance(c, TopR):
        return BOTTOM
    if isinstance(c, Atom):
        return Not(c)
    if isinstance(c, Not):
        return nnf(c.arg)
    if isinstance(c, And):
        return Or(_negate(c.left), _negate(c.right))
    if isinstance(c, Or):
        return And(_negate(c.left), _negate(c.right))
    if isinstance(c, Exists):
        return Forall(c.role, _negate(c.body))
    if isinstance(c, Forall):
        return Exists(c.role, _negate(c.body))
    if isinstance(c, AtLeast):
        if c.n == 0:
            return BOTTOM
        return AtMost(c.n - 1, c.role, nnf(c.body))
    if isinstance(c, AtMost):
        return AtLeast(c.n + 1, c.role, nnf(c.body))
    if isinstance(c, (MaxPending, MinPending)):
        raise ValueError(f"pending restriction {c} has no complement")
    raise TypeError(f"not a concept: {c!r}")


def is_nnf(c: Concept) -> bool:
    if isinstance(c, Not):
        return isinstance(c.arg, Atom)
    if isinstance(c, (And, Or)):
        return is_nnf(c.left) and is_nnf(c.right)
    if isinstance(c, (Exists, Forall, _Counting)):
        return is_nnf(c.body)
    return True


def complement(c: Concept) -> Concept:
    """C̄, the NNF of ¬C, for C in NNF. The complement of ⊤_R is ⊥."""
    comp = c._complement
    if comp is None:
        if isinstance(c, PENDING):
            raise ValueError(f"pending restriction {c} has no complement")
        comp = _negate(c)
        object.__setattr__(c, "_complement", comp)
    return comp


_formula_complements: dict = {}


def complement_formula(f: Formula) -> Formula:
    if isinstance(f, Concept):
        return complement(f)
    comp = _formula_complements.get(f)
    if comp is None:
        comp = _formula_complements[f] = _complement_assertion(f)
    return comp


def _complement_assertion(f: Formula) -> Formula:
    if isinstance(f, ConceptAssertion):
        return ConceptAssertion(f.ind, complement(f.concept))
    if isinstance(f, RoleAssertion):
        return NegRoleAssertion(f.role, f.a, f.b)
    if isinstance(f, NegRoleAssertion):
        return RoleAssertion(f.role, f.a, f.b)
    if isinstance(f, Distinct):
        return Equal(f.a, f.b)
    if isinstance(f, Equal):
        return Distinct(f.a, f.b)
    raise TypeError(f"not a formula: {f!r}")


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, Not):
        yield from subconcepts(c.arg)
    elif isinstance(c, (And, Or)):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)
    elif isinstance(c, (Exists, Forall, _Counting)):
        yield from subconcepts(c.body)


def rename_individual(f: Formula, old: str, new: str) -> Formula:
    """Replace every occurrence of individual `old` by `new`."""
    def r(x):
        return new if x == old else x

    if isinstance(f, ConceptAssertion):
        return f if f.ind != old else ConceptAssertion(new, f.concept)
    if isinstance(f, (RoleAssertion, NegRoleAssertion)):
        return type(f)(f.role, r(f.a), r(f.b))
    if isinstance(f, (Distinct, Equal)):
        return type(f)(r(f.a), r(f.b))
    return f


# --------------------------------------------------------------------------
# Axioms and knowledge bases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SubRole:
    sub: Role
    sup: Role

    def __str__(self):
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True)
class TransAxiom:
    role: Role

    def __str__(self):
        return f"Trans({self.role})"


@dataclass(frozen=True)
class Subsumption:
    sub: Concept
    sup: Concept

    def __str__(self):
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True)
class Equivalence:
    left: Concept
    right: Concept

    def __str__(self):
        return f"{self.left} ≐ {self.right}"


RoleAxiom = Union[SubRole, TransAxiom]
TBoxAxiom = Union[Subsumption, Equivalence]

FRESH_INDIVIDUAL = "_a0"


@dataclass
class KnowledgeBase:
    rbox: list = field(default_factory=list)
    tbox: list = field(default_factory=list)
    abox: list = field(default_factory=list)

    def individuals(self) -> list[str]:
        seen: dict[str, None] = {}
        for a in self.abox:
            for name in a.individuals():
                seen.setdefault(name, None)
        return list(seen)

    def concepts(self) -> Iterator[Concept]:
        """Top-level concepts used anywhere in the KB."""
        for ax in self.tbox:
            if isinstance(ax, Subsumption):
                yield ax.sub
                yield ax.sup
            else:
                yield ax.left
                yield ax.right
        for a in self.abox:
            if isinstance(a, ConceptAssertion):
                yield a.concept

    def roles(self) -> set[Role]:
        roles: set[Role] = set()
        for ax in self.rbox:
            if isinstance(ax, SubRole):
                roles.update((ax.sub, ax.sup))
            else:
                roles.add(ax.role)
        for c in self.concepts():
            for d in subconcepts(c):
                if isinstance(d, (Exists, Forall, _Counting)):
                    roles.add(d.role)
                elif isinstance(d, TopR):
                    roles.add(d.role)
        for a in self.abox:
            if isinstance(a, (RoleAssertion, NegRoleAssertion)):
                roles.add(a.role)
        return roles

    def number_restriction_roles(self) -> set[Role]:
        roles = set()
        for c in self.concepts():
            for d in subconcepts(c):
                if isinstance(d, _Counting):
                    roles.add(d.role)
        return roles

    def concept_names(self) -> set[str]:
        names = set()
        for c in self.concepts():
            for d in subconcepts(c):
                if isinstance(d, Atom):
                    names.add(d.name)
        return names

    def __str__(self):
        parts = [str(x) for x in self.rbox]
        parts += [str(x) for x in self.tbox]
        parts += [str(x) for x in self.abox]
        return "{" + "; ".join(parts) + "}"


def internalize_tbox(tbox: Iterable) -> list[Concept]:
    """Turn TBox axioms into NNF concepts that must hold everywhere.

    C ⊑ D becomes C̄ ⊔ D (just D when C is ⊤) and C ≐ D becomes (C̄ ⊔ D) ⊓ (D̄ ⊔ C).
    Duplicates are dropped, order of first occurrence is kept.
    """
    out: dict[Concept, None] = {}
    for ax in tbox:
        if isinstance(ax, Subsumption):
            if isinstance(ax.sub, Top):
                c = nnf(ax.sup)
            else:
                c = Or(_negate(ax.sub), nnf(ax.sup))
        elif isinstance(ax, Equivalence):
            left, right = nnf(ax.left), nnf(ax.right)
            c = And(Or(complement(left), right), Or(complement(right), left))
        elif isinstance(ax, Concept):
            c = nnf(ax)
        else:
            raise TypeError(f"not a TBox axiom: {ax!r}")
        out.setdefault(c, None)
    return list(out)


def nnf_assertion(a: Assertion) -> Assertion:
    if isinstance(a, ConceptAssertion):
        return ConceptAssertion(a.ind, nnf(a.concept))
    return a


def normalize_kb(kb: KnowledgeBase) -> KnowledgeBase:
    """NNF every ABox assertion; add a:⊤ for a fresh a when the ABox is empty."""
    abox = list(dict.fromkeys(nnf_assertion(a) for a in kb.abox))
    if not abox:
        abox = [ConceptAssertion(FRESH_INDIVIDUAL, TOP)]
    return KnowledgeBase(list(kb.rbox), list(kb.tbox), abox)
