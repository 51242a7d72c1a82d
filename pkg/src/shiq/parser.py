"""Reading and writing the plain-text knowledge base format.

    kb        := (stmt ";")*
    stmt      := "trans" "(" role ")" | role "sub" role | concept "sub" concept
               | concept "equiv" concept | "assert" assertion
    role      := IDENT | "inv" "(" IDENT ")"
    assertion := IDENT ":" concept | role "(" IDENT "," IDENT ")" | IDENT "!=" IDENT
    concept   := "Top" | "Bottom" | IDENT | "not" concept | concept "and" concept
               | concept "or" concept | "some" role "." concept | "all" role "." concept
               | ">=" NAT role "." concept | "<=" NAT role "." concept | "(" concept ")"

`not` binds tighter than `and`, which binds tighter than `or`; quantifier
bodies extend as far right as possible. A statement `x sub y` between two
bare names is a role inclusion when either name is used as a role somewhere
in the file, and a concept inclusion otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .rbox import closure_for_kb
from .syntax import (
    BOTTOM,
    MAX_NUMBER,
    TOP,
    And,
    AtLeast,
    AtMost,
    Atom,
    Bottom,
    Concept,
    ConceptAssertion,
    Distinct,
    Equivalence,
    Exists,
    Forall,
    KnowledgeBase,
    Not,
    Or,
    Role,
    RoleAssertion,
    SubRole,
    Subsumption,
    Top,
    TransAxiom,
)

KEYWORDS = {"trans", "sub", "equiv", "assert", "inv", "not", "and", "or", "some", "all",
            "Top", "Bottom"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<nat>[0-9]+)
  | (?P<sym>!=|>=|<=|[;(),.:])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, expected: tuple = ()):
        self.line = line
        self.column = column
        self.message = message
        self.expected = tuple(expected)
        text = f"{line}:{column}: {message}"
        if expected:
            text += f" (expected {', '.join(expected)})"
        super().__init__(text)


@dataclass
class Token:
    kind: str  # "ident", "nat", "sym", "eof"
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, f"unexpected character {source[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _Ambiguous:
    left: str
    right: str
    tok: Token


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.role_names: set[str] = set()
        self.concept_names: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, expected=(), tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(tok.line, tok.column, message, expected)

    def at_sym(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def at_kw(self, text: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == text

    def expect_sym(self, text: str) -> Token:
        if not self.at_sym(text):
            self.error(f"unexpected {self._describe()}", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def expect_kw(self, text: str) -> Token:
        if not self.at_kw(text):
            self.error(f"unexpected {self._describe()}", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error(f"unexpected {self._describe()}", (what,))
        self.i += 1
        return t.text

    def _describe(self) -> str:
        t = self.tok
        return "end of input" if t.kind == "eof" else repr(t.text)

    # -- top level -------------------------------------------------------

    def parse(self) -> KnowledgeBase:
        items = []
        while self.tok.kind != "eof":
            items.append(self.statement())
            self.expect_sym(";")
        return self.resolve(items)

    def statement(self):
        if self.at_kw("trans"):
            self.i += 1
            self.expect_sym("(")
            r = self.role()
            self.expect_sym(")")
            return TransAxiom(r)
        if self.at_kw("assert"):
            self.i += 1
            return self.assertion()
        if self.at_kw("inv"):
            r = self.role()
            self.expect_kw("sub")
            return SubRole(r, self.role())
        start = self.tok
        if (start.kind == "ident" and start.text not in KEYWORDS
                and self.peek().kind == "ident" and self.peek().text == "sub"):
            nxt = self.peek(2)
            if nxt.kind == "ident" and nxt.text == "inv":
                r = self.role()
                self.i += 1
                return SubRole(r, self.role())
            if (nxt.kind == "ident" and nxt.text not in KEYWORDS
                    and self.peek(3).kind == "sym" and self.peek(3).text == ";"):
                self.i += 3
                return _Ambiguous(start.text, nxt.text, start)
        left = self.concept()
        if self.at_kw("sub"):
            self.i += 1
            return Subsumption(left, self.concept())
        if self.at_kw("equiv"):
            self.i += 1
            return Equivalence(left, self.concept())
        self.error(f"unexpected {self._describe()}", ("'sub'", "'equiv'"))

    def resolve(self, items) -> KnowledgeBase:
        pending = [x for x in items if isinstance(x, _Ambiguous)]
        changed = True
        while changed:
            changed = False
            for x in pending:
                if (x.left in self.role_names) != (x.right in self.role_names):
                    self.role_names.update((x.left, x.right))
                    changed = True
        kb = KnowledgeBase()
        for x in items:
            if isinstance(x, _Ambiguous):
                if x.left in self.role_names or x.right in self.role_names:
                    if x.left in self.concept_names or x.right in self.concept_names:
                        raise ParseError(x.tok.line, x.tok.column,
                                         f"'{x.left} sub {x.right}' mixes a role and a concept")
                    kb.rbox.append(SubRole(Role(x.left), Role(x.right)))
                else:
                    kb.tbox.append(Subsumption(Atom(x.left), Atom(x.right)))
            elif isinstance(x, (SubRole, TransAxiom)):
                kb.rbox.append(x)
            elif isinstance(x, (Subsumption, Equivalence)):
                kb.tbox.append(x)
            else:
                kb.abox.append(x)
        return kb

    # -- pieces ------------------------------------------------------------

    def role(self) -> Role:
        if self.at_kw("inv"):
            self.i += 1
            self.expect_sym("(")
            n = self.name("role name")
            self.expect_sym(")")
            self.role_names.add(n)
            return Role(n, True)
        n = self.name("role name")
        self.role_names.add(n)
        return Role(n)

    def assertion(self):
        if self.at_kw("inv"):
            r = self.role()
            return self.role_pair(r)
        a = self.name("individual or role name")
        if self.at_sym(":"):
            self.i += 1
            return ConceptAssertion(a, self.concept())
        if self.at_sym("!="):
            self.i += 1
            return Distinct(a, self.name("individual name"))
        if self.at_sym("("):
            self.role_names.add(a)
            return self.role_pair(Role(a))
        self.error(f"unexpected {self._describe()}", ("':'", "'('", "'!='"))

    def role_pair(self, r: Role):
        self.expect_sym("(")
        a = self.name("individual name")
        self.expect_sym(",")
        b = self.name("individual name")
        self.expect_sym(")")
        return RoleAssertion(r, a, b)

    def concept(self) -> Concept:
        left = self.conjunction()
        while self.at_kw("or"):
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Concept:
        left = self.unary()
        while self.at_kw("and"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Concept:
        t = self.tok
        if t.kind == "ident":
            if t.text == "Top":
                self.i += 1
                return TOP
            if t.text == "Bottom":
                self.i += 1
                return BOTTOM
            if t.text == "not":
                self.i += 1
                return Not(self.unary())
            if t.text in ("some", "all"):
                self.i += 1
                r = self.role()
                self.expect_sym(".")
                body = self.concept()
                return Exists(r, body) if t.text == "some" else Forall(r, body)
            if t.text in KEYWORDS:
                self.error(f"unexpected {self._describe()}", ("concept",))
            self.i += 1
            self.concept_names.add(t.text)
            return Atom(t.text)
        if t.kind == "sym" and t.text in (">=", "<="):
            self.i += 1
            nt = self.tok
            if nt.kind != "nat":
                self.error(f"unexpected {self._describe()}", ("number",))
            n = int(nt.text)
            if n > MAX_NUMBER:
                self.error(f"number {nt.text} exceeds 2^60")
            self.i += 1
            r = self.role()
            self.expect_sym(".")
            body = self.concept()
            return AtLeast(n, r, body) if t.text == ">=" else AtMost(n, r, body)
        if self.at_sym("("):
            self.i += 1
            c = self.concept()
            self.expect_sym(")")
            return c
        self.error(f"unexpected {self._describe()}", ("concept",))


def parse_kb(source: str, check_roles: bool = True) -> KnowledgeBase:
    """Parse knowledge base text. With `check_roles`, non-simple roles under
    number restrictions raise NonSimpleRoleError."""
    kb = _Parser(source).parse()
    if check_roles:
        closure_for_kb(kb)
    return kb


def parse_concept(source: str) -> Concept:
    p = _Parser(source)
    c = p.concept()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p._describe()}", ("end of input",))
    return c


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------


def format_role(r: Role) -> str:
    return f"inv({r.name})" if r.inverted else r.name


def format_concept(c: Concept) -> str:
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, Bottom):
        return "Bottom"
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Not):
        return f"not {_operand(c.arg)}"
    if isinstance(c, (And, Or)):
        op = "and" if isinstance(c, And) else "or"
        return f"({_operand(c.left)} {op} {_operand(c.right)})"
    if isinstance(c, Exists):
        return f"some {format_role(c.role)} . {format_concept(c.body)}"
    if isinstance(c, Forall):
        return f"all {format_role(c.role)} . {format_concept(c.body)}"
    if isinstance(c, (AtLeast, AtMost)):
        op = ">=" if isinstance(c, AtLeast) else "<="
        return f"{op} {c.n} {format_role(c.role)} . {format_concept(c.body)}"
    raise ValueError(f"{c} has no text form")


def _operand(c: Concept) -> str:
    # quantifiers and negations would swallow what follows them
    if isinstance(c, (Exists, Forall, AtLeast, AtMost, Not)):
        return f"({format_concept(c)})"
    return format_concept(c)


def format_statement(x) -> str:
    if isinstance(x, TransAxiom):
        return f"trans({format_role(x.role)})"
    if isinstance(x, SubRole):
        return f"{format_role(x.sub)} sub {format_role(x.sup)}"
    if isinstance(x, Subsumption):
        return f"{format_concept(x.sub)} sub {format_concept(x.sup)}"
    if isinstance(x, Equivalence):
        return f"{format_concept(x.left)} equiv {format_concept(x.right)}"
    if isinstance(x, ConceptAssertion):
        return f"assert {x.ind} : {format_concept(x.concept)}"
    if isinstance(x, RoleAssertion):
        return f"assert {format_role(x.role)}({x.a}, {x.b})"
    if isinstance(x, Distinct):
        return f"assert {x.a} != {x.b}"
    raise ValueError(f"{x} has no text form")


def _bare(x) -> bool:
    return isinstance(x, SubRole) and not x.sub.inverted and not x.sup.inverted


def floating_role_inclusions(kb: KnowledgeBase) -> set:
    """Role inclusions `r sub s` that would read back as concept inclusions
    because nothing else in kb marks r or s as a role."""
    anchored = set()
    for x in kb.rbox:
        if isinstance(x, TransAxiom):
            anchored.add(x.role.name)
        elif not _bare(x):
            anchored.update((x.sub.name, x.sup.name))
    rest = KnowledgeBase()
    rest.tbox, rest.abox = kb.tbox, kb.abox
    anchored |= {r.name for r in rest.roles()}
    bare = [x for x in kb.rbox if _bare(x)]
    changed = True
    while changed:
        changed = False
        for x in bare:
            if (x.sub.name in anchored) != (x.sup.name in anchored):
                anchored.update((x.sub.name, x.sup.name))
                changed = True
    return {x for x in bare if x.sub.name not in anchored}


def format_kb(kb: KnowledgeBase) -> str:
    role_names = {r.name for r in kb.roles()}
    floating = floating_role_inclusions(kb)
    lines = []
    for x in [*kb.rbox, *kb.tbox, *kb.abox]:
        text = format_statement(x)
        if x in floating:
            # same axiom up to inversion; `inv(` forces the role reading
            text = f"inv({x.sub.name}) sub inv({x.sup.name})"
        if (isinstance(x, Subsumption) and isinstance(x.sub, Atom) and isinstance(x.sup, Atom)
                and (x.sub.name in role_names or x.sup.name in role_names)):
            # keep it from reading back as a role inclusion
            text = f"({x.sub.name}) sub {x.sup.name}"
        lines.append(text + ";")
    return "\n".join(lines) + ("\n" if lines else "")
