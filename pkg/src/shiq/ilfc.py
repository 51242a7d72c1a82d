"""Feasibility of 0/1-coefficient linear systems over the natural numbers.

A system is a list of constraints  Σ_{j∈S} x_j ≤ b  or  Σ_{j∈S} x_j ≥ b
plus a set of variables pinned to zero. Numbers are arbitrary Python ints,
so bounds such as 10**9 cost nothing extra: the search bisects intervals
and never enumerates values one by one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

LE = "<="
GE = ">="

_MAX_PROPAGATION_ROUNDS = 64


class Infeasible(Exception):
    """Raised by `preprocess` when pins alone make the system unsatisfiable."""


@dataclass(frozen=True)
class LinearConstraint:
    vars: frozenset
    relation: str
    bound: int

    def __post_init__(self):
        if self.relation not in (LE, GE):
            raise ValueError(f"bad relation {self.relation!r}")
        if self.bound < 0:
            raise ValueError("bounds are natural numbers")
        if not isinstance(self.vars, frozenset):
            object.__setattr__(self, "vars", frozenset(self.vars))

    def holds(self, values: Mapping[int, int]) -> bool:
        total = sum(values.get(j, 0) for j in self.vars)
        return total <= self.bound if self.relation == LE else total >= self.bound

    def __str__(self):
        lhs = " + ".join(f"x{j}" for j in sorted(self.vars)) or "0"
        return f"{lhs} {self.relation} {self.bound}"


def le(vars: Iterable[int], bound: int) -> LinearConstraint:
    return LinearConstraint(frozenset(vars), LE, bound)


def ge(vars: Iterable[int], bound: int) -> LinearConstraint:
    return LinearConstraint(frozenset(vars), GE, bound)


@dataclass(frozen=True)
class FeasibilityProblem:
    variables: frozenset
    constraints: tuple = ()
    pinned_zero: frozenset = frozenset()

    def __post_init__(self):
        cons = tuple(dict.fromkeys(self.constraints))  # structural dedup, order kept
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "pinned_zero", frozenset(self.pinned_zero))
        for c in cons:
            if not c.vars <= self.variables:
                raise ValueError(f"constraint {c} uses undeclared variables")
        if not self.pinned_zero <= self.variables:
            raise ValueError("pinned variable not declared")

    @classmethod
    def dense(cls, num_vars: int, constraints=(), pinned_zero=()):
        return cls(frozenset(range(num_vars)), tuple(constraints), frozenset(pinned_zero))

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def pin(self, *vars: int) -> "FeasibilityProblem":
        return FeasibilityProblem(self.variables, self.constraints, self.pinned_zero | set(vars))

    def with_constraints(self, extra) -> "FeasibilityProblem":
        return FeasibilityProblem(self.variables, self.constraints + tuple(extra), self.pinned_zero)

    def satisfied_by(self, values: Mapping[int, int]) -> bool:
        if any(values.get(j, 0) < 0 for j in self.variables):
            return False
        if any(values.get(j, 0) != 0 for j in self.pinned_zero):
            return False
        return all(c.holds(values) for c in self.constraints)

    def __str__(self):
        lines = [str(c) for c in self.constraints]
        lines += [f"x{j} = 0" for j in sorted(self.pinned_zero)]
        return "\n".join(lines)


@dataclass
class Reduced:
    """Output of `preprocess`: the bounded core plus the dropped ≥-constraints."""

    le: list
    ge: list
    upper: dict
    deleted_ge: list = field(default_factory=list)
    unbounded: set = field(default_factory=set)


def preprocess(p: FeasibilityProblem) -> Reduced:
    """Eliminate pins, derive upper bounds, drop what cannot matter.

    Each variable occurring in a ≤-constraint gets the bound c_j, the least
    bound among those constraints. A ≥-constraint that mentions a variable
    without such a bound can always be met by raising that variable, so it
    is set aside. Raises Infeasible when pins alone violate a constraint.
    """
    pins = p.pinned_zero
    les, ges = [], []
    for c in p.constraints:
        vars = c.vars - pins
        if c.relation == LE:
            if vars:
                les.append((vars, c.bound))
        else:
            if c.bound == 0:
                continue
            if not vars:
                raise Infeasible(f"{c} with all variables pinned to zero")
            ges.append((vars, c.bound))

    upper: dict = {}
    for vars, b in les:
        for j in vars:
            if j not in upper or b < upper[j]:
                upper[j] = b

    kept_ge, deleted = [], []
    for vars, b in ges:
        if all(j in upper for j in vars):
            kept_ge.append((vars, b))
        else:
            deleted.append((vars, b))
    kept_le = [(vars, b) for vars, b in les if sum(upper[j] for j in vars) > b]
    unbounded = {j for vars, _ in deleted for j in vars if j not in upper}
    return Reduced(kept_le, kept_ge, upper, deleted, unbounded)


class _Search:
    def __init__(self, red: Reduced, node_limit: Optional[int]):
        self.le = red.le
        self.ge = red.ge
        vars = set()
        for vs, _ in self.le + self.ge:
            vars |= vs
        self.vars = vars
        self.node_limit = node_limit
        self.nodes = 0
        occurrences = {j: 0 for j in vars}
        for vs, _ in self.le + self.ge:
            for j in vs:
                occurrences[j] += 1
        # descending participation, ties by id for determinism
        self.order = sorted(vars, key=lambda j: (-occurrences[j], j))
        self.upper = red.upper

    def propagate(self, lo: dict, hi: dict) -> bool:
        for _ in range(_MAX_PROPAGATION_ROUNDS):
            changed = False
            for vs, b in self.le:
                slo = sum(lo[j] for j in vs)
                if slo > b:
                    return False
                for j in vs:
                    cap = b - (slo - lo[j])
                    if hi[j] > cap:
                        hi[j] = cap
                        changed = True
            for vs, b in self.ge:
                shi = sum(hi[j] for j in vs)
                if shi < b:
                    return False
                for j in vs:
                    need = b - (shi - hi[j])
                    if lo[j] < need:
                        lo[j] = need
                        changed = True
            for j in self.vars:
                if lo[j] > hi[j]:
                    return False
            if not changed:
                break
        return True

    def satisfied_at_lo(self, lo: dict) -> bool:
        return all(sum(lo[j] for j in vs) >= b for vs, b in self.ge) and all(
            sum(lo[j] for j in vs) <= b for vs, b in self.le)

    def run(self) -> Optional[dict]:
        lo = {j: 0 for j in self.vars}
        hi = {j: self.upper[j] for j in self.vars}
        stack = [(lo, hi)]
        while stack:
            lo, hi = stack.pop()
            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise RuntimeError("feasibility search node limit exceeded")
            if not self.propagate(lo, hi):
                continue
            if self.satisfied_at_lo(lo):
                return lo
            j = next((j for j in self.order if hi[j] > lo[j]), None)
            if j is None:
                continue
            mid = (lo[j] + hi[j]) // 2
            lower_hi = dict(hi)
            lower_hi[j] = mid
            upper_lo = dict(lo)
            upper_lo[j] = mid + 1
            # depth first, lower half explored first
            stack.append((upper_lo, dict(hi)))
            stack.append((dict(lo), lower_hi))
        return None


def find_solution(p: FeasibilityProblem, node_limit: Optional[int] = None) -> Optional[dict]:
    """A satisfying assignment for every declared variable, or None."""
    try:
        red = preprocess(p)
    except Infeasible:
        return None
    core = _Search(red, node_limit).run()
    if core is None:
        return None
    values = {j: 0 for j in p.variables}
    values.update(core)
    for vs, b in red.deleted_ge:
        deficit = b - sum(values[j] for j in vs)
        if deficit > 0:
            j = min(x for x in vs if x in red.unbounded)
            values[j] += deficit
    return values


def is_feasible(p: FeasibilityProblem, node_limit: Optional[int] = None) -> bool:
    return find_solution(p, node_limit) is not None


# --------------------------------------------------------------------------
# Plain-text format: one constraint per line, e.g. "x1 + x3 >= 2" or "x2 = 0"
# --------------------------------------------------------------------------

_LINE = re.compile(r"^\s*(.*?)\s*(<=|>=|=)\s*(\d+)\s*$")
_VAR = re.compile(r"^x(\d+)$")


class ProblemSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def parse_problem(text: str) -> FeasibilityProblem:
    constraints, pins, variables = [], set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ProblemSyntaxError(lineno, f"cannot parse {raw.strip()!r}")
        lhs, rel, bound = m.group(1), m.group(2), int(m.group(3))
        vars = set()
        if lhs.strip() != "0":
            for term in lhs.split("+"):
                vm = _VAR.match(term.strip())
                if not vm:
                    raise ProblemSyntaxError(lineno, f"bad variable {term.strip()!r}")
                vars.add(int(vm.group(1)))
        variables |= vars
        if rel == "=":
            if bound != 0 or len(vars) != 1:
                raise ProblemSyntaxError(lineno, "only single-variable pins 'xN = 0' are supported")
            pins |= vars
        else:
            constraints.append(LinearConstraint(frozenset(vars), rel, bound))
    return FeasibilityProblem(frozenset(variables), tuple(constraints), frozenset(pins))
