"""SHIQ knowledge base satisfiability with global state caching and
integer feasibility checking for number restrictions."""

from .engine import ResourceLimitExceeded, Result, Tableau, check_satisfiability
from .ilfc import FeasibilityProblem, LinearConstraint, find_solution, is_feasible
from .modelgen import corresponding_model, extract_model, verify_model
from .parser import ParseError, format_kb, parse_kb
from .rbox import NonSimpleRoleError, compute_rbox_closure
from .syntax import KnowledgeBase

__all__ = [
    "FeasibilityProblem", "KnowledgeBase", "LinearConstraint", "NonSimpleRoleError",
    "ParseError", "ResourceLimitExceeded", "Result", "Tableau", "check_satisfiability",
    "compute_rbox_closure", "corresponding_model", "extract_model", "find_solution",
    "format_kb", "is_feasible", "parse_kb", "verify_model",
]
