"""Command line entry point: `shiq check`, `shiq solve-ilp`, `shiq closure`."""

from __future__ import annotations

import argparse
import sys
import time

from .closure import closure_set
from .dot import to_dot
from .engine import ResourceLimitExceeded, check_satisfiability
from .ilfc import ProblemSyntaxError, find_solution, parse_problem
from .modelgen import DEFAULT_DEPTH, ExtractionError, format_model, model_for, verify_model
from .parser import ParseError, parse_kb
from .rbox import NonSimpleRoleError, closure_for_kb

EXIT_SAT, EXIT_UNSAT, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_kb(path: str):
    text = _read(path)
    return parse_kb(text)


def cmd_check(args) -> int:
    kb = _load_kb(args.file)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    t0 = time.perf_counter()
    try:
        result = check_satisfiability(kb, seed=args.seed, max_nodes=args.max_nodes, trace=trace)
    except ResourceLimitExceeded as e:
        print(f"RESULT: UNKNOWN ({e})")
        return EXIT_RESOURCE
    elapsed = time.perf_counter() - t0
    print(f"RESULT: {result.verdict}")
    if args.stats:
        stats = dict(result.stats)
        stats["seconds"] = round(elapsed, 4)
        for k in sorted(stats):
            print(f"{k}: {stats[k]}", file=sys.stderr)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(result.graph))
    if args.model:
        if not result.satisfiable:
            print("no model: the knowledge base is unsatisfiable", file=sys.stderr)
        else:
            try:
                m, interp = model_for(result, depth_cap=args.model_depth)
            except ExtractionError as e:
                print(f"model extraction failed: {e}", file=sys.stderr)
            else:
                with open(args.model, "w", encoding="utf-8") as fh:
                    fh.write(format_model(interp))
                report = verify_model(interp, kb, result.tableau.rc)
                note = "exact" if m.exact else f"truncated, {len(m.frontier)} frontier element(s)"
                print(f"model: {len(m.domain)} element(s), {note}; checks: "
                      f"{len(report.checks) - len(report.failures) - len(report.unknowns)} pass, "
                      f"{len(report.unknowns)} unknown, {len(report.failures)} fail",
                      file=sys.stderr)
    return EXIT_SAT if result.satisfiable else EXIT_UNSAT


def cmd_solve_ilp(args) -> int:
    problem = parse_problem(_read(args.file))
    sol = find_solution(problem)
    if sol is None:
        print("INFEASIBLE")
        return 1
    print("FEASIBLE")
    for j in sorted(sol):
        print(f"x{j} = {sol[j]}")
    return 0


def cmd_closure(args) -> int:
    kb = _load_kb(args.file)
    cl = closure_set(kb, closure_for_kb(kb))
    size = len(cl)
    if size <= args.limit:
        for f in cl:
            print(f)
    else:
        print(f"# {size} formulas; not listed (raise --limit to print them)")
    if args.stats or size > args.limit:
        for k, v in cl.stats().items():
            print(f"{k}: {v}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shiq", description="Satisfiability checking for SHIQ knowledge bases.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide satisfiability of a knowledge base file")
    c.add_argument("file")
    c.add_argument("--stats", action="store_true", help="print counters to stderr")
    c.add_argument("--trace", action="store_true", help="print rule applications to stderr")
    c.add_argument("--dot", metavar="PATH", help="write the final graph in DOT format")
    c.add_argument("--model", metavar="PATH", help="write an extracted model (SAT only)")
    c.add_argument("--model-depth", type=int, default=DEFAULT_DEPTH, metavar="N")
    c.add_argument("--max-nodes", type=int, default=10**6, metavar="N")
    c.add_argument("--seed", type=int, default=None,
                   help="random node selection with this seed (default: FIFO)")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve-ilp", help="solve a 0/1-coefficient feasibility problem")
    s.add_argument("file")
    s.set_defaults(func=cmd_solve_ilp)

    k = sub.add_parser("closure", help="print the closure set of a knowledge base")
    k.add_argument("file")
    k.add_argument("--stats", action="store_true")
    k.add_argument("--limit", type=int, default=100000)
    k.set_defaults(func=cmd_closure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        print(f"shiq: {e}", file=sys.stderr)
    except ParseError as e:
        print(f"shiq: {args.file}:{e}", file=sys.stderr)
    except ProblemSyntaxError as e:
        print(f"shiq: {args.file}: {e}", file=sys.stderr)
    except NonSimpleRoleError as e:
        print(f"shiq: {args.file}: {e}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
