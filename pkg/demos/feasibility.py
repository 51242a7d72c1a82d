"""The integer feasibility checker on its own.

Constraints have 0/1 coefficients and natural-number variables, and bounds
can be huge: the search bisects over value ranges instead of counting up.
"""

from shiq.ilfc import FeasibilityProblem, find_solution, parse_problem, preprocess

p = parse_problem("""
x2 + x3 + x6 >= 1
x4 + x5 + x6 >= 1000000
x2 + x4 + x6 <= 1000000
""")
print(p, "\n")
print("solution:", find_solution(p))

red = preprocess(p)
print("upper bounds after preprocessing:", red.upper)
print("unbounded variables:", sorted(red.unbounded))
print("≥-constraints dropped because an unbounded variable satisfies them:", len(red.deleted_ge))

# closing successors one by one, as the reasoner does
for pins in [(3,), (3, 5), (3, 5, 6)]:
    q = p.pin(*pins)
    print(f"pinned {pins}: {'feasible' if find_solution(q) else 'infeasible'}")

print("no constraints:", find_solution(FeasibilityProblem.dense(3)))
