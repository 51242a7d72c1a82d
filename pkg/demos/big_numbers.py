"""Numbers in counting restrictions are handled in binary.

The knowledge base asks for 10^k B-successors, at most 10^k successors in
A ⊔ B, one A-successor, and no successor in both A and B. The last three
together leave room for only 10^k - 1 B-successors, so it is unsatisfiable
for every k. The run time should not grow with k.
"""

import time

from shiq import check_satisfiability, parse_kb

TEMPLATE = """
assert a : some r . A;
assert a : all r . (not A or not B);
assert a : >= {n} r . B;
assert a : <= {n} r . (A or B);
"""

for k in (1, 3, 6, 9, 12, 15):
    kb = parse_kb(TEMPLATE.format(n=10 ** k))
    t0 = time.perf_counter()
    result = check_satisfiability(kb)
    dt = time.perf_counter() - t0
    print(f"n = 10^{k:<2}  {result.verdict:5}  {len(result.graph):3} nodes  {dt * 1000:6.1f} ms")

# with one more allowed successor the same shape is satisfiable
kb = parse_kb(TEMPLATE.format(n=10 ** 9).replace("<= 1000000000", "<= 1000000001"))
print("relaxed:", check_satisfiability(kb).verdict)
