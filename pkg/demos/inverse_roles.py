"""Walking through a run where information flows back along inverse roles.

The TBox says every A forces its r-predecessors into C (via ∀r⁻.C). The
ABox says a has an r-successor in A but is not in C. The conflict only
shows up once the successor is built: the KCC3 line in the trace is the
successor's ∀r⁻.C being checked against a:¬C, which closes that branch.
"""

from shiq import check_satisfiability, parse_kb
from shiq.dot import to_dot

kb = parse_kb("""
A sub all inv(r) . C;
assert a : some r . A;
assert a : not C;
""")

lines = []
result = check_satisfiability(kb, trace=lines.append)
print("verdict:", result.verdict)
print("rule applications:")
for line in lines:
    print("  ", line)

print()
for n in result.graph.nodes:
    kind = ("state" if n.is_state else "non-state") + (" (complex)" if n.complex else "")
    label = ", ".join(str(f) for f in n.ordered_label)
    print(f"{n.id:2} {kind:20} {str(n.status):12} {label}")

with open("inverse_roles.dot", "w") as fh:
    fh.write(to_dot(result.graph))
print("\nwrote inverse_roles.dot (render with: dot -Tsvg inverse_roles.dot)")
