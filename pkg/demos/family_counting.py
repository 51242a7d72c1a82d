"""Qualified number restrictions on a small family knowledge base.

Run: python3 demos/family_counting.py
"""

from shiq import check_satisfiability, parse_kb
from shiq.modelgen import format_model, model_for, verify_model

BASE = """
hasSon sub hasChild;
hasDaughter sub hasChild;
Son equiv some inv(hasSon) . Top;
Daughter equiv some inv(hasDaughter) . Top;
Son sub not Daughter;
assert ann : >= 2 hasSon . Top;
assert ann : some hasDaughter . Top;
"""


def show(title, text):
    kb = parse_kb(text)
    result = check_satisfiability(kb)
    print(f"{title}: {result.verdict}  ({result.stats['nodes']} nodes)")
    return kb, result


# two sons and a daughter fit under "at most three children"
kb, result = show("at most three children", BASE + "assert ann : <= 3 hasChild . Top;")
m, interp = model_for(result)
print(format_model(interp))
print(verify_model(interp, kb, result.tableau.rc))
print()

# but not under "at most two": the daughter cannot also be a son
show("at most two children", BASE + "assert ann : <= 2 hasChild . Top;")
