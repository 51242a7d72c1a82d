import random

import pytest

from kbgen import random_concept
from shiq.syntax import (
    BOTTOM, TOP, And, AtLeast, AtMost, Atom, ConceptAssertion, Exists, Forall, Not, Or,
    Role, RoleAssertion, Subsumption, complement, complement_formula, internalize_tbox,
    inv, is_nnf, nnf, rename_individual, subconcepts,
)

A, B = Atom("A"), Atom("B")
r = Role("r")


def test_terms_are_interned():
    assert Atom("A") is A
    assert Role("r") is r
    assert And(A, B) is And(A, B)
    assert inv(inv(r)) is r
    assert inv(r) is Role("r", True)


@pytest.mark.parametrize("given, expected", [
    (Not(And(A, B)), Or(Not(A), Not(B))),
    (Not(Or(A, Not(B))), And(Not(A), B)),
    (Not(Exists(r, A)), Forall(r, Not(A))),
    (Not(Forall(r, A)), Exists(r, Not(A))),
    (Not(AtLeast(2, r, A)), AtMost(1, r, A)),
    (Not(AtMost(2, r, A)), AtLeast(3, r, A)),
    (Not(AtLeast(0, r, A)), BOTTOM),
    (Not(TOP), BOTTOM),
    (Not(Not(A)), A),
])
def test_nnf_cases(given, expected):
    assert nnf(given) is expected


def test_nnf_random_concepts_are_in_nnf_and_idempotent():
    rng = random.Random(7)
    for _ in range(500):
        c = random_concept(rng, ["A", "B", "C"], ["r", "s"], 3, inverses=True)
        n = nnf(c)
        assert is_nnf(n)
        assert nnf(n) is n


def test_complement_is_an_involution():
    rng = random.Random(3)
    for _ in range(300):
        c = nnf(random_concept(rng, ["A", "B"], ["r"], 3))
        if any(isinstance(d, AtLeast) and d.n == 0 for d in subconcepts(c)):
            continue  # ≥0 R.C complements to ⊥, which comes back as ⊤
        assert complement(complement(c)) is c


def test_complement_of_assertions():
    assert complement_formula(ConceptAssertion("a", A)) is ConceptAssertion("a", Not(A))
    neg = complement_formula(RoleAssertion(r, "a", "b"))
    assert complement_formula(neg) is RoleAssertion(r, "a", "b")


def test_internalize_tbox():
    got = internalize_tbox([Subsumption(A, B), Subsumption(TOP, Exists(r, A))])
    assert got == [Or(Not(A), B), Exists(r, A)]


def test_rename_individual():
    f = ConceptAssertion("a", Exists(r, A))
    assert rename_individual(f, "a", "b") is ConceptAssertion("b", Exists(r, A))
    assert rename_individual(RoleAssertion(r, "a", "c"), "a", "b") is RoleAssertion(r, "b", "c")
