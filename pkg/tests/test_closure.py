import random

from kbgen import random_alcq_kb
from shiq.closure import closure_set, concept_size, kb_size
from shiq.parser import parse_concept, parse_kb
from shiq.rbox import closure_for_kb
from shiq.syntax import (
    AtMost, Atom, ConceptAssertion, MaxPending, MinPending, Role, complement, internalize_tbox,
    normalize_kb, subconcepts,
)

from conftest import CORPUS

r = Role("r")


def closure_of(kb):
    return closure_set(kb, closure_for_kb(kb))


def test_contains_subconcepts_and_their_complements():
    kb = parse_kb((CORPUS / "example1.kb").read_text())
    cl = closure_of(kb)
    for c in internalize_tbox(normalize_kb(kb).tbox):
        for d in subconcepts(c):
            assert d in cl
            assert complement(d) in cl


def test_pending_ranges():
    kb = parse_kb((CORPUS / "example2.kb").read_text())
    cl = closure_of(kb)
    a1 = Atom("A1")
    assert ConceptAssertion("a", MaxPending(2, r, a1)) in cl
    assert ConceptAssertion("a", MaxPending(0, r, a1)) in cl
    assert ConceptAssertion("a", MaxPending(4, r, a1)) not in cl
    assert ConceptAssertion("a", MinPending(2, r, Atom("A3"))) in cl
    assert MinPending(0, r, Atom("A3")) not in cl


def test_len_matches_iteration_on_small_kbs():
    rng = random.Random(11)
    for _ in range(30):
        kb = random_alcq_kb(rng)
        cl = closure_of(kb)
        listed = list(cl)
        assert len(listed) == len(set(listed)) == len(cl)
        assert all(f in cl for f in listed)


def test_large_numbers_are_not_listed():
    kb = parse_kb((CORPUS / "example3_1000000000.kb").read_text())
    cl = closure_of(kb)
    assert len(cl) > 10**9  # counted, never materialised
    assert ConceptAssertion("a", MaxPending(123456789, r, parse_concept("A or B"))) in cl


def test_sizes_count_numbers_in_binary():
    assert concept_size(AtMost(1000, r, Atom("A"))) == 2 + 10 + 1
    assert concept_size(AtMost(10**9, r, Atom("A"))) == 2 + 30 + 1
    small = parse_kb((CORPUS / "example3.kb").read_text())
    big = parse_kb((CORPUS / "example3_1000000000.kb").read_text())
    assert kb_size(big) - kb_size(small) == 2 * (30 - 10)
