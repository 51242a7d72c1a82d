import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiq.parser import (
    ParseError, floating_role_inclusions, format_concept, format_kb, parse_concept, parse_kb,
)
from shiq.rbox import NonSimpleRoleError
from shiq.syntax import (
    BOTTOM, TOP, And, AtLeast, AtMost, Atom, ConceptAssertion, Distinct, Equivalence, Exists,
    Forall, KnowledgeBase, Not, Or, Role, RoleAssertion, SubRole, Subsumption, TransAxiom, inv,
)

A, B, C = Atom("A"), Atom("B"), Atom("C")
r, s = Role("r"), Role("s")


def test_precedence():
    assert parse_concept("not A and B or C") is Or(And(Not(A), B), C)
    assert parse_concept("A or B and C") is Or(A, And(B, C))
    assert parse_concept("some r . A and B") is Exists(r, And(A, B))
    assert parse_concept("(some r . A) and B") is And(Exists(r, A), B)
    assert parse_concept("all inv(r) . >= 2 s . Top") is Forall(inv(r), AtLeast(2, s, TOP))
    assert parse_concept("<= 0 r . Bottom") is AtMost(0, r, BOTTOM)


def test_statements():
    kb = parse_kb("""
        # comment
        r sub s; inv(r) sub s; trans(s);
        A sub some r . B;
        A equiv B or C;
        assert a : A;
        assert r(a, b);
        assert inv(r)(b, c);
        assert a != b;
    """)
    assert kb.rbox == [SubRole(r, s), SubRole(inv(r), s), TransAxiom(s)]
    assert kb.tbox == [Subsumption(A, Exists(r, B)), Equivalence(A, Or(B, C))]
    assert kb.abox == [ConceptAssertion("a", A), RoleAssertion(r, "a", "b"),
                       RoleAssertion(inv(r), "b", "c"), Distinct("a", "b")]


def test_bare_names_are_roles_when_used_as_roles():
    kb = parse_kb("p sub q; assert a : some q . A;")
    assert kb.rbox == [SubRole(Role("p"), Role("q"))] and kb.tbox == []
    kb = parse_kb("P sub Q; assert a : P;")
    assert kb.tbox == [Subsumption(Atom("P"), Atom("Q"))] and kb.rbox == []


@pytest.mark.parametrize("text, line, column", [
    ("assert a : A and", 1, 17),
    ("A sub B", 1, 8),
    ("\n\nassert a : (A or B;", 3, 19),
    ("assert a : >= 99999999999999999999999 r . A;", 1, 15),
    ("assert a : A $ B;", 1, 14),
    ("r sub A; assert a : some r . A;", 1, 1),
])
def test_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_kb(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_non_simple_role_under_number_restriction():
    with pytest.raises(NonSimpleRoleError):
        parse_kb("trans(r); assert a : <= 1 r . A;")
    parse_kb("trans(r); assert a : <= 1 r . A;", check_roles=False)


names = st.sampled_from(["A", "B", "C", "Person", "x1"])
roles = st.builds(Role, st.sampled_from(["r", "s", "hasChild"]), st.booleans())
numbers = st.integers(min_value=0, max_value=2**40)


def concepts():
    leaves = st.one_of(st.builds(Atom, names), st.just(TOP), st.just(BOTTOM))
    return st.recursive(leaves, lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Exists, roles, sub),
        st.builds(Forall, roles, sub),
        st.builds(AtLeast, numbers, roles, sub),
        st.builds(AtMost, numbers, roles, sub),
    ), max_leaves=12)


inds = st.sampled_from(["a", "b", "ann"])


@st.composite
def kbs(draw):
    kb = KnowledgeBase()
    # role names here never double as concept names, so bare `x sub y` stays unambiguous
    kb.rbox = draw(st.lists(st.one_of(st.builds(SubRole, roles, roles),
                                      st.builds(TransAxiom, roles)), max_size=3))
    kb.tbox = draw(st.lists(st.one_of(st.builds(Subsumption, concepts(), concepts()),
                                      st.builds(Equivalence, concepts(), concepts())),
                            max_size=3))
    kb.abox = draw(st.lists(st.one_of(st.builds(ConceptAssertion, inds, concepts()),
                                      st.builds(RoleAssertion, roles, inds, inds),
                                      st.builds(Distinct, inds, inds)), max_size=4))
    return kb


@given(concepts())
@settings(max_examples=300)
def test_concept_round_trip(c):
    assert parse_concept(format_concept(c)) is c


@given(kbs())
@settings(max_examples=200)
def test_kb_round_trip(kb):
    again = parse_kb(format_kb(kb), check_roles=False)
    assert (again.tbox, again.abox) == (kb.tbox, kb.abox)
    floating = floating_role_inclusions(kb)
    expected = [SubRole(inv(x.sub), inv(x.sup)) if x in floating else x for x in kb.rbox]
    assert again.rbox == expected
    if not floating:
        assert again.rbox == kb.rbox


def test_isolated_role_inclusion_prints_in_inverse_form():
    kb = KnowledgeBase()
    kb.rbox = [SubRole(r, s)]
    assert format_kb(kb) == "inv(r) sub inv(s);\n"
    kb.abox = [ConceptAssertion("a", Exists(s, A))]
    assert format_kb(kb).startswith("r sub s;")


def test_atom_inclusion_between_role_names_prints_unambiguously():
    kb = KnowledgeBase()
    kb.tbox = [Subsumption(Atom("r"), Atom("B"))]
    kb.abox = [ConceptAssertion("a", Exists(r, A))]
    again = parse_kb(format_kb(kb))
    assert again.tbox == kb.tbox and again.rbox == []
