import pytest

from conftest import CORPUS, corpus_files, expected_verdict
from shiq.engine import check_satisfiability
from shiq.modelgen import (
    ExtractionError, ModelSyntaxError, check_model_graph, format_model,
    model_for, parse_model, verify_model,
)
from shiq.oracle import as_oracle_model, satisfies
from shiq.parser import parse_kb

SAT_FILES = [p for p in corpus_files() if expected_verdict(p) == "SAT"]


def solve(name):
    kb = parse_kb((CORPUS / name).read_text())
    return kb, check_satisfiability(kb)


def test_example2_model():
    kb, r = solve("example2.kb")
    m, interp = model_for(r)
    assert m.exact
    assert len(interp.domain) == 4
    a, b = interp.individuals["a"], interp.individuals["b"]
    fresh = set(interp.domain) - {a, b}
    assert interp.roles["r"] == {(a, b)} | {(a, y) for y in fresh}
    assert interp.concepts["A1"] == {b} | fresh
    assert len(interp.concepts["A2"]) == 1 and len(interp.concepts["A3"]) == 2
    assert interp.concepts["A2"] <= interp.concepts["A3"]
    assert verify_model(interp, kb).ok


@pytest.mark.parametrize("path", SAT_FILES, ids=lambda p: p.stem)
def test_sat_corpus_models_verify(path):
    kb = parse_kb(path.read_text())
    r = check_satisfiability(kb)
    m, interp = model_for(r)
    assert check_model_graph(m, r.tableau.rc) == []
    report = verify_model(interp, kb, r.tableau.rc)
    assert report.failures == []
    if m.exact:
        assert not report.unknowns
        assert satisfies(as_oracle_model(interp), kb)


def test_cyclic_kb_leaves_a_frontier():
    kb, r = solve("cyclic.kb")
    m, interp = model_for(r, depth_cap=5)
    assert not m.exact and interp.frontier
    report = verify_model(interp, kb)
    assert report.failures == [] and report.unknowns


def test_unsat_has_no_model():
    _, r = solve("example1.kb")
    with pytest.raises(ExtractionError):
        model_for(r)


def test_wrong_model_is_caught():
    kb, r = solve("example2.kb")
    _, interp = model_for(r)
    interp.concepts["A2"] = set()
    report = verify_model(interp, kb)
    assert [c.subject for c in report.failures] == ["a:∃r.A2"]


def test_model_file_round_trip():
    kb, r = solve("cyclic.kb")
    _, interp = model_for(r, depth_cap=3)
    text = format_model(interp)
    back = parse_model(text)
    assert format_model(back) == text
    assert back.frontier == interp.frontier
    assert back.roles == interp.roles and back.individuals == interp.individuals


def test_model_file_errors():
    with pytest.raises(ModelSyntaxError):
        parse_model("element 0\nrole r: (0,1)\n")  # 1 is not an element
    with pytest.raises(ModelSyntaxError):
        parse_model("elements 0\n")


def test_hand_written_model():
    kb = parse_kb("A sub some r . B; assert a : A;")
    good = parse_model("element 0\nelement 1\nindividual a = 0\nconcept A: 0\n"
                       "concept B: 1\nrole r: (0,1)\n")
    assert verify_model(good, kb).ok
    bad = parse_model("element 0\nindividual a = 0\nconcept A: 0\n")
    assert not verify_model(bad, kb).ok
