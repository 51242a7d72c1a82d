import random
import re

import pytest

from conftest import CORPUS, expected_verdict
from kbgen import random_shiq_kb
from shiq.engine import ResourceLimitExceeded, Tableau, check_satisfiability
from shiq.graph import CHECKING_FEASIBILITY, Status
from shiq.invariants import check_tableau
from shiq.oracle import find_model
from shiq.parser import parse_kb
from shiq.rbox import NonSimpleRoleError, closure_for_kb


def load(name):
    return parse_kb((CORPUS / name).read_text())


def test_corpus_verdicts(corpus_kb):
    kb = parse_kb(corpus_kb.read_text())
    assert check_satisfiability(kb).verdict == expected_verdict(corpus_kb)


def test_corpus_invariants_after_every_expansion(corpus_kb):
    kb = parse_kb(corpus_kb.read_text())
    tab = Tableau(kb, check_invariants=True)
    tab.run()
    assert check_tableau(tab) == []


def test_trace_of_a_small_run():
    lines = []
    r = check_satisfiability(load("example1.kb"), trace=lines.append)
    assert not r.satisfiable
    assert all(re.fullmatch(r"[A-Z0-9]+ \d+( -> \d+(, \d+)*)?", l) for l in lines)
    assert lines[:6] == ["FS2 0 -> 1", "TP 1 -> 2", "US 2 -> 3", "US 3 -> 4", "KCC2 1",
                         "KCC1 0 -> 5"]
    assert lines[-1] == "UPS2 0"
    assert len(r.graph) == 10


def test_example2_state_and_successors():
    r = check_satisfiability(load("example2.kb"))
    states = [n for n in r.graph.nodes if n.is_state and n.complex]
    assert len(states) == 1
    u = states[0]
    cf = [w for w in u.succs if w.ce_label.kind == CHECKING_FEASIBILITY]
    assert sorted(sorted(str(f) for f in w.label) for w in cf) == [
        ["A1", "A2"], ["A1", "A2", "A3"], ["A1", "A3"]]
    assert all(w.ce_label.ind == "a" for w in cf)
    assert u.status is Status.OPEN


def test_example3_pins_every_closed_successor():
    r = check_satisfiability(load("example3.kb"))
    u = r.graph.nodes[1]
    assert u.is_state and u.status is Status.CLOSED
    closed = {w.id for w in u.succs if w.status is Status.CLOSED}
    assert closed and closed <= u.il_pins


def test_numbers_are_not_unfolded():
    r = check_satisfiability(load("example3_1000000000.kb"))
    assert not r.satisfiable
    assert len(r.graph) < 100


def test_resource_cap():
    kb = parse_kb("A sub some r . (B and some r . A); A sub some s . not B; assert a : A;")
    with pytest.raises(ResourceLimitExceeded):
        check_satisfiability(kb, max_nodes=5)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_seeded_runs_agree(corpus_kb, seed):
    kb = parse_kb(corpus_kb.read_text())
    assert check_satisfiability(kb, seed=seed).verdict == expected_verdict(corpus_kb)


def test_random_shiq_against_bounded_models():
    # only one direction is checkable here: a finite model refutes UNSAT
    checked = 0
    for i in range(150):
        kb = random_shiq_kb(random.Random(i))
        try:
            closure_for_kb(kb)
            r = check_satisfiability(kb, max_nodes=5000)
        except (NonSimpleRoleError, ResourceLimitExceeded):
            continue
        if not r.satisfiable:
            assert find_model(kb, 3) is None, i
        checked += 1
    assert checked > 100
