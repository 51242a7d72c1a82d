from conftest import CORPUS
from shiq.dot import to_dot
from shiq.engine import Tableau, check_satisfiability
from shiq.graph import Status
from shiq.invariants import InvariantViolation, check_tableau, status_history_ok
from shiq.parser import parse_kb

import pytest


def example(name):
    return parse_kb((CORPUS / name).read_text())


def test_dot_output():
    r = check_satisfiability(example("example2.kb"))
    text = to_dot(r.graph)
    assert text.startswith("digraph tableau {") and text.rstrip().endswith("}")
    assert text.count("peripheries=2") == sum(1 for n in r.graph.nodes if n.is_state)
    assert '[label="<CF, {r}, a>"]' in text
    assert text.count(" -> ") == sum(len(n.succs) for n in r.graph.nodes)


def test_dot_truncates_long_labels():
    r = check_satisfiability(example("example2.kb"))
    assert "more" in to_dot(r.graph, max_formulas=2)


def test_status_lattice():
    assert status_history_ok(Status.UNEXPANDED, Status.P_EXPANDED)
    assert status_history_ok(Status.F_EXPANDED, Status.OPEN)
    assert not status_history_ok(Status.OPEN, Status.CLOSED)
    assert not status_history_ok(Status.F_EXPANDED, Status.P_EXPANDED)


def test_violations_are_detected():
    tab = Tableau(example("example2.kb"))
    tab.run()
    assert check_tableau(tab) == []
    state = next(n for n in tab.graph.nodes if n.is_state and not n.complex)
    twin = next(n for n in tab.graph.nodes if n.is_state and not n.complex and n is not state)
    twin.label = state.label
    assert any("share a label" in v for v in check_tableau(tab))
    with pytest.raises(InvariantViolation):
        check_tableau(tab, strict=True)
