import random

import pytest

from ilp_brute import brute_feasible, random_problem
from shiq.ilfc import (
    FeasibilityProblem, Infeasible, ProblemSyntaxError, find_solution, ge, is_feasible, le,
    parse_problem, preprocess,
)


def test_small_systems():
    p = FeasibilityProblem.dense(3, [le({0, 1}, 1), ge({0}, 1), ge({1, 2}, 2)])
    sol = find_solution(p)
    assert sol is not None and p.satisfied_by(sol)
    assert not is_feasible(p.pin(2))


def test_empty_problem_is_feasible():
    assert is_feasible(FeasibilityProblem.dense(0))
    assert is_feasible(FeasibilityProblem.dense(2, [ge({0, 1}, 0)]))


def test_empty_sum_against_positive_bound():
    assert not is_feasible(FeasibilityProblem.dense(1, [ge(set(), 1)]))


def test_unbounded_variables_absorb_ge_constraints():
    # x1 is in no ≤-constraint, so the ≥-constraint using it is dropped
    p = FeasibilityProblem.dense(2, [le({0}, 0), ge({0, 1}, 10**9)])
    red = preprocess(p)
    assert red.ge == [] and len(red.deleted_ge) == 1
    assert 1 in red.unbounded and red.upper[0] == 0
    sol = find_solution(p)
    assert p.satisfied_by(sol)


def test_pins_can_make_preprocessing_fail():
    p = FeasibilityProblem.dense(2, [ge({0, 1}, 1)], pinned_zero={0, 1})
    with pytest.raises(Infeasible):
        preprocess(p)
    assert not is_feasible(p)


def test_large_bounds_are_fast():
    n = 10**9
    p = FeasibilityProblem.dense(6, [ge({0, 1, 4, 5}, 1), ge({2, 3, 4, 5}, n),
                                     le({0, 2, 4}, n)])
    assert is_feasible(p)
    assert not is_feasible(p.pin(1, 3, 4, 5))


def test_matches_enumeration():
    rng = random.Random(2024)
    for _ in range(2000):
        p = random_problem(rng)
        sol = find_solution(p)
        assert (sol is not None) == brute_feasible(p), str(p)
        if sol is not None:
            assert p.satisfied_by(sol)


def test_parse_problem():
    p = parse_problem("""
        # comment
        x5 + x6 + x7 <= 2
        x5 + x7 >= 1
        x3 = 0
    """)
    assert p.variables == {3, 5, 6, 7}
    assert p.pinned_zero == {3}
    assert [str(c) for c in p.constraints] == ["x5 + x6 + x7 <= 2", "x5 + x7 >= 1"]


@pytest.mark.parametrize("text", ["x1 + <= 2", "x1 = 3", "y1 >= 2", "x1 < 3"])
def test_parse_problem_errors(text):
    with pytest.raises(ProblemSyntaxError):
        parse_problem(text)
