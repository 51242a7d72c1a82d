import pytest

from shiq.rbox import NonSimpleRoleError, compute_rbox_closure
from shiq.syntax import Role, SubRole, TransAxiom, inv

r, s, t, u = Role("r"), Role("s"), Role("t"), Role("u")


def test_hierarchy_is_reflexive_transitive_and_closed_under_inverse():
    rc = compute_rbox_closure([SubRole(r, s), SubRole(s, inv(t))])
    assert rc.sub(r, r)
    assert rc.sub(r, s) and rc.sub(r, inv(t))
    assert rc.sub(inv(r), inv(s)) and rc.sub(inv(r), t)
    assert not rc.sub(s, r)
    assert rc.subs(t) == {t, inv(s), inv(r)}


def test_transitivity_covers_inverses():
    rc = compute_rbox_closure([TransAxiom(s)])
    assert rc.is_transitive(s) and rc.is_transitive(inv(s))
    assert not rc.is_transitive(r)


def test_simple_roles():
    rc = compute_rbox_closure([TransAxiom(t), SubRole(t, s), SubRole(r, s)])
    assert not rc.is_simple(t)
    assert not rc.is_simple(s)  # has a transitive subrole
    assert rc.is_simple(r)


def test_number_restrictions_need_simple_roles():
    with pytest.raises(NonSimpleRoleError):
        compute_rbox_closure([TransAxiom(t), SubRole(t, s)], number_roles=[s])


def test_numeric_roles_close_under_inverse_and_subroles():
    rc = compute_rbox_closure([SubRole(r, s), SubRole(u, inv(s))], number_roles=[s])
    assert rc.numeric == {s, inv(s), r, inv(r), u, inv(u)}
    rc2 = compute_rbox_closure([SubRole(r, s)], number_roles=[r])
    assert not rc2.is_numeric(s)


def test_unknown_roles_default_to_themselves():
    rc = compute_rbox_closure([])
    assert rc.supers(r) == {r}
    assert rc.is_simple(r) and not rc.is_numeric(r)
