from functools import cmp_to_key

import pytest

from conftest import P, T
from ordcalc import (
    ZERO,
    MixedSystemError,
    System,
    UniverseSpec,
    alpha_plus,
    compare,
    compare_T,
    enumerate_terms,
    fixpoint_F,
    localization,
    star,
    valid_T,
)
from ordcalc.stepwise import P_set, check_same_system
from ordcalc.terms import Collapse, DomainError, max_level, omega_level, subterms
from oracles import cnf_cmp, cnf_of, subterm_star

U = enumerate_terms(UniverseSpec(System.STEP, 7, 2))


@pytest.mark.parametrize("text, ok", [
    ("t0(t1(0))", True),
    ("t0(t2(0))", False),
    ("t1(t2(t1(0)))", True),
    ("t1(t1(0))", True),
    ("0", True),
])
def test_valid_T(text, ok):
    assert valid_T(P(text)) is ok


def test_star_examples():
    assert star(P("t1(0)+t0(t1(t1(0)))"), 0) == P("t0(t1(t1(0)))")
    assert star(P("t2(t1(0))"), 1) == P("t1(0)")
    assert star(P("t1(0)"), 0) is ZERO


def test_star_matches_subterm_scan():
    key = cmp_to_key(compare)
    for t in U:
        for j in range(3):
            found = subterm_star(t, j)
            assert star(t, j) == (max(found, key=key) if found else ZERO)


def test_compare_examples():
    assert compare(P("t0(0)"), P("t0(t0(0))")) == -1
    assert compare(P("t1(t0(0))"), P("t1(0)")) == 1
    assert compare(P("t0(t1(t2(0)))"), P("t0(t1(0)+t0(t1(t2(0))))")) == -1
    assert compare(P("t0(t1(0))"), P("t0(t1(0))")) == 0


def test_compare_matches_cnf_below_epsilon0(u_level0):
    cnf = [cnf_of(t) for t in u_level0]
    for i, a in enumerate(u_level0):
        for j, b in enumerate(u_level0):
            assert compare(a, b) == cnf_cmp(cnf[i], cnf[j])


def test_compare_rejects_mixed_and_invalid():
    with pytest.raises(MixedSystemError):
        check_same_system(P("t0(0)"), P("b0(0)"))
    with pytest.raises(DomainError):
        compare_T(P("t0(0)"), P("b0(0)"))
    with pytest.raises(DomainError):
        compare_T(P("t0(t2(0))"), P("t0(0)"))


def test_level_segments():
    # Omega_i <= theta_i(x) < Omega_{i+1}
    for t in U:
        if t is ZERO or max_level(t) < 0:
            continue
        if isinstance(t, Collapse):
            assert compare(omega_level(t.level), t) <= 0
            assert compare(t, omega_level(t.level + 1)) < 0


def test_p_set():
    assert set(P_set(P("t0(t1(0)+t0(0))"), 0)) == {P("t0(t1(0)+t0(0))"), P("t0(0)")}
    assert P_set(P("t1(0)"), 0) == ()
    assert set(P_set(P("t1(t2(t1(0)))"), 1)) == {P("t1(t2(t1(0)))"), P("t1(0)")}


def test_p_set_is_subterm_scan():
    for t in U[:400]:
        for i in range(3):
            want = {s for s in subterms(t) if getattr(s, "level", None) == i}
            got = set(P_set(t, i))
            assert got <= want


def test_fixpoint():
    assert fixpoint_F(P("t1(0)"), P("t0(t1(t1(0)))"), 0) is True
    assert fixpoint_F(ZERO, P("t0(t0(0))"), 0) is False
    assert fixpoint_F(ZERO, P("t1(0)"), 1) is False


def test_alpha_plus():
    assert alpha_plus(P("t0(0)")) == P("t0(t0(0))")
    assert alpha_plus(P("t1(0)")) == P("t1(t0(0))")
    assert alpha_plus(P("t0(t1(0))")) == P("t0(t1(0)+t0(0))")


def test_localization_examples():
    loc = localization(P("t0(t1(0)+t0(t1(t2(0))))"), 0)
    assert list(loc.entries) == [P("t0(0)"), P("t0(t1(t2(0)))"), P("t0(t1(0)+t0(t1(t2(0))))")]
    assert list(localization(P("t0(0)"), 0).entries) == [P("t0(0)")]
    assert list(localization(P("t0(t1(0))"), 0).entries) == [P("t0(0)"), P("t0(t1(0))")]


def test_localization_increasing():
    for t in U:
        if isinstance(t, Collapse):
            e = localization(t, t.level).entries
            assert all(compare(x, y) < 0 for x, y in zip(e, e[1:]))
