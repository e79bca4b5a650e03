import pytest

from conftest import P
from ordcalc import (
    ZERO,
    System,
    UniverseSpec,
    chi,
    chi_bar,
    compare,
    compare_bar,
    dom_ind,
    dom_ind_bar,
    enumerate_terms,
    f,
    fundseq_bar,
    fundseq_bar_case,
    fundseq_case,
    g,
    ht,
    k_sets,
    star_bar,
    valid_bar,
)
from ordcalc.bar import in_dom, kstar_max
from ordcalc.terms import DomainError

UB = enumerate_terms(UniverseSpec(System.BAR, 6, 2))


def test_k_sets():
    assert set(k_sets(P("b1(b2(0))"), 1).ktau) == {P("b1(b2(0))")}
    # K*_1 of a level-0 collapse is empty, so the maximum is 0
    assert kstar_max(P("b0(b2(0))"), 1) is ZERO
    assert star_bar(P("b1(0)"), 0) is ZERO


def test_in_dom():
    for m in range(4):
        assert in_dom(ZERO, m)
    assert in_dom(P("b2(0)"), 0)
    assert in_dom(P("b1(0)+b0(0)"), 1)


@pytest.mark.parametrize("text", ["b0(b2(0))", "b0(b1(b0(b1(0))))", "b0(0)", "b0(b2(0)+b1(b2(0)+b0(0)))"])
def test_valid(text):
    assert valid_bar(P(text))


def test_valid_agrees_with_translation():
    # a bar term is valid iff it is the f-image of a stepwise term
    image = set(UB)
    for b in UB:
        assert valid_bar(b)
        assert f(g(b)) == b
    assert not valid_bar(P("t0(0)"))
    assert len(image) == len(UB)


def test_compare():
    assert compare_bar(P("b0(0)"), P("b1(0)")) == -1
    assert compare_bar(P("b0(b2(0))"), P("b0(b2(0)+b1(b2(0)+b0(0)))")) == -1
    assert compare_bar(P("b1(b2(0))"), P("b1(0)")) == 1


def test_compare_agrees_with_stepwise_images():
    for a, b in zip(UB, UB[1:]):
        assert compare_bar(a, b) == -1
        assert compare(g(a), g(b)) == -1


def test_ht():
    assert ht(ZERO) == 0
    assert ht(P("b0(0)")) == 1
    assert ht(P("b0(b2(0))")) == 3


def test_chi_and_dom():
    assert chi_bar(0, P("b1(0)")) == 1
    assert dom_ind_bar(P("b0(b2(0))")) == 0
    assert dom_ind_bar(P("b2(0)")) == 2
    for b in UB:
        assert dom_ind_bar(b) == dom_ind(g(b))
        for i in range(3):
            assert chi_bar(i, b) == chi(i, g(b))


def test_fundseq_examples():
    assert fundseq_bar(P("b0(b1(0))"), 1) == P("b0(b0(0))")
    for z in ["0", "b0(0)", "b1(0)", "b1(b0(0))"]:
        assert fundseq_bar(P("b2(0)"), P(z)) == P(z)
    for n in range(4):
        assert fundseq_bar(P("b0(b2(0))"), n) == f(fundseq_case(g(P("b0(b2(0))")), n).result)
    assert [fundseq_bar(P("b0(b2(0))"), n) for n in range(3)] == [
        P("b0(b1(0))"), P("b0(b1(b1(0)))"), P("b0(b1(b1(b1(0))))")]


def test_commutation_on_small_universe():
    # the native clauses against the route through the stepwise system
    for b in UB:
        zs = range(3) if dom_ind_bar(b) == 0 else [P("0"), P("b0(0)"), P("b0(b0(0))")]
        for z in zs:
            routed = f(fundseq_case(g(b), z if isinstance(z, int) else g(z)).result)
            assert fundseq_bar(b, z) == routed


def test_literal_clauses_differ_at_witnesses():
    w = P("b0(b2(0)+b1(b1(b2(0))))")
    assert fundseq_case(w, 0, literal=True).result == P("b0(b2(0)+b1(b2(0)))")
    assert fundseq_bar(w, 0) == P("b0(b2(0))") == f(fundseq_case(g(w), 0).result)
    w = P("b0(b2(0)+b2(0))")
    assert fundseq_case(w, 1, literal=True).result == P("b0(b2(0)+b1(b2(0)))")
    assert fundseq_bar(w, 1) == P("b0(b2(0)+b1(b2(0)+b1(b2(0))))")


def test_errors():
    with pytest.raises(DomainError):
        fundseq_bar(P("t0(0)"), 0)
    with pytest.raises(DomainError):
        fundseq_bar_case(P("b2(0)"), P("b2(0)"))
