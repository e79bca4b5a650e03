import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, T
from ordcalc import (
    ZERO,
    Collapse,
    Kind,
    MixedSystemError,
    ParseError,
    System,
    UniverseSpec,
    classify,
    collapse,
    enumerate_terms,
    make_sum,
    nat_to_term,
    omega_level,
    parse,
    split_arg,
    term_to_nat,
    to_text,
)
from ordcalc.terms import components, end, mc, predecessor
from oracles import cnf_add, cnf_of

U = enumerate_terms(UniverseSpec(System.STEP, 7, 2))
U0 = enumerate_terms(UniverseSpec(System.STEP, 9, 0))
terms = st.sampled_from(U)


def test_interning():
    assert P("t0(t1(0))") is P("t0(t1(0))")
    assert P("t0(t1(0))") == collapse(System.STEP, 0, omega_level(1))
    assert P("0") is ZERO


def test_parse_shape():
    t = P("t0(t1(0))")
    assert isinstance(t, Collapse) and t.level == 0 and t.system is System.STEP
    assert t.arg == Collapse(System.STEP, 1, ZERO)


@pytest.mark.parametrize("text, want", [
    ("2", "t0(0)+t0(0)"),
    ("t0(3)", "t0(t0(0)+t0(0)+t0(0))"),
    ("t1(0)+2", "t1(0)+t0(0)+t0(0)"),
    ("b0(1)", "b0(b0(0))"),
    (" t0 ( t1(0) ) ", "t0(t1(0))"),
])
def test_decimal_sugar(text, want):
    assert T(P(text)) == want


def test_pretty_printing():
    assert to_text(P("t0(t1(0))+t0(0)+t0(0)"), pretty=True) == "t0(t1(0))+2"
    assert to_text(P("t0(t0(0)+t0(0))"), pretty=True) == "t0(2)"
    assert to_text(ZERO, pretty=True) == "0"


@pytest.mark.parametrize("text", ["t0(", "t0(0", "t(0)", "t0(0)+", "x", "", "t0(0))", "t0(0)++t0(0)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_mixed_systems_rejected():
    with pytest.raises(MixedSystemError):
        parse("t0(0)+b0(0)")
    with pytest.raises(MixedSystemError):
        parse("t0(0)", System.BAR)


def test_make_sum_absorbs():
    assert make_sum([P("t0(0)")]) == P("t0(0)")
    assert make_sum([P("t0(0)"), P("t1(0)")]) == P("t1(0)")
    assert make_sum([P("t1(0)"), P("t0(0)"), P("t0(0)")]) == P("t1(0)+t0(0)+t0(0)")
    assert make_sum([]) is ZERO
    assert make_sum([ZERO, P("t0(0)"), ZERO]) == P("t0(0)")


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(U0), max_size=4))
def test_make_sum_matches_cnf_addition(parts):
    want = ()
    for p in parts:
        want = cnf_add(want, cnf_of(p))
    assert cnf_of(make_sum(parts)) == want


@settings(max_examples=200, deadline=None)
@given(terms, terms, terms)
def test_make_sum_associative(a, b, c):
    assert make_sum([make_sum([a, b]), c]) == make_sum([a, make_sum([b, c])])


def test_end_and_mc():
    assert end(ZERO) is ZERO
    assert end(P("t1(0)+t0(0)")) == P("t0(0)")
    assert mc(P("t1(0)+t0(0)+t0(0)")) == P("t1(0)")


def test_classify():
    assert classify(ZERO) is Kind.ZERO
    assert classify(P("t1(0)+t0(0)")) is Kind.SUCCESSOR
    assert predecessor(P("t1(0)+t0(0)")) == P("t1(0)")
    assert classify(P("t0(t0(0))")) is Kind.LIMIT
    assert classify(P("t0(0)")) is Kind.SUCCESSOR
    assert predecessor(P("t0(0)")) is ZERO


def test_naturals():
    assert nat_to_term(0) is ZERO
    assert nat_to_term(2) == P("t0(0)+t0(0)")
    assert term_to_nat(P("t1(0)")) is None
    assert term_to_nat(P("3")) == 3
    assert nat_to_term(2, System.BAR) == P("b0(0)+b0(0)")


def test_split_arg():
    s = split_arg(P("t1(0)+t0(0)"), 0)
    assert (s.xi, s.delta, s.eta) == (ZERO, P("t1(0)"), P("t0(0)"))
    s = split_arg(P("t0(0)"), 0)
    assert (s.xi, s.delta, s.eta) == (ZERO, ZERO, P("t0(0)"))
    s = split_arg(P("b2(0)+b1(0)"), 0)
    assert (s.xi, s.delta, s.eta) == (P("b2(0)"), P("b1(0)"), ZERO)


@settings(max_examples=300, deadline=None)
@given(terms, st.integers(0, 2))
def test_split_arg_reassembles(xi, j):
    s = split_arg(xi, j)
    assert make_sum([s.xi, s.delta, s.eta]) == xi
    assert all(c.level >= j + 2 for c in components(s.xi))
    assert all(c.level == j + 1 for c in components(s.delta))
    assert all(c.level <= j for c in components(s.eta))


def test_roundtrip_whole_universe():
    for t in U:
        assert parse(to_text(t)) is t
        assert parse(to_text(t, pretty=True)) is t
