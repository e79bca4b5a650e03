import pytest

from conftest import P
from ordcalc import ZERO, System, compare, f, g, it, localization, rt, star, star_bar, to_bar, to_step
from ordcalc.terms import Collapse, DomainError, max_level


def test_it_rt_examples():
    assert it(0, ZERO) is ZERO
    assert it(0, P("t1(0)")) == P("b1(0)")
    assert it(0, P("t1(t2(0)+t0(0))")) == P("b2(0)+b1(b2(0)+b0(0))")
    assert rt(0, P("b1(0)")) == P("t1(0)")
    assert rt(1, P("b2(0)")) == P("t2(0)")
    assert rt(0, P("b2(0)")) == P("t1(t2(0))")


def test_translation_example():
    a = P("t0(t1(t2(0)+t0(0)))")
    b = P("b0(b2(0)+b1(b2(0)+b0(0)))")
    assert f(a) == b
    assert g(b) == a
    assert g(P("b0(b2(0))")) == P("t0(t1(t2(0)))")


@pytest.mark.parametrize("i", range(4))
def test_omegas_fixed(i):
    assert f(Collapse(System.STEP, i, ZERO)) == Collapse(System.BAR, i, ZERO)


def test_roundtrip_and_order(u62):
    images = [f(a) for a in u62]
    for a, b in zip(u62, images):
        assert g(b) is a
        assert max_level(b) == max_level(a)
    for x, y in zip(images, images[1:]):
        assert compare(x, y) == -1


def test_star_and_localization_transport(u62):
    for a in u62:
        b = f(a)
        for k in range(3):
            assert star_bar(b, k) == f(star(a, k))
        if isinstance(a, Collapse):
            loc = localization(a, a.level).entries
            assert localization(b, b.level).entries == tuple(f(x) for x in loc)


def test_checked_entry_points():
    assert to_bar(P("t0(t1(t1(0)))")) == P("b0(b1(b1(0)))")
    assert to_step(P("b0(b2(0))")) == P("t0(t1(t2(0)))")
    with pytest.raises(DomainError):
        to_bar(P("t0(t2(0))"))
    with pytest.raises(DomainError):
        to_step(P("t0(0)"))
