import pytest

from ordcalc import System, UniverseSpec, enumerate_terms, parse, to_text


def P(text, system=None):
    return parse(text, system)


def T(term):
    return to_text(term)


@pytest.fixture(scope="session")
def u62():
    return enumerate_terms(UniverseSpec(System.STEP, 6, 2))


@pytest.fixture(scope="session")
def u_level0():
    return enumerate_terms(UniverseSpec(System.STEP, 11, 0))
