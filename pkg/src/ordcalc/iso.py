"""Translations between the stepwise and the simultaneous system.

``it(m, .)`` maps stepwise terms below Omega_{m+2} onto the domain of the
level-m simultaneous collapse, ``rt(m, .)`` goes back.  ``f`` and ``g`` apply
them under every collapse and are mutually inverse order isomorphisms.
"""

from __future__ import annotations

from functools import lru_cache

from .stepwise import compare, localization, valid_T
from .terms import (
    ZERO,
    Collapse,
    DomainError,
    Sum,
    System,
    Term,
    Zero,
    components,
    concat,
    fixed_part,
    make_sum,
    to_text,
)


@lru_cache(maxsize=1 << 18)
def f(alpha: Term) -> Term:
    if isinstance(alpha, Zero):
        return ZERO
    if isinstance(alpha, Sum):
        return concat([f(p) for p in alpha.parts])
    return Collapse(System.BAR, alpha.level, it(alpha.level, alpha.arg))


@lru_cache(maxsize=1 << 18)
def g(alpha: Term) -> Term:
    if isinstance(alpha, Zero):
        return ZERO
    if isinstance(alpha, Sum):
        return concat([g(p) for p in alpha.parts])
    return Collapse(System.STEP, alpha.level, rt(alpha.level, alpha.arg))


@lru_cache(maxsize=1 << 18)
def it(m: int, alpha: Term) -> Term:
    comps = components(alpha)
    if any(c.level > m + 1 for c in comps):
        raise DomainError(f"it({m}, {to_text(alpha)}): component above Omega_{m + 2}")
    deltas = [c for c in comps if c.level == m + 1]
    eta = concat([c for c in comps if c.level <= m])
    if not deltas:
        return f(eta)
    d1 = deltas[0]
    if d1.arg is ZERO:
        xi: Term = ZERO
    else:
        head = localization(d1, m + 1)[1]
        xi = fixed_part(head.arg, m + 1)
    new = [Collapse(System.BAR, m + 1, it(m + 1, d.arg)) for d in deltas]
    if xi is not ZERO and compare(Collapse(System.STEP, m + 1, xi), d1) >= 0:
        new = new[1:]
    xi_new = it(m + 1, xi) if xi is not ZERO else ZERO
    return concat([xi_new] + new + [f(eta)])


@lru_cache(maxsize=1 << 18)
def rt(m: int, alpha: Term) -> Term:
    comps = components(alpha)
    xi = [c for c in comps if c.level >= m + 2]
    deltas = [c for c in comps if c.level == m + 1]
    eta = concat([c for c in comps if c.level <= m])
    out = []
    if xi:
        # xi has no component at level m+1, so this recursion climbs in m
        out.append(Collapse(System.STEP, m + 1, rt(m + 1, concat(xi))))
    out.extend(Collapse(System.STEP, m + 1, rt(m + 1, d.arg)) for d in deltas)
    out.append(g(eta))
    # ordinal addition: the head is absorbed when it lies below Delta'_1
    return make_sum(out)


def to_bar(alpha: Term) -> Term:
    if not valid_T(alpha):
        raise DomainError(f"not a valid stepwise term: {to_text(alpha)}")
    return f(alpha)


def to_step(alpha: Term) -> Term:
    from .bar import valid_bar

    if not valid_bar(alpha):
        raise DomainError(f"not a valid simultaneous term: {to_text(alpha)}")
    return g(alpha)
