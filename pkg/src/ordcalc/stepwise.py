"""Order, star operators and localization for the stepwise system T.

The comparison and star routines are written once for both systems: for
simultaneous terms the maximum of the K-set coincides with the star value,
so :mod:`ordcalc.bar` reuses them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache

from .terms import (
    ZERO,
    Collapse,
    DomainError,
    MixedSystemError,
    Sum,
    System,
    Term,
    Zero,
    components,
    concat,
    fixed_part,
    one,
    omega_level,
    small_part,
    system_of,
    to_text,
)

LT, EQ, GT = -1, 0, 1


@lru_cache(maxsize=1 << 20)
def compare(a: Term, b: Term) -> int:
    """Three-way ordinal comparison: -1, 0 or 1."""
    # nodes are interned, so identity is equality
    if a is b:
        return EQ
    ca = a.parts if type(a) is Sum else () if type(a) is Zero else (a,)
    cb = b.parts if type(b) is Sum else () if type(b) is Zero else (b,)
    for x, y in zip(ca, cb):
        if x is not y:
            return _cmp_principal(x, y)
    return (len(ca) > len(cb)) - (len(ca) < len(cb))


@lru_cache(maxsize=1 << 20)
def _cmp_principal(x: Collapse, y: Collapse) -> int:
    if x is y:
        return EQ
    if x.level != y.level:
        return LT if x.level < y.level else GT
    j = x.level
    c = compare(x.arg, y.arg)
    if c == EQ:
        return EQ
    if c < 0:
        return LT if compare(star(x.arg, j), y) < 0 else GT
    return GT if compare(star(y.arg, j), x) < 0 else LT


@lru_cache(maxsize=1 << 20)
def star(alpha: Term, j: int) -> Term:
    """Largest level-j collapse subterm, lower levels being atomic; 0 if none."""
    if isinstance(alpha, Zero):
        return ZERO
    if isinstance(alpha, Sum):
        best: Term = ZERO
        for p in alpha.parts:
            s = star(p, j)
            if compare(s, best) > 0:
                best = s
        return best
    if alpha.level < j:
        return ZERO
    if alpha.level == j:
        return alpha
    return star(alpha.arg, j)


def max_term(terms) -> Term:
    best: Term = ZERO
    for t in terms:
        if compare(t, best) > 0:
            best = t
    return best


def check_same_system(*terms: Term, system: System | None = None) -> None:
    seen = system
    for t in terms:
        s = system_of(t)
        if s is None:
            continue
        if seen is None:
            seen = s
        elif s is not seen:
            raise MixedSystemError("terms belong to different systems")


@lru_cache(maxsize=1 << 18)
def _valid_step(alpha: Term) -> bool:
    if isinstance(alpha, Zero):
        return True
    if isinstance(alpha, Sum):
        parts = alpha.parts
        if len(parts) < 2:
            return False
        for a, b in zip(parts, parts[1:]):
            if compare(a, b) < 0:
                return False
        return all(_valid_step(p) for p in parts)
    if alpha.system is not System.STEP or alpha.level < 0:
        return False
    if any(c.level > alpha.level + 1 for c in components(alpha.arg)):
        return False
    return _valid_step(alpha.arg)


def valid_T(alpha: Term) -> bool:
    try:
        if system_of(alpha) not in (None, System.STEP):
            return False
    except MixedSystemError:
        return False
    return _valid_step(alpha)


def compare_T(alpha: Term, beta: Term) -> int:
    for t in (alpha, beta):
        if not valid_T(t):
            raise DomainError(f"not a valid stepwise term: {to_text(t)}")
    return compare(alpha, beta)


def P_set(alpha: Term, i: int) -> tuple:
    """Level-i collapse subterms not inside a collapse of lower level, ascending."""
    found = set()
    stack = [alpha]
    while stack:
        t = stack.pop()
        if isinstance(t, Sum):
            stack.extend(t.parts)
        elif isinstance(t, Collapse) and t.level >= i:
            if t.level == i:
                found.add(t)
            stack.append(t.arg)
    return tuple(sorted(found, key=cmp_to_key(compare)))


def fixpoint_F(delta: Term, eta: Term, j: int) -> bool:
    """eta = theta_j(Gamma + rho) with Gamma > delta and eta > star(delta, j)."""
    if not isinstance(eta, Collapse) or eta.level != j:
        return False
    gamma = fixed_part(eta.arg, j)
    return compare(gamma, delta) > 0 and compare(eta, star(delta, j)) > 0


def alpha_plus(alpha: Term) -> Collapse:
    if not isinstance(alpha, Collapse):
        raise DomainError("alpha_plus needs a collapse term")
    return Collapse(alpha.system, alpha.level, concat([alpha.arg, one(alpha.system)]))


@dataclass(frozen=True)
class LocalizationSeq:
    level: int
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]


@lru_cache(maxsize=1 << 16)
def localization(alpha: Term, i: int) -> LocalizationSeq:
    if not isinstance(alpha, Collapse) or alpha.level != i:
        raise DomainError(f"localization at level {i} needs a level-{i} collapse")
    entries = [omega_level(i, alpha.system)]
    cands = P_set(alpha, i)
    while entries[-1] != alpha:
        last = entries[-1]
        above = [c for c in cands if compare(c, last) > 0]
        best = above[0]
        for c in above[1:]:
            k = compare(c.arg, best.arg)
            assert k != 0, "tie in localization"
            if k > 0:
                best = c
        entries.append(best)
    return LocalizationSeq(i, tuple(entries))


def fixed_point_level(alpha: Collapse) -> Term:
    """The part of the argument at or above Omega_{level+1}."""
    return fixed_part(alpha.arg, alpha.level)


def parts_of(alpha: Collapse):
    """(Delta, eta) for a collapse, Delta being the fixed-point level."""
    return fixed_part(alpha.arg, alpha.level), small_part(alpha.arg, alpha.level)
