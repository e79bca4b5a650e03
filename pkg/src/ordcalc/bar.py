"""The simultaneous system: K-sets, domain predicate, order, height,
chi/d and fundamental sequences on ``b``-terms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fundseq import FsResult, chi, dom_ind, fundseq_case
from .stepwise import compare, max_term, star
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
    subterms,
    system_of,
    to_text,
)


@dataclass(frozen=True)
class KSets:
    ktau: frozenset
    kstar: frozenset
    level: int


def _ktau(alpha: Term, i: int) -> set:
    out = set()
    stack = [alpha]
    while stack:
        t = stack.pop()
        if isinstance(t, Sum):
            stack.extend(t.parts)
        elif isinstance(t, Collapse):
            if t.level == i:
                out.add(t)
            elif t.level > i:
                stack.append(t.arg)
    return out


@lru_cache(maxsize=1 << 18)
def _kstar(alpha: Term, i: int) -> frozenset:
    out = set()
    stack = [alpha]
    while stack:
        t = stack.pop()
        if isinstance(t, Sum):
            stack.extend(t.parts)
        elif isinstance(t, Collapse) and t.level >= i:
            out.add(t.arg)
            stack.append(t.arg)
    return frozenset(out)


def k_sets(alpha: Term, i: int) -> KSets:
    return KSets(frozenset(_ktau(alpha, i)), _kstar(alpha, i), i)


@lru_cache(maxsize=1 << 18)
def kstar_max(alpha: Term, i: int) -> Term:
    return max_term(_kstar(alpha, i))


def star_bar(alpha: Term, i: int) -> Term:
    """max(K_i(alpha) + {0})."""
    return max_term(_ktau(alpha, i))


@lru_cache(maxsize=1 << 18)
def in_dom(alpha: Term, m: int) -> bool:
    return all(compare(x, alpha) < 0 for x in _kstar(alpha, m + 1))


@lru_cache(maxsize=1 << 18)
def _valid_bar(alpha: Term) -> bool:
    if isinstance(alpha, Zero):
        return True
    if isinstance(alpha, Sum):
        parts = alpha.parts
        if len(parts) < 2:
            return False
        if any(compare(a, b) < 0 for a, b in zip(parts, parts[1:])):
            return False
        return all(_valid_bar(p) for p in parts)
    if alpha.system is not System.BAR or alpha.level < 0:
        return False
    return _valid_bar(alpha.arg) and in_dom(alpha.arg, alpha.level)


def valid_bar(alpha: Term) -> bool:
    try:
        if system_of(alpha) not in (None, System.BAR):
            return False
    except MixedSystemError:
        return False
    return _valid_bar(alpha)


def _require(alpha: Term) -> None:
    if not valid_bar(alpha):
        raise DomainError(f"not a valid simultaneous term: {to_text(alpha)}")


def compare_bar(alpha: Term, beta: Term) -> int:
    _require(alpha)
    _require(beta)
    return compare(alpha, beta)


def ht(alpha: Term) -> int:
    levels = [t.level for t in subterms(alpha) if isinstance(t, Collapse)]
    return max(levels) + 1 if levels else 0


def chi_bar(i: int, alpha: Term) -> int:
    _require(alpha)
    return chi(i, alpha)


def dom_ind_bar(alpha: Term) -> int:
    _require(alpha)
    return dom_ind(alpha)


def fundseq_bar_case(alpha: Term, zeta) -> FsResult:
    _require(alpha)
    if not isinstance(zeta, int):
        _require(zeta)
    res = fundseq_case(alpha, zeta)
    for t in components(res.result):
        if not _valid_bar(t):
            raise AssertionError(f"constructed term leaves the domain: {to_text(t)}")
    return res


def fundseq_bar(alpha: Term, zeta) -> Term:
    return fundseq_bar_case(alpha, zeta).result


__all__ = [
    "KSets",
    "k_sets",
    "kstar_max",
    "star_bar",
    "in_dom",
    "valid_bar",
    "compare_bar",
    "ht",
    "chi_bar",
    "dom_ind_bar",
    "fundseq_bar",
    "fundseq_bar_case",
    "star",
]
