"""Exhaustive enumeration of bounded term universes."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cmp_to_key

from .stepwise import compare
from .terms import ZERO, Collapse, System, Term, components, concat, mc

_key = cmp_to_key(compare)


@dataclass(frozen=True)
class UniverseSpec:
    system: System = System.STEP
    max_norm: int = 8
    max_level: int = 2
    upper_bound: Term | None = None

    def as_dict(self) -> dict:
        return {
            "system": self.system.value,
            "max_norm": self.max_norm,
            "max_level": self.max_level,
            "upper_bound": None if self.upper_bound is None else str(self.upper_bound),
        }


def _step_terms(max_norm: int, max_level: int) -> dict:
    """norm -> list of valid stepwise terms of exactly that norm."""
    by_norm: dict = {1: [ZERO]}
    principals: dict = {}
    for n in range(2, max_norm + 1):
        prin = []
        for xi in by_norm.get(n - 1, []):
            top = max((c.level for c in components(xi)), default=-1)
            for i in range(max(top - 1, 0), max_level + 1):
                prin.append(Collapse(System.STEP, i, xi))
        principals[n] = prin
        sums = []
        # p + rest with norm(p) = a, norm(rest) = n - a - 1, mc(rest) <= p
        for a in range(2, n - 1):
            rest_terms = [r for r in by_norm.get(n - a - 1, []) if r is not ZERO]
            for p in principals[a]:
                for r in rest_terms:
                    if compare(mc(r), p) <= 0:
                        sums.append(concat([p, r]))
        by_norm[n] = prin + sums
    return by_norm


def enumerate_terms(spec: UniverseSpec) -> list:
    """All valid terms of the system with norm <= max_norm and collapse levels
    <= max_level (optionally below ``upper_bound``), in ascending order."""
    from .norms import cnorm

    by_norm = _step_terms(spec.max_norm, spec.max_level)
    terms = [t for ts in by_norm.values() for t in ts]
    if spec.system is System.BAR:
        from .iso import f

        terms = [f(t) for t in terms]
    if spec.upper_bound is not None:
        terms = [t for t in terms if compare(t, spec.upper_bound) < 0]
    terms.sort(key=_key)
    return terms


@dataclass
class Universe:
    """A sorted universe with rank lookup for arbitrary terms."""

    spec: UniverseSpec
    terms: list
    index: dict = field(init=False)
    keys: list = field(init=False)

    def __post_init__(self):
        self.index = {t: k for k, t in enumerate(self.terms)}
        self.keys = [_key(t) for t in self.terms]

    @classmethod
    def build(cls, spec: UniverseSpec) -> "Universe":
        return cls(spec, enumerate_terms(spec))

    def __len__(self):
        return len(self.terms)

    def below(self, x: Term) -> int:
        """Number of universe members strictly below x."""
        k = self.index.get(x)
        if k is not None:
            return k
        return bisect_left(self.keys, _key(x))

    def rank(self, x: Term) -> int:
        """Order-preserving code: 2 * below(x) + (1 if x is a member)."""
        k = self.index.get(x)
        if k is not None:
            return 2 * k + 1
        return 2 * bisect_left(self.keys, _key(x))
