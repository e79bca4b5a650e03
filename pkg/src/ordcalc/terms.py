"""Ordinal terms for the stepwise (``t``) and simultaneous (``b``) collapsing systems.

A term is ``0``, a collapse ``t<i>(arg)`` / ``b<i>(arg)``, or a sum of at least
two collapses in weakly decreasing order.  Nodes are interned, so equal terms
are usually the same object; equality still falls back to a structural check.
"""

from __future__ import annotations

import enum
import weakref
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

SUGAR_CAP = 10**6


class OrdinalError(ValueError):
    pass


class ParseError(OrdinalError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class MixedSystemError(OrdinalError):
    pass


class DomainError(OrdinalError):
    """Input outside the domain of an operation (invalid term, bad parameter)."""


class System(enum.Enum):
    STEP = "t"
    BAR = "b"


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


_table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()


class Term:
    __slots__ = ("_hash", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return to_text(self)

    __str__ = __repr__

    # ordering delegates to the ordinal comparison
    def __lt__(self, other):
        return _cmp(self, other) < 0

    def __le__(self, other):
        return _cmp(self, other) <= 0

    def __gt__(self, other):
        return _cmp(self, other) > 0

    def __ge__(self, other):
        return _cmp(self, other) >= 0


class Zero(Term):
    __slots__ = ()
    _instance: Optional["Zero"] = None

    def __new__(cls):
        if cls._instance is None:
            node = object.__new__(cls)
            object.__setattr__(node, "_hash", hash(("zero",)))
            cls._instance = node
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, Zero)

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Zero, ())


class Collapse(Term):
    __slots__ = ("system", "level", "arg")

    def __new__(cls, system: System, level: int, arg: Term):
        key = ("c", system, level, arg)
        node = _table.get(key)
        if node is None:
            node = object.__new__(cls)
            object.__setattr__(node, "system", system)
            object.__setattr__(node, "level", level)
            object.__setattr__(node, "arg", arg)
            object.__setattr__(node, "_hash", hash(key))
            node = _table.setdefault(key, node)
        return node

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Collapse)
            and self._hash == other._hash
            and self.level == other.level
            and self.system is other.system
            and self.arg == other.arg
        )

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Collapse, (self.system, self.level, self.arg))


class Sum(Term):
    """Raw sum node; build through :func:`make_sum` unless the parts are known to be in order."""

    __slots__ = ("parts",)

    def __new__(cls, parts: Sequence[Collapse]):
        parts = tuple(parts)
        key = ("s", parts)
        node = _table.get(key)
        if node is None:
            node = object.__new__(cls)
            object.__setattr__(node, "parts", parts)
            object.__setattr__(node, "_hash", hash(key))
            node = _table.setdefault(key, node)
        return node

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Sum) and self._hash == other._hash and self.parts == other.parts

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Sum, (self.parts,))


ZERO = Zero()


def _cmp(a: Term, b: Term) -> int:
    from .stepwise import compare

    return compare(a, b)


# ---------------------------------------------------------------------------
# constructors and accessors


def collapse(system: System, level: int, arg: Term = ZERO) -> Collapse:
    return Collapse(system, level, arg)


def one(system: System = System.STEP) -> Collapse:
    return Collapse(system, 0, ZERO)


def omega_level(i: int, system: System = System.STEP) -> Collapse:
    """Omega_i, the collapse of level i with argument 0 (Omega_0 = 1)."""
    return Collapse(system, i, ZERO)


def components(alpha: Term) -> tuple:
    if isinstance(alpha, Sum):
        return alpha.parts
    if isinstance(alpha, Collapse):
        return (alpha,)
    return ()


def concat(parts: Iterable[Term]) -> Term:
    """Join terms whose components are already weakly decreasing (no absorption)."""
    flat: list = []
    for p in parts:
        flat.extend(components(p))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(flat)


def system_of(alpha: Term) -> Optional[System]:
    """System tag of the term, ``None`` for 0.  Raises on mixed terms."""
    found = _system_scan(alpha)
    return found


def _system_scan(alpha: Term) -> Optional[System]:
    seen: Optional[System] = None
    stack = [alpha]
    while stack:
        t = stack.pop()
        if isinstance(t, Collapse):
            if seen is None:
                seen = t.system
            elif seen is not t.system:
                raise MixedSystemError("term mixes stepwise and simultaneous collapses")
            stack.append(t.arg)
        elif isinstance(t, Sum):
            stack.extend(t.parts)
    return seen


def make_sum(parts: Iterable[Term]) -> Term:
    """Ordinal sum of ``parts`` in normal form.

    A component followed by a strictly larger one is absorbed, so
    ``make_sum([1, Omega_1]) == Omega_1``.
    """
    flat: list = []
    system: Optional[System] = None
    for p in parts:
        for c in components(p):
            if system is None:
                system = c.system
            elif c.system is not system:
                raise MixedSystemError("cannot add terms of different systems")
            while flat and _cmp(flat[-1], c) < 0:
                flat.pop()
            flat.append(c)
    return concat(flat)


def end(alpha: Term) -> Term:
    """Last (smallest) additive component; 0 for 0."""
    comps = components(alpha)
    return comps[-1] if comps else ZERO


def mc(alpha: Term) -> Term:
    """First (largest) additive component; 0 for 0."""
    comps = components(alpha)
    return comps[0] if comps else ZERO


def is_one(alpha: Term) -> bool:
    return isinstance(alpha, Collapse) and alpha.level == 0 and alpha.arg is ZERO


def classify(alpha: Term) -> Kind:
    if alpha is ZERO or isinstance(alpha, Zero):
        return Kind.ZERO
    if is_one(end(alpha)):
        return Kind.SUCCESSOR
    return Kind.LIMIT


def is_limit(alpha: Term) -> bool:
    return classify(alpha) is Kind.LIMIT


def predecessor(alpha: Term) -> Term:
    if classify(alpha) is not Kind.SUCCESSOR:
        raise DomainError(f"{to_text(alpha)} is not a successor")
    return concat(components(alpha)[:-1])


def nat_to_term(n: int, system: System = System.STEP) -> Term:
    if n < 0:
        raise DomainError("negative natural number")
    if n > SUGAR_CAP:
        raise DomainError(f"natural number {n} exceeds the cap {SUGAR_CAP}")
    return concat([one(system)] * n)


def term_to_nat(alpha: Term) -> Optional[int]:
    """The natural number denoted by ``alpha``, or ``None`` if it is infinite."""
    comps = components(alpha)
    if all(is_one(c) for c in comps):
        return len(comps)
    return None


def max_level(alpha: Term) -> int:
    """Largest collapse level occurring anywhere in the term, -1 if none."""
    best = -1
    stack = [alpha]
    while stack:
        t = stack.pop()
        if isinstance(t, Collapse):
            if t.level > best:
                best = t.level
            stack.append(t.arg)
        elif isinstance(t, Sum):
            stack.extend(t.parts)
    return best


@dataclass(frozen=True)
class SplitArg:
    """Components of a collapse argument at level ``level``: xi >= level+2, delta = level+1, eta <= level."""

    xi: Term
    delta: Term
    eta: Term
    level: int

    @property
    def fixed(self) -> Term:
        """Everything at or above Omega_{level+1}."""
        return concat([self.xi, self.delta])


def split_arg(xi: Term, j: int) -> SplitArg:
    hi, mid, lo = [], [], []
    for c in components(xi):
        if c.level >= j + 2:
            hi.append(c)
        elif c.level == j + 1:
            mid.append(c)
        else:
            lo.append(c)
    return SplitArg(concat(hi), concat(mid), concat(lo), j)


def fixed_part(xi: Term, j: int) -> Term:
    """Components of level >= j+1."""
    return concat([c for c in components(xi) if c.level > j])


def small_part(xi: Term, j: int) -> Term:
    """Components of level <= j."""
    return concat([c for c in components(xi) if c.level <= j])


def subterms(alpha: Term):
    """All subterms, the term itself included, in preorder."""
    stack = [alpha]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, Collapse):
            stack.append(t.arg)
        elif isinstance(t, Sum):
            stack.extend(reversed(t.parts))


# ---------------------------------------------------------------------------
# text form


def to_text(alpha: Term, pretty: bool = False) -> str:
    if isinstance(alpha, Zero):
        return "0"
    comps = components(alpha)
    out = []
    k = len(comps)
    if pretty:
        while k > 0 and is_one(comps[k - 1]):
            k -= 1
    for c in comps[:k]:
        out.append(f"{c.system.value}{c.level}({to_text(c.arg, pretty)})")
    if k < len(comps):
        out.append(str(len(comps) - k))
    return "+".join(out)


class _Parser:
    def __init__(self, text: str, system: Optional[System]):
        self.text = text
        self.pos = 0
        self.default = system
        self.seen: Optional[System] = None

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def number(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        digits = self.text[start:self.pos]
        if len(digits) > 7 or int(digits) > SUGAR_CAP:
            self.pos = start
            self.error(f"number exceeds the cap {SUGAR_CAP}")
        return int(digits)

    def note_system(self, system: System):
        if self.seen is None:
            self.seen = system
        elif self.seen is not system:
            raise MixedSystemError(f"mixed systems in term at position {self.pos}")

    def term(self) -> list:
        parts = self.summand()
        while self.peek() == "+":
            self.pos += 1
            parts.extend(self.summand())
        return parts

    def summand(self) -> list:
        ch = self.peek()
        if ch.isdigit():
            n = self.number()
            return [("one", n)]
        if ch in ("t", "b"):
            system = System(ch)
            self.note_system(system)
            self.pos += 1
            level = self.number()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return [("col", system, level, arg)]
        self.error("expected a term")

    def build(self, parts: list, system: System) -> Term:
        built = []
        for p in parts:
            if p[0] == "one":
                built.extend([one(system)] * p[1])
            else:
                built.append(Collapse(p[1], p[2], self.build(p[3], system)))
        return make_sum(built)


def parse(text: str, system: Optional[System] = None) -> Term:
    """Parse a term.  Decimal sugar ``n`` stands for ``n`` copies of level-0 collapses of 0.

    The system of sugar follows the collapses in the text, else ``system``,
    else the stepwise system.
    """
    p = _Parser(text, system)
    parts = p.term()
    if p.peek() != "":
        p.error("unexpected trailing input")
    sys_ = p.seen or system or System.STEP
    if system is not None and p.seen is not None and p.seen is not system:
        raise MixedSystemError(f"expected a {system.value}-term")
    total = _count_sugar(parts)
    if total > SUGAR_CAP:
        raise ParseError(f"decimal sugar exceeds the cap {SUGAR_CAP}", 0)
    return p.build(parts, sys_)


def _count_sugar(parts: list) -> int:
    n = 0
    for p in parts:
        if p[0] == "one":
            n += p[1]
        else:
            n += _count_sugar(p[3])
    return n
