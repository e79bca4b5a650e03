"""Exhaustive property suite over bounded term universes.

Every property is a function ``(ctx, shard) -> (instances, counterexamples)``
registered under an id.  ``shard = (k, K)`` restricts the outer loop to every
K-th item starting at k, so a property can be split across worker processes
and the pieces merged afterwards.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import multiprocessing
import numpy as np

from .bar import in_dom, valid_bar
from .fundseq import FsCase, at_zero, chi, dom_ind, fundseq_case, fundseq_star_variant, support
from .iso import f, g, it, rt
from .norms import BudgetExceeded, HardyBudget, cnorm, gnorm, hardy, nf_predicate, walk_to_zero
from .stepwise import compare, fixpoint_F, localization, star, valid_T
from .terms import (
    ZERO,
    Collapse,
    Sum,
    System,
    Term,
    Zero,
    classify,
    Kind,
    components,
    concat,
    end,
    fixed_part,
    is_limit,
    is_one,
    make_sum,
    max_level,
    nat_to_term,
    omega_level,
    parse,
    predecessor,
    small_part,
    split_arg,
    to_text,
)
from .universe import Universe, UniverseSpec

MAX_REPORTED = 20


@dataclass
class Counterexample:
    inputs: list
    expected: str
    actual: str

    def as_dict(self) -> dict:
        return {"inputs": self.inputs, "expected": self.expected, "actual": self.actual}


@dataclass
class PropertyReport:
    property_id: str
    universe: UniverseSpec
    instances_checked: int
    counterexamples: list
    elapsed: float
    skipped: int = 0
    total_counterexamples: int = 0
    minimal_norm: int | None = None

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {
            "property_id": self.property_id,
            "universe": self.universe.as_dict(),
            "instances_checked": self.instances_checked,
            "skipped": self.skipped,
            "passed": self.passed,
            "total_counterexamples": self.total_counterexamples,
            "minimal_norm": self.minimal_norm,
            "counterexamples": [c.as_dict() for c in self.counterexamples],
            "elapsed": round(self.elapsed, 4),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _cx(inputs, expected, actual) -> Counterexample:
    return Counterexample([_s(x) for x in inputs], _s(expected), _s(actual))


def _s(x) -> str:
    if isinstance(x, Term):
        return to_text(x)
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(_s(y) for y in x) + ")"
    return str(x)


# ---------------------------------------------------------------------------
# context


class Context:
    """A universe plus the per-term data the properties share."""

    def __init__(self, spec: UniverseSpec, n_cap: int = 3, small_norm: int = 4,
                 hardy_norm: int = 5, hardy_level: int = 1,
                 hardy_budget: HardyBudget | None = None):
        self.spec = spec
        self.n_cap = n_cap
        self.small_norm = small_norm
        self.hardy_norm = hardy_norm
        self.hardy_level = hardy_level
        self.hardy_budget = hardy_budget or HardyBudget(max_steps=2000, max_value=2000, max_size=2000)
        self.system = spec.system
        self.options = dict(n_cap=n_cap, small_norm=small_norm, hardy_norm=hardy_norm,
                            hardy_level=hardy_level, hardy_budget=self.hardy_budget)

    def shrink(self, max_norm: int) -> "Context":
        spec = UniverseSpec(self.spec.system, max_norm, self.spec.max_level, self.spec.upper_bound)
        return Context(spec, **self.options)

    @cached_property
    def universe(self) -> Universe:
        return Universe.build(self.spec)

    @property
    def terms(self) -> list:
        return self.universe.terms

    def norm(self, t: Term) -> int:
        return cnorm(g(t)) if self.system is System.BAR else cnorm(t)

    @cached_property
    def cn(self) -> np.ndarray:
        return np.array([self.norm(t) for t in self.terms], dtype=np.int64)

    @cached_property
    def G(self) -> np.ndarray:
        return np.array([gnorm(t) for t in self.terms], dtype=np.int64)

    @cached_property
    def d(self) -> list:
        return [dom_ind(t) for t in self.terms]

    @cached_property
    def collapses(self) -> list:
        return [t for t in self.terms if isinstance(t, Collapse)]

    @cached_property
    def small_terms(self) -> list:
        return [t for t, n in zip(self.terms, self.cn) if n <= self.small_norm]

    def params(self, alpha: Term) -> list:
        """Admissible parameters: 0..n_cap if d = 0, else small terms below Omega_d."""
        d = dom_ind(alpha)
        if d == 0:
            return list(range(self.n_cap + 1))
        bound = omega_level(d, self.system)
        cands = {nat_to_term(k, self.system) for k in range(3)}
        cands.update(t for t in self.small_terms if compare(t, bound) < 0)
        return sorted(cands, key=self.universe_key)

    @staticmethod
    def universe_key(t):
        from functools import cmp_to_key

        return cmp_to_key(compare)(t)

    def fs(self, alpha: Term, zeta) -> Term:
        return fundseq_case(alpha, zeta).result

    def at0(self, alpha: Term) -> Term:
        return at_zero(alpha)

    def rank(self, t: Term) -> int:
        return self.universe.rank(t)

    def index(self, t: Term) -> int:
        return self.universe.index[t]

    @cached_property
    def r0(self) -> np.ndarray:
        """rank of beta[0] for each member beta."""
        return np.array([self.rank(self.at0(t)) for t in self.terms], dtype=np.int64)

    @cached_property
    def star_ranks(self) -> dict:
        top = self.spec.max_level
        return {
            k: np.array([self.rank(star(t, k)) for t in self.terms], dtype=np.int64)
            for k in range(top + 1)
        }

    def first_above(self, t: Term) -> int:
        """Index of the first member strictly above t."""
        k = self.universe.index.get(t)
        return k + 1 if k is not None else self.universe.below(t)

    # hardy data ----------------------------------------------------------
    @cached_property
    def hardy_terms(self) -> list:
        spec = UniverseSpec(System.STEP, self.hardy_norm, self.hardy_level)
        u = Universe.build(spec)
        return [t for t in u.terms if not components(t) or components(t)[0].level == 0]

    @cached_property
    def _hcache(self) -> dict:
        return {}

    def H(self, alpha: Term, n: int):
        """(value, exact): exact Hardy value, or a lower bound when the budget runs out."""
        key = (alpha, n)
        hit = self._hcache.get(key)
        if hit is None:
            try:
                hit = (hardy(alpha, n, self.hardy_budget), True)
            except BudgetExceeded as e:
                hit = (e.n, False)
            self._hcache[key] = hit
        return hit


def _shard(items, shard):
    k, total = shard
    return items[k::total]


def _le_check(lhs, rhs):
    """Decide lhs <= rhs for (value, exact) pairs: True, False or None (unknown)."""
    (a, ea), (b, eb) = lhs, rhs
    if ea and eb:
        return a <= b
    if eb and not ea:
        return False if a > b else None
    if ea and not eb:
        return True if a <= b else None
    return None


# ---------------------------------------------------------------------------
# term_core and order properties


def p_roundtrip(ctx, shard):
    out = []
    items = _shard(ctx.terms, shard)
    for a in items:
        for pretty in (False, True):
            back = parse(to_text(a, pretty), ctx.system)
            if back != a:
                out.append(_cx([a, pretty], a, back))
    return 2 * len(items), out


def p_make_sum(ctx, shard):
    """make_sum is associative and agrees with normal-form concatenation."""
    out = []
    small = ctx.small_terms
    n = 0
    for a in _shard(small, shard):
        for b in small:
            for c in small:
                n += 1
                left = make_sum([make_sum([a, b]), c])
                right = make_sum([a, make_sum([b, c])])
                if left != right:
                    out.append(_cx([a, b, c], left, right))
    return n, out


def p_classify(ctx, shard):
    """classify partitions terms; successors are pred + 1; split_arg reassembles."""
    out = []
    items = _shard(ctx.terms, shard)
    for a in items:
        kind = classify(a)
        if kind is Kind.ZERO and not isinstance(a, Zero):
            out.append(_cx([a], "zero", kind.value))
        if kind is Kind.SUCCESSOR:
            back = concat([predecessor(a), nat_to_term(1, ctx.system)])
            if back != a:
                out.append(_cx([a], a, back))
        for j in range(ctx.spec.max_level + 2):
            sp = split_arg(a, j)
            back = make_sum([sp.xi, sp.delta, sp.eta])
            if back != a:
                out.append(_cx([a, j], a, back))
    return len(items), out


def p_enumeration(ctx, shard):
    """Every member is valid, members are strictly increasing, no duplicates."""
    out = []
    terms = ctx.terms
    valid = valid_T if ctx.system is System.STEP else valid_bar
    idx = list(range(len(terms)))
    for k in _shard(idx, shard):
        t = terms[k]
        if not valid(t):
            out.append(_cx([t], "valid", "invalid"))
        if k + 1 < len(terms) and compare(t, terms[k + 1]) >= 0:
            out.append(_cx([t, terms[k + 1]], "LT", compare(t, terms[k + 1])))
    return len(idx), out


def p_order_laws(ctx, shard):
    """compare agrees with the sorted position on every pair (totality,
    antisymmetry and transitivity on the universe)."""
    out = []
    terms = ctx.terms
    n = 0
    for i in _shard(list(range(len(terms))), shard):
        a = terms[i]
        for j in range(i + 1, len(terms)):
            b = terms[j]
            n += 1
            if compare(a, b) != -1:
                out.append(_cx([a, b], "LT", compare(a, b)))
        # antisymmetry on neighbours; with the forward check on all pairs this fixes the order
        if i + 1 < len(terms) and compare(terms[i + 1], a) != 1:
            out.append(_cx([terms[i + 1], a], "GT", compare(terms[i + 1], a)))
        if compare(a, a) != 0:
            out.append(_cx([a, a], 0, compare(a, a)))
    return n, out


def p_pivotal(ctx, shard):
    out = []
    items = _shard(ctx.collapses, shard)
    for a in items:
        s = star(a.arg, a.level)
        if compare(s, a) >= 0:
            out.append(_cx([a], f"star < {to_text(a)}", s))
    return len(items), out


def p_segment(ctx, shard):
    out = []
    items = _shard(ctx.collapses, shard)
    for a in items:
        lo, hi = omega_level(a.level, ctx.system), omega_level(a.level + 1, ctx.system)
        if compare(lo, a) > 0 or compare(a, hi) >= 0:
            out.append(_cx([a], f"in [{lo}, {hi})", a))
    return len(items), out


def p_eps_char(ctx, shard):
    """theta_j(Delta+eta) is closed under sigma -> theta_j(sigma) iff Delta > 0."""
    out = []
    terms = ctx.terms
    n = 0
    for a in _shard(ctx.collapses, shard):
        j = a.level
        delta, eta = fixed_part(a.arg, j), small_part(a.arg, j)
        if delta is ZERO:
            n += 1
            # a = theta_j(eta) with eta < a witnesses non-closure
            if compare(eta, a) >= 0:
                out.append(_cx([a], f"{to_text(eta)} < a", "not below"))
            continue
        for b in terms[: ctx.index(a)]:
            n += 1
            c = Collapse(a.system, j, b)
            if compare(c, a) >= 0:
                out.append(_cx([a, b], f"theta_{j}(b) < a", c))
    # the same split seen through the clause tree: Delta = 0 iff the
    # principal-multiple clause fires (unless continuity comes first)
    for a in _shard(ctx.collapses, shard):
        if is_one(a):
            continue
        n += 1
        j = a.level
        delta, eta = fixed_part(a.arg, j), small_part(a.arg, j)
        case = fundseq_case(a, ctx.params(a)[0]).case
        if case is FsCase.CONTINUITY:
            continue
        if (case is FsCase.PRINCIPAL_MULTIPLE) != (delta is ZERO):
            out.append(_cx([a], f"Delta = 0 iff PrincipalMultiple", case.value))
    return n, out


def p_partitioning(ctx, shard):
    out = []
    items = _shard(ctx.terms, shard)
    top = ctx.spec.max_level + 1
    for a in items:
        d = dom_ind(a)
        chis = [chi(i, a) for i in range(top)]
        expected = [1 if d == i + 1 else 0 for i in range(top)]
        if chis != expected:
            out.append(_cx([a], expected, chis))
    return len(items), out


# ---------------------------------------------------------------------------
# localization


def _fp_level(t: Collapse) -> Term:
    return fixed_part(t.arg, t.level)


def p_loc_lex(ctx, shard):
    out = []
    n = 0
    levels = range(ctx.spec.max_level + 1)
    for i in _shard(list(levels), shard):
        prin = [t for t in ctx.collapses if t.level == i and t.arg is not ZERO]
        keys = []
        for t in prin:
            loc = localization(t, i)
            keys.append(tuple(ctx.index(e) for e in loc.entries[1:]))
        for k in range(len(prin) - 1):
            n += 1
            if not keys[k] < keys[k + 1]:
                out.append(_cx([prin[k], prin[k + 1]], "lex increasing",
                               (localization(prin[k], i).entries, localization(prin[k + 1], i).entries)))
    return n, out


def p_loc_prefix(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.collapses, shard):
        loc = localization(a, a.level).entries
        for k in range(1, len(loc)):
            n += 1
            sub = localization(loc[k], a.level).entries
            if sub != loc[: k + 1]:
                out.append(_cx([a, k], loc[: k + 1], sub))
    return n, out


def p_loc_descending(ctx, shard):
    out = []
    items = _shard(ctx.collapses, shard)
    for a in items:
        loc = localization(a, a.level).entries
        levels = [_fp_level(e) for e in loc[1:]]
        for x, y in zip(levels, levels[1:]):
            if compare(x, y) <= 0:
                out.append(_cx([a], "strictly descending", levels))
                break
        for e in loc[1:]:
            if compare(e, loc[0]) <= 0:
                out.append(_cx([a], "entries above Omega", loc))
    return len(items), out


def p_loc_floor(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.collapses, shard):
        if a.arg is ZERO or is_one(a):
            continue
        n += 1
        loc = localization(a, a.level).entries
        a0 = ctx.at0(a)
        if compare(loc[-2], a0) > 0:
            out.append(_cx([a], f"{to_text(loc[-2])} <= a[0]", a0))
    return n, out


def expected_localization(alpha: Collapse, zeta, value: Term):
    """Localization of alpha[zeta] predicted by the case table, or None if alpha[zeta] is not principal."""
    i = alpha.level
    sys_ = alpha.system
    loc = localization(alpha, i).entries
    head = loc[:-1]
    delta, eta = fixed_part(alpha.arg, i), small_part(alpha.arg, i)
    zero_param = zeta == 0 or zeta is ZERO
    omega_i = (omega_level(i, sys_),)
    if is_limit(eta) and not fixpoint_F(delta, eta, i):
        if zero_param and delta is ZERO and isinstance(eta, Collapse) and eta.arg is ZERO and 0 < eta.level <= i:
            return omega_i
        return head + (value,)
    succ = eta is not ZERO and is_one(end(eta))
    if delta is ZERO:
        if not zero_param:
            return None
        if succ and predecessor(eta) is not ZERO:
            return head + (Collapse(sys_, i, predecessor(eta)),)
        return head
    if chi(i, delta) == 1:
        if succ:
            return head + (Collapse(sys_, i, concat([delta, predecessor(eta)])), value)
        if zero_param and delta == omega_level(i + 1, sys_) and eta is ZERO:
            return omega_i
        return head + (value,)
    if succ:
        return head + (Collapse(sys_, i, concat([delta, predecessor(eta)])), value)
    return head + (value,)


def p_loc_cases(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.collapses, shard):
        if a.arg is ZERO or is_one(a):
            continue
        for z in ctx.params(a):
            value = ctx.fs(a, z)
            exp = expected_localization(a, z, value)
            if exp is None:
                continue
            n += 1
            if not isinstance(value, Collapse) or value.level != a.level:
                out.append(_cx([a, z], exp, value))
                continue
            got = localization(value, a.level).entries
            if got != exp:
                out.append(_cx([a, z], exp, got))
    return n, out


# ---------------------------------------------------------------------------
# fundamental sequences


def p_cantorian(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.terms, shard):
        kind = classify(a)
        ps = ctx.params(a)
        vals = [ctx.fs(a, z) for z in ps]
        n += len(ps)
        if kind is Kind.ZERO:
            if any(v is not ZERO for v in vals):
                out.append(_cx([a], 0, vals))
            continue
        if kind is Kind.SUCCESSOR:
            p = predecessor(a)
            if any(v != p for v in vals):
                out.append(_cx([a], p, vals))
            continue
        # limits: strictly increasing below a
        for v, w in zip(vals, vals[1:]):
            if compare(v, w) >= 0:
                out.append(_cx([a, ps], "strictly increasing", vals))
                break
        if compare(vals[-1], a) >= 0:
            out.append(_cx([a, ps[-1]], "below a", vals[-1]))
        if isinstance(a, Sum):
            head = a.parts[:-1]
            for z, v in zip(ps, vals):
                exp = concat(head + (ctx.fs(a.parts[-1], z),))
                if v != exp:
                    out.append(_cx([a, z], exp, v))
        res = fundseq_case(a, ps[0])
        if res.case is FsCase.PRINCIPAL_MULTIPLE and res.support is not ZERO:
            sup = res.support
            for z, v in zip(ps, vals):
                exp = concat([sup] * (z + 1))
                if v != exp:
                    out.append(_cx([a, z], exp, v))
            # a = sup * omega: no principal strictly between
            lo, hi = ctx.first_above(sup), ctx.index(a)
            for b in ctx.terms[lo:hi]:
                if isinstance(b, Collapse):
                    out.append(_cx([a, b], f"no principal in ({to_text(sup)}, a)", b))
    return n, out


def _limits0(ctx):
    return [a for a, d in zip(ctx.terms, ctx.d) if d == 0 and classify(a) is Kind.LIMIT]


def _bachmann(ctx, shard, fs_fn, at0_fn, r0, with_g: bool):
    out = []
    n = 0
    terms = ctx.terms
    for a in _shard(_limits0(ctx), shard):
        hi = ctx.index(a)
        for k in range(ctx.n_cap + 1):
            an = fs_fn(a, k)
            lo = ctx.first_above(an)
            if lo >= hi:
                continue
            n += hi - lo
            R = ctx.rank(an)
            seg = r0[lo:hi]
            bad = np.nonzero(seg < R)[0].tolist()
            if R % 2 == 0:
                for t in np.nonzero(seg == R)[0].tolist():
                    if compare(at0_fn(terms[lo + t]), an) < 0:
                        bad.append(t)
            for t in sorted(bad):
                b = terms[lo + t]
                out.append(_cx([a, k, b], f">= {to_text(an)}", at0_fn(b)))
            if with_g:
                ga = gnorm(an)
                for t in np.nonzero(ctx.G[lo:hi] <= ga)[0].tolist():
                    b = terms[lo + t]
                    out.append(_cx([a, k, b], f"G(b) > {ga}", int(ctx.G[lo + t])))
    return n, out


def p_bachmann(ctx, shard):
    return _bachmann(ctx, shard, ctx.fs, ctx.at0, ctx.r0, with_g=False)


def p_normed(ctx, shard):
    n, out = _bachmann(ctx, shard, ctx.fs, ctx.at0, ctx.r0, with_g=True)
    # only the G part is reported here; Bachmann failures are reported separately
    out = [c for c in out if c.expected.startswith("G(")]
    for a in _shard(ctx.terms, shard):
        if a is ZERO:
            continue
        n += 1
        if gnorm(a) != gnorm(ctx.at0(a)) + 1:
            out.append(_cx([a], gnorm(ctx.at0(a)) + 1, gnorm(a)))
    return n, out


def _regularity(ctx, shard, measure: np.ndarray):
    out = []
    n = 0
    terms = ctx.terms
    for a in _shard(_limits0(ctx), shard):
        ia = ctx.index(a)
        if ia == 0:
            continue
        need = measure[:ia]
        top = int(need.max())
        ranks = np.array([ctx.rank(ctx.fs(a, k)) for k in range(top + 1)], dtype=np.int64)
        own = 2 * np.arange(ia, dtype=np.int64) + 1
        n += ia
        for t in np.nonzero(own > ranks[need])[0].tolist():
            out.append(_cx([a, terms[t]], f"<= a[{int(need[t])}]", ctx.fs(a, int(need[t]))))
    return n, out


def p_regularity_cnorm(ctx, shard):
    return _regularity(ctx, shard, ctx.cn)


def p_regularity_gnorm(ctx, shard):
    return _regularity(ctx, shard, ctx.G)


def p_gnorm_additive(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.terms, shard):
        if not isinstance(a, Sum):
            continue
        n += 1
        head, last = concat(a.parts[:-1]), a.parts[-1]
        if gnorm(a) != gnorm(head) + gnorm(last):
            out.append(_cx([head, last], gnorm(head) + gnorm(last), gnorm(a)))
    return n, out


def p_gnorm_collapse(ctx, shard):
    out = []
    items = _shard(ctx.collapses, shard)
    for a in items:
        delta, eta = fixed_part(a.arg, a.level), small_part(a.arg, a.level)
        bound = gnorm(delta) + gnorm(eta) + 1
        if gnorm(a) < bound:
            out.append(_cx([a], f">= {bound}", gnorm(a)))
    return len(items), out


def p_gnorm_param(ctx, shard):
    out = []
    n = 0
    for a, d in zip(_shard(ctx.terms, shard), _shard(ctx.d, shard)):
        if d == 0:
            continue
        base = gnorm(ctx.fs(a, ZERO))
        for z in ctx.params(a):
            n += 1
            v = gnorm(ctx.fs(a, z))
            if v < base + gnorm(z):
                out.append(_cx([a, z], f">= {base + gnorm(z)}", v))
    return n, out


def p_norm_bound(ctx, shard):
    out = []
    idx = _shard(list(range(len(ctx.terms))), shard)
    for k in idx:
        if ctx.cn[k] > (ctx.G[k] + 1) ** 2:
            out.append(_cx([ctx.terms[k]], f"<= {(ctx.G[k] + 1) ** 2}", int(ctx.cn[k])))
    return len(idx), out


def p_support_control(ctx, shard):
    out = []
    n = 0
    for a in _shard(ctx.collapses, shard):
        if is_one(a) or classify(a) is not Kind.LIMIT:
            continue
        i = a.level
        delta = fixed_part(a.arg, i)
        sup = support(a)
        if sup is ZERO or delta is ZERO or chi(i, delta) == 1:
            continue
        for z in ctx.params(a):
            n += 1
            s = star(ctx.fs(delta, z), i)
            if compare(s, sup) >= 0:
                out.append(_cx([a, z], f"< {to_text(sup)}", s))
    return n, out


def p_star_monotone(ctx, shard):
    out = []
    n = 0
    for a, d in zip(_shard(ctx.terms, shard), _shard(ctx.d, shard)):
        if classify(a) is not Kind.LIMIT:
            continue
        vals = [ctx.fs(a, z) for z in ctx.params(a)]
        for k in range(d, ctx.spec.max_level + 1):
            n += 1
            stars = [star(v, k) for v in vals]
            top = star(a, k)
            ok = all(compare(x, y) <= 0 for x, y in zip(stars, stars[1:]))
            ok = ok and all(compare(x, top) <= 0 for x in stars)
            if not ok:
                out.append(_cx([a, k], f"weakly increasing, <= {to_text(top)}", stars))
    return n, out


def p_sandwich(ctx, shard):
    out = []
    n = 0
    terms = ctx.terms
    for a, d in zip(_shard(ctx.terms, shard), _shard(ctx.d, shard)):
        if classify(a) is not Kind.LIMIT:
            continue
        hi = ctx.index(a)
        for z in ctx.params(a):
            v = ctx.fs(a, z)
            lo = ctx.universe.below(v)
            zero_param = z == 0 or z is ZERO
            for k in range(ctx.spec.max_level + 1):
                if not zero_param and k + 1 < d:
                    continue
                if lo >= hi:
                    continue
                n += hi - lo
                R = ctx.rank(star(v, k))
                seg = ctx.star_ranks[k][lo:hi]
                for t in np.nonzero(seg < R)[0].tolist():
                    b = terms[lo + t]
                    out.append(_cx([a, z, b, k], f">= {to_text(star(v, k))}", star(b, k)))
    return n, out


# ---------------------------------------------------------------------------
# isomorphism suite (run on the stepwise universe and its image)


class _BarView:
    """The f-image of a stepwise context, as a context of its own."""

    def __init__(self, ctx: Context):
        spec = UniverseSpec(System.BAR, ctx.spec.max_norm, ctx.spec.max_level, None)
        self.inner = Context(spec, ctx.n_cap, ctx.small_norm)


def _bar_ctx(ctx: Context) -> Context:
    cached = getattr(ctx, "_bar", None)
    if cached is None:
        cached = _BarView(ctx).inner
        ctx._bar = cached
    return cached


def p_iso_roundtrip(ctx, shard):
    out = []
    items = _shard(ctx.terms, shard)
    for a in items:
        b = f(a)
        if g(b) != a:
            out.append(_cx([a], a, g(b)))
        if f(g(b)) != b:
            out.append(_cx([b], b, f(g(b))))
        if not valid_bar(b):
            out.append(_cx([a], "valid image", b))
        if max_level(a) != max_level(b):
            out.append(_cx([a], max_level(a), max_level(b)))
    return len(items), out


def p_iso_order(ctx, shard):
    out = []
    terms = ctx.terms
    image = [f(a) for a in terms]
    n = 0
    for i in _shard(list(range(len(terms))), shard):
        x = image[i]
        for j in range(i + 1, len(terms)):
            n += 1
            if compare(x, image[j]) != -1:
                out.append(_cx([terms[i], terms[j]], "LT", compare(x, image[j])))
    return n, out


def p_iso_star(ctx, shard):
    """rt does not change star values: star(rt_m(xi), k) = g(star(xi, k)) for k <= m."""
    out = []
    n = 0
    bar = _bar_ctx(ctx)
    for b in _shard(bar.collapses, shard):
        m, xi = b.level, b.arg
        r = rt(m, xi)
        for k in range(m + 1):
            n += 1
            if star(r, k) != g(star(xi, k)):
                out.append(_cx([b, k], g(star(xi, k)), star(r, k)))
    return n, out


def p_chi_transport(ctx, shard):
    out = []
    bar = _bar_ctx(ctx)
    items = _shard(bar.terms, shard)
    top = ctx.spec.max_level + 1
    for b in items:
        a = g(b)
        for i in range(top):
            if chi(i, b) != chi(i, a):
                out.append(_cx([b, i], chi(i, a), chi(i, b)))
    return len(items) * top, out


def p_dom_transport(ctx, shard):
    out = []
    bar = _bar_ctx(ctx)
    items = _shard(bar.terms, shard)
    for b in items:
        if dom_ind(b) != dom_ind(g(b)):
            out.append(_cx([b], dom_ind(g(b)), dom_ind(b)))
    return len(items), out


def p_fix_transport(ctx, shard):
    """F_i(Xi+Delta, eta) in the simultaneous system iff F_i(rt_i(Xi+Delta), g(eta))."""
    out = []
    n = 0
    bar = _bar_ctx(ctx)
    for i in _shard(list(range(ctx.spec.max_level + 1)), shard):
        fixed = {fixed_part(b.arg, i) for b in bar.collapses if b.level == i}
        etas = [b for b in bar.collapses if b.level == i]
        for X in sorted(fixed, key=Context.universe_key):
            for eta in etas:
                arg = concat([X, eta])
                if not in_dom(arg, i):
                    continue
                n += 1
                lhs = fixpoint_F(X, eta, i)
                rhs = fixpoint_F(rt(i, X), g(eta), i)
                if lhs != rhs:
                    out.append(_cx([X, eta, i], rhs, lhs))
    return n, out


def p_loc_transport(ctx, shard):
    out = []
    items = _shard(ctx.collapses, shard)
    for a in items:
        loc = localization(a, a.level).entries
        got = localization(f(a), a.level).entries
        exp = tuple(f(e) for e in loc)
        if got != exp:
            out.append(_cx([a], exp, got))
    return len(items), out


def p_commutation(ctx, shard):
    """Native simultaneous fundamental sequences agree with f(g(b)[g(zeta)])."""
    from .fundseq import fundseq_case

    out = []
    n = 0
    bar = _bar_ctx(ctx)
    for b in _shard(bar.terms, shard):
        for z in bar.params(b):
            n += 1
            native = fundseq_case(b, z).result
            if not valid_bar(native):
                out.append(_cx([b, z], "valid", native))
            zs = z if isinstance(z, int) else g(z)
            routed = f(fundseq_case(g(b), zs).result)
            if native != routed:
                out.append(_cx([b, z], routed, native))
    return n, out


def p_bar_segments(ctx, shard):
    bar = _bar_ctx(ctx)
    n1, out1 = p_segment(bar, shard)
    n2, out2 = p_enumeration(bar, shard)
    return n1 + n2, out1 + out2


def p_dom_monotone(ctx, shard):
    out = []
    n = 0
    bar = _bar_ctx(ctx)
    top = ctx.spec.max_level + 1
    for xi in _shard(bar.terms, shard):
        flags = [in_dom(xi, m) for m in range(top + 1)]
        n += 1
        for m in range(top):
            if flags[m] and not flags[m + 1]:
                out.append(_cx([xi, m], "in dom at m+1", flags))
                break
    return n, out


def p_kstar_pivotal(ctx, shard):
    bar = _bar_ctx(ctx)
    return p_pivotal(bar, shard)


def p_bachmann_bar(ctx, shard):
    bar = _bar_ctx(ctx)
    return _bachmann(bar, shard, bar.fs, bar.at0, bar.r0, with_g=False)


# ---------------------------------------------------------------------------
# hardy suite


def _hardy_pairs(ctx):
    return [(a, n) for a in ctx.hardy_terms for n in range(ctx.n_cap + 1)]


def _record(out, skipped, verdict, inputs, expected, actual):
    if verdict is None:
        return skipped + 1
    if not verdict:
        out.append(_cx(inputs, expected, actual))
    return skipped


def p_hardy_monotone(ctx, shard):
    out, skipped, n = [], 0, 0
    for a, k in _shard(_hardy_pairs(ctx), shard):
        n += 1
        lhs, rhs = ctx.H(a, k), ctx.H(a, k + 1)
        # strict: H(n) + 1 <= H(n+1)
        verdict = _le_check((lhs[0] + 1, lhs[1]), rhs)
        skipped = _record(out, skipped, verdict, [a, k], f"< H({k + 1})", lhs)
    return n, out, skipped


def p_hardy_dominate(ctx, shard):
    """beta[m] < alpha < beta implies H_{beta[m]}(n) <= H_alpha(n)."""
    out, skipped, n = [], 0, 0
    terms = ctx.hardy_terms
    for b in _shard(terms, shard):
        if classify(b) is not Kind.LIMIT:
            continue
        for m in range(ctx.n_cap + 1):
            bm = ctx.fs(b, m)
            for a in terms:
                if not (compare(bm, a) < 0 and compare(a, b) < 0):
                    continue
                for k in range(ctx.n_cap + 1):
                    n += 1
                    verdict = _le_check(ctx.H(bm, k), ctx.H(a, k))
                    skipped = _record(out, skipped, verdict, [b, m, a, k], ctx.H(a, k), ctx.H(bm, k))
    return n, out, skipped


def p_hardy_step(ctx, shard):
    """m <= n implies H_{alpha[m]}(n+1) <= H_alpha(n)."""
    out, skipped, n = [], 0, 0
    for a in _shard(ctx.hardy_terms, shard):
        if a is ZERO:
            continue
        for k in range(ctx.n_cap + 1):
            for m in range(k + 1):
                n += 1
                am = ctx.fs(a, m)
                verdict = _le_check(ctx.H(am, k + 1), ctx.H(a, k))
                skipped = _record(out, skipped, verdict, [a, m, k], ctx.H(a, k), ctx.H(am, k + 1))
    return n, out, skipped


def p_hardy_norm(ctx, shard):
    """beta < alpha and N(beta) <= n imply H_beta(n+1) <= H_alpha(n), for N = G and N = cnorm."""
    out, skipped, n = [], 0, 0
    terms = ctx.hardy_terms
    for a in _shard(terms, shard):
        for b in terms:
            if compare(b, a) >= 0:
                continue
            for k in range(ctx.n_cap + 1):
                if gnorm(b) > k and cnorm(b) > k:
                    continue
                n += 1
                verdict = _le_check(ctx.H(b, k + 1), ctx.H(a, k))
                skipped = _record(out, skipped, verdict, [b, a, k], ctx.H(a, k), ctx.H(b, k + 1))
    return n, out, skipped


def p_hardy_compose(ctx, shard):
    """NF(alpha, beta) implies H_alpha(H_beta(n)) <= H_{alpha+beta}(n)."""
    out, skipped, n = [], 0, 0
    terms = [t for t in ctx.hardy_terms if t is not ZERO]
    for a in _shard(terms, shard):
        for b in terms:
            if not nf_predicate(a, b):
                continue
            ab = concat([a, b])
            for k in range(ctx.n_cap + 1):
                n += 1
                hb = ctx.H(b, k)
                if not hb[1]:
                    skipped += 1
                    continue
                verdict = _le_check(ctx.H(a, hb[0]), ctx.H(ab, k))
                skipped = _record(out, skipped, verdict, [a, b, k], ctx.H(ab, k), ctx.H(a, hb[0]))
    return n, out, skipped


def p_hardy_walk(ctx, shard):
    out, skipped, n = [], 0, 0
    for a, k in _shard(_hardy_pairs(ctx), shard):
        h = ctx.H(a, k)
        if not h[1] or h[0] > 2000:
            skipped += 1
            continue
        n += 1
        w = walk_to_zero(a, k)
        if w != h[0]:
            out.append(_cx([a, k], h[0], w))
    return n, out, skipped


def p_hardy_power(ctx, shard):
    """(H_{omega^m})^(n+1)(n+1) <= H_{omega^{m+1}}(n) for m <= 2, n <= 3."""
    out, skipped, n = [], 0, 0
    cases = [(m, k) for m in range(3) for k in range(4)]
    for m, k in _shard(cases, shard):
        n += 1
        wm = Collapse(System.STEP, 0, nat_to_term(m))
        wm1 = Collapse(System.STEP, 0, nat_to_term(m + 1))
        x, exact = k + 1, True
        for _ in range(k + 1):
            x, exact = ctx.H(wm, x)
            if not exact:
                break
        verdict = _le_check((x, exact), ctx.H(wm1, k))
        skipped = _record(out, skipped, verdict, [m, k], ctx.H(wm1, k), (x, exact))
    return n, out, skipped


# ---------------------------------------------------------------------------
# negative fixture


WITNESS = "t0(t1(t0(t0(0))))"


def variant_bachmann(ctx, shard=(0, 1)):
    """Bachmann check for the star-support variant assignment."""
    r0 = np.array([ctx.rank(fundseq_star_variant(t, 0 if dom_ind(t) == 0 else ZERO)) for t in ctx.terms],
                  dtype=np.int64)
    return _bachmann(ctx, shard, fundseq_star_variant,
                     lambda t: fundseq_star_variant(t, 0 if dom_ind(t) == 0 else ZERO), r0, with_g=False)


def p_negative_fixture(ctx, shard):
    """The variant must fail Bachmann; the family theta_0(theta_1(omega)) must be among the witnesses."""
    if shard[0] != 0:
        return 0, []
    family = [parse(WITNESS)] + [Collapse(System.STEP, 0, Collapse(System.STEP, 1, nat_to_term(k)))
                                 for k in range(1, ctx.n_cap + 4)]
    spec = UniverseSpec(System.STEP, max(ctx.spec.max_norm, 7), 1)
    sub = Context(spec, ctx.n_cap)
    n, found = variant_bachmann(sub)
    direct = []
    alpha = family[0]
    for k in range(ctx.n_cap + 1):
        an = fundseq_star_variant(alpha, k)
        beta = fundseq_case(alpha, k + 1).result
        b0 = fundseq_star_variant(beta, 0)
        if compare(an, beta) < 0 and compare(beta, alpha) < 0 and compare(b0, an) < 0:
            direct.append((k, beta, b0))
    ok = bool(found) and any(c.inputs[0] == WITNESS for c in found) and len(direct) == ctx.n_cap + 1
    if ok:
        return n + len(direct), []
    return n + len(direct), [_cx([WITNESS], "Bachmann violation", f"{len(found)} found, direct {len(direct)}")]


LITERAL_WITNESS = "b0(b2(0)+b1(b1(b2(0))))"


def p_literal_gap(ctx, shard):
    """The verbatim simultaneous clauses (no head correction) must disagree
    with the f/g route at the known witness, while the corrected ones agree."""
    if shard[0] != 0:
        return 0, []
    b = parse(LITERAL_WITNESS)
    routed = f(fundseq_case(g(b), 0).result)
    literal = fundseq_case(b, 0, literal=True).result
    native = fundseq_case(b, 0).result
    if literal != routed and native == routed:
        return 1, []
    return 1, [_cx([LITERAL_WITNESS, 0], f"literal != {to_text(routed)} == native", (literal, native))]


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class Property:
    id: str
    suite: str
    fn: Callable
    statement: str


def _reg(items):
    return {p.id: p for p in items}


REGISTRY = _reg([
    Property("roundtrip", "order", p_roundtrip, "parse(print(a)) = a, canonical and pretty"),
    Property("make_sum", "order", p_make_sum, "make_sum is associative"),
    Property("classify", "order", p_classify, "classification and argument splitting reassemble"),
    Property("enumeration", "order", p_enumeration, "members valid and strictly increasing"),
    Property("order_laws", "order", p_order_laws, "compare is a strict total order agreeing with sort position"),
    Property("pivotal", "order", p_pivotal, "star(xi, j) < theta_j(xi)"),
    Property("segment", "order", p_segment, "Omega_i <= theta_i(xi) < Omega_{i+1}"),
    Property("eps_char", "order", p_eps_char, "Delta > 0 iff closed under theta_j below"),
    Property("partitioning", "core", p_partitioning, "d(a) = i+1 iff chi(i, a) = 1"),
    Property("loc_lex", "core", p_loc_lex, "localizations are lexicographically ordered"),
    Property("loc_prefix", "core", p_loc_prefix, "prefixes of a localization are localizations"),
    Property("loc_descending", "core", p_loc_descending, "fixed-point levels strictly descend"),
    Property("loc_floor", "core", p_loc_floor, "penultimate localization entry <= a[0]"),
    Property("loc_cases", "core", p_loc_cases, "localization of a[z] follows the case table"),
    Property("cantorian", "core", p_cantorian, "Cantorian laws of fundamental sequences"),
    Property("bachmann", "core", p_bachmann, "a[n] < b < a implies a[n] <= b[0]"),
    Property("normed", "core", p_normed, "a[n] < b < a implies G(a[n]) < G(b); G(a) = G(a[0]) + 1"),
    Property("regularity_cnorm", "core", p_regularity_cnorm, "b < a implies b <= a[|b|]"),
    Property("regularity_gnorm", "core", p_regularity_gnorm, "b < a implies b <= a[G(b)]"),
    Property("gnorm_additive", "core", p_gnorm_additive, "G(b + c) = G(b) + G(c) in normal form"),
    Property("gnorm_collapse", "core", p_gnorm_collapse, "G(theta_i(D + e)) >= G(D) + G(e) + 1"),
    Property("gnorm_param", "core", p_gnorm_param, "G(a[z]) >= G(a[0]) + G(z) when d(a) > 0"),
    Property("norm_bound", "core", p_norm_bound, "|a| <= (G(a) + 1)^2"),
    Property("support_control", "core", p_support_control, "support > 0, chi(D) = 0 imply star(D[z]) < support"),
    Property("star_monotone", "core", p_star_monotone, "z -> star(a[z], k) weakly increasing, bounded by star(a, k)"),
    Property("sandwich", "core", p_sandwich, "a[z] <= b < a implies star(b, k) >= star(a[z], k)"),
    Property("iso_roundtrip", "iso", p_iso_roundtrip, "g(f(a)) = a, f(g(b)) = b, images valid"),
    Property("iso_order", "iso", p_iso_order, "f is strictly increasing"),
    Property("iso_star", "iso", p_iso_star, "rt preserves star values"),
    Property("chi_transport", "iso", p_chi_transport, "chi(i, b) = chi(i, g(b))"),
    Property("dom_transport", "iso", p_dom_transport, "d(b) = d(g(b))"),
    Property("fix_transport", "iso", p_fix_transport, "F transports through rt"),
    Property("loc_transport", "iso", p_loc_transport, "localization(f(a)) = f(localization(a))"),
    Property("commutation", "iso", p_commutation, "b[z] = f(g(b)[g(z)])"),
    Property("bar_segments", "iso", p_bar_segments, "image universe ordered, level segments respected"),
    Property("dom_monotone", "iso", p_dom_monotone, "dom(theta_i) is contained in dom(theta_j) for i <= j"),
    Property("kstar_pivotal", "iso", p_kstar_pivotal, "star(g, k) < theta_k(g) in the simultaneous system"),
    Property("bachmann_bar", "iso", p_bachmann_bar, "Bachmann property for the simultaneous system"),
    Property("hardy_monotone", "hardy", p_hardy_monotone, "H_a(n) < H_a(n+1)"),
    Property("hardy_dominate", "hardy", p_hardy_dominate, "b[m] < a < b implies H_{b[m]}(n) <= H_a(n)"),
    Property("hardy_step", "hardy", p_hardy_step, "m <= n implies H_{a[m]}(n+1) <= H_a(n)"),
    Property("hardy_norm", "hardy", p_hardy_norm, "b < a, N(b) <= n imply H_b(n+1) <= H_a(n)"),
    Property("hardy_compose", "hardy", p_hardy_compose, "NF(a, b) implies H_a(H_b(n)) <= H_{a+b}(n)"),
    Property("hardy_walk", "hardy", p_hardy_walk, "H_a(n) = least k with a[n:k] = 0"),
    Property("hardy_power", "hardy", p_hardy_power, "iterated H_{w^m} below H_{w^{m+1}}"),
    Property("negative_fixture", "negative", p_negative_fixture, "star-support variant violates Bachmann"),
    Property("literal_gap", "negative", p_literal_gap, "verbatim simultaneous clauses differ from the f/g route"),
])

SUITES = sorted({p.suite for p in REGISTRY.values()})


def select(which) -> list:
    """Resolve ids, suite names and 'all' into registered property ids (registry order)."""
    if isinstance(which, str):
        which = [w for w in which.split(",") if w]
    wanted = set()
    for w in which:
        if w == "all":
            wanted.update(REGISTRY)
        elif w in SUITES:
            wanted.update(p.id for p in REGISTRY.values() if p.suite == w)
        elif w in REGISTRY:
            wanted.add(w)
        else:
            raise KeyError(f"unknown property or suite: {w}")
    return [pid for pid in REGISTRY if pid in wanted]


_CTX: Context | None = None


def _run_shard(args):
    pid, shard = args
    return _call(REGISTRY[pid].fn, _CTX, shard)


def _call(fn, ctx, shard):
    res = fn(ctx, shard)
    if len(res) == 2:
        return res[0], res[1], 0
    return res


def _order(cxs: list) -> list:
    """Smallest witnesses first: by total size of the inputs, then text."""
    return sorted(cxs, key=lambda c: (sum(len(x) for x in c.inputs), c.inputs, c.actual))


def _run(ctx: Context, pid: str, workers: int):
    global _CTX
    if workers > 1:
        _CTX = ctx
        mp = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(workers, mp_context=mp) as pool:
            parts = list(pool.map(_run_shard, [(pid, (k, workers)) for k in range(workers)]))
    else:
        parts = [_call(REGISTRY[pid].fn, ctx, (0, 1))]
    n = sum(p[0] for p in parts)
    skipped = sum(p[2] for p in parts)
    return n, _order([c for p in parts for c in p[1]]), skipped


def run_property(ctx: Context, pid: str, workers: int = 1, minimize: bool = True) -> PropertyReport:
    """Run one property.  On failure the property is re-checked on ascending
    norm prefixes of the universe and the first failing prefix's witnesses
    are reported (``minimal_norm``)."""
    start = time.perf_counter()
    n, cxs, skipped = _run(ctx, pid, workers)
    total = len(cxs)
    minimal = None
    if cxs and minimize and REGISTRY[pid].suite in ("order", "core", "iso"):
        minimal = ctx.spec.max_norm
        for m in range(1, ctx.spec.max_norm):
            _, small, _ = _run(ctx.shrink(m), pid, 1)
            if small:
                cxs, minimal = small, m
                break
    elapsed = time.perf_counter() - start
    return PropertyReport(pid, ctx.spec, n, cxs[:MAX_REPORTED], elapsed, skipped, total, minimal)


def run_suite(spec: UniverseSpec, which="all", n_cap: int = 3, workers: int = 1,
              iso_spec: UniverseSpec | None = None, **ctx_options) -> list:
    """Run the selected properties.  Isomorphism properties use ``iso_spec``
    when given (the stepwise universe whose f-image is also examined)."""
    ctx = Context(spec, n_cap, **ctx_options)
    iso_ctx = Context(iso_spec, n_cap, **ctx_options) if iso_spec is not None else ctx
    reports = []
    for pid in select(which):
        use = iso_ctx if REGISTRY[pid].suite == "iso" else ctx
        reports.append(run_property(use, pid, workers))
    return reports
