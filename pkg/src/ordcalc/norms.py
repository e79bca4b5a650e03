"""Norms, the Hardy hierarchy and the bracket walk."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fundseq import FsCase, _fs, at_zero
from .stepwise import compare
from .terms import (
    ZERO,
    Collapse,
    DomainError,
    OrdinalError,
    Sum,
    System,
    Term,
    Zero,
    components,
    concat,
    end,
    mc,
    nat_to_term,
    system_of,
    to_text,
)

GNORM_CAP = 10**6


class BudgetExceeded(OrdinalError):
    """Raised when a Hardy evaluation runs out of budget; carries the partial state.

    ``n`` is a lower bound for the value that was being computed."""

    def __init__(self, term, n: int, steps: int):
        # term may be given as (component, count) runs; the full term is only built on demand
        if isinstance(term, Term):
            self._runs = tuple((c, 1) for c in components(term))
        else:
            self._runs = tuple((c, k) for c, k in term)
        text = _runs_text(self._runs)
        super().__init__(f"budget exceeded after {steps} steps at H_{text}({n})")
        self.n = n
        self.steps = steps

    @property
    def term(self) -> Term:
        return concat([c for c, k in self._runs for _ in range(k)])


def _runs_text(runs) -> str:
    pieces = []
    for c, k in runs[:8]:
        try:
            t = to_text(c, pretty=True)
        except RecursionError:
            t = "<deep term>"
        pieces.append(t if k == 1 else f"{t}*{k}")
    text = "+".join(pieces) + ("+..." if len(runs) > 8 else "")
    return text if len(text) <= 200 else text[:200] + "..."


@dataclass(frozen=True)
class HardyBudget:
    max_steps: int = 10**7
    max_value: int = 10**9
    max_size: int = 5000  # norm of a single expanded component

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_value <= 0 or self.max_size <= 0:
            raise ValueError("budget limits must be positive")


@lru_cache(maxsize=1 << 18)
def cnorm(alpha: Term) -> int:
    """Number of symbols 0, + and collapse in the term."""
    if isinstance(alpha, Zero):
        return 1
    if isinstance(alpha, Sum):
        return sum(cnorm(p) for p in alpha.parts) + len(alpha.parts) - 1
    return cnorm(alpha.arg) + 1


def norm_bar(alpha: Term) -> int:
    from .iso import g

    return cnorm(g(alpha))


def norm(alpha: Term) -> int:
    """Canonical norm; simultaneous terms are measured through their stepwise image."""
    if system_of(alpha) is System.BAR:
        return norm_bar(alpha)
    return cnorm(alpha)


_gcache: dict = {}


def gnorm(alpha: Term) -> int:
    """Number of steps alpha -> alpha[0] needed to reach 0."""
    chain = []
    x = alpha
    while not isinstance(x, Zero) and x not in _gcache:
        chain.append(x)
        if len(chain) > GNORM_CAP:
            raise RuntimeError(f"gnorm of {to_text(alpha)} did not terminate within {GNORM_CAP} steps")
        x = at_zero(x)
    base = 0 if isinstance(x, Zero) else _gcache[x]
    if len(_gcache) > 1 << 20:
        _gcache.clear()
    for t in reversed(chain):
        base += 1
        _gcache[t] = base
    return base


def nf_predicate(alpha: Term, beta: Term) -> bool:
    """alpha + beta needs no absorption: end(alpha) >= mc(beta)."""
    if isinstance(alpha, Zero) or isinstance(beta, Zero):
        raise DomainError("NF needs nonzero arguments")
    return compare(end(alpha), mc(beta)) >= 0


def _check_countable(alpha: Term) -> None:
    comps = components(alpha)
    if comps and comps[0].level > 0:
        raise DomainError(f"{to_text(alpha)} is not below Omega_1")


def _push(stack: list, term: Term) -> None:
    for c in components(term):
        if stack and stack[-1][0] == c:
            stack[-1][1] += 1
        else:
            stack.append([c, 1])


def hardy(alpha: Term, n: int, budget: HardyBudget | None = None) -> int:
    """H_alpha(n), evaluated iteratively: H_alpha(n) = H_{alpha[n]}(n+1).

    The term is kept as a run-length stack of its components; only the last
    one is expanded, since (xi + eta)[n] = xi + eta[n]."""
    budget = budget or HardyBudget()
    _check_countable(alpha)
    stack: list = []
    _push(stack, alpha)
    state = [n, 0]
    try:
        return _hardy_loop(stack, state, budget)
    except RecursionError:
        # terms nested deeper than the interpreter stack count as out of budget
        raise BudgetExceeded(stack, state[0], state[1]) from None


def _hardy_loop(stack: list, state: list, budget: HardyBudget) -> int:
    n, steps = state
    while stack:
        state[0], state[1] = n, steps
        if steps >= budget.max_steps or n > budget.max_value:
            raise BudgetExceeded(stack, n, steps)
        run = stack[-1]
        top = run[0]
        if top.arg is ZERO and top.level == 0:
            # a run of trailing 1s: one step each
            k = max(1, min(run[1], budget.max_steps - steps, budget.max_value + 1 - n))
            n += k
            steps += k
            run[1] -= k
        else:
            run[1] -= 1
        if run[1] == 0:
            stack.pop()
        if top.arg is not ZERO or top.level != 0:
            first = _fs(top, 0)
            if first.case is FsCase.PRINCIPAL_MULTIPLE and isinstance(first.result, Collapse):
                # top[n] is n+1 copies of top[0]; push them as one run
                if stack and stack[-1][0] is first.result:
                    stack[-1][1] += n + 1
                else:
                    stack.append([first.result, n + 1])
                comps = (first.result,)
            else:
                nxt = _fs(top, n).result
                _push(stack, nxt)
                comps = set(components(nxt))
            n += 1
            steps += 1
            if any(cnorm(c) > budget.max_size for c in comps):
                raise BudgetExceeded(stack, n, steps)
    return n


def bracket_walk(alpha: Term, n: int, k: int) -> Term:
    """alpha[n:k]: alpha + (n - k) for k <= n, then alpha[n:k+1] = alpha[n:k][k]."""
    _check_countable(alpha)
    if k <= n:
        return concat([alpha, nat_to_term(n - k, system_of(alpha) or System.STEP)])
    x = alpha
    for j in range(n, k):
        if isinstance(x, Zero):
            break
        x = _fs(x, j).result
    return x


def walk_to_zero(alpha: Term, n: int, limit: int = 10**6) -> int:
    """Least k >= n with alpha[n:k] = 0, by independent evaluation of each k."""
    for k in range(n, n + limit):
        if isinstance(bracket_walk(alpha, n, k), Zero):
            return k
    raise RuntimeError("walk did not reach 0 within the limit")


__all__ = [
    "BudgetExceeded",
    "HardyBudget",
    "cnorm",
    "norm",
    "norm_bar",
    "gnorm",
    "nf_predicate",
    "hardy",
    "bracket_walk",
    "walk_to_zero",
]
