"""Hardy functions on small ordinals, and what happens when the budget runs out."""

from ordcalc import BudgetExceeded, HardyBudget, hardy, parse
from ordcalc.norms import walk_to_zero

budget = HardyBudget(max_steps=10**6)


def H(alpha, n):
    try:
        return str(hardy(alpha, n, budget))
    except BudgetExceeded as e:
        return f">= {e.n}"


for text in ["0", "t0(0)", "t0(t0(0))", "t0(2)", "t0(3)"]:
    alpha = parse(text)
    print(f"H_{text}:", ", ".join(H(alpha, n) for n in range(4)))

w2 = parse("t0(2)")
print("least k with omega^2[2:k] = 0:", walk_to_zero(w2, 2))

try:
    hardy(parse("t0(t1(0))"), 4, budget)
except BudgetExceeded as e:
    print("epsilon_0 at 4:", e)
