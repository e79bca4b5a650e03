"""First elements of some fundamental sequences, with the clause that produced them."""

from ordcalc import fundseq_case, parse

for text in ["t0(t1(0))", "t0(t1(t0(0)))", "t0(t1(t1(0)))", "t0(t1(0)+t0(t1(t1(0))))", "t0(t1(t2(t1(0))))"]:
    alpha = parse(text)
    print(text)
    for n in range(3):
        r = fundseq_case(alpha, n)
        print(f"  [{n}] = {r.result}   ({r.case.value})")

# uncountable cofinality: the parameter is itself a term below Omega_1
delta = parse("t1(t2(t1(0)))")
for z in ["0", "t0(0)", "t0(t0(0))"]:
    print(f"{delta}[{z}] = {fundseq_case(delta, parse(z)).result}")
