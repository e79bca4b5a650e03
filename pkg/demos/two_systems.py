"""Translate between the stepwise and the simultaneous system and compare
the native simultaneous sequence with the route through the stepwise one."""

from ordcalc import f, fundseq_bar, fundseq_case, g, parse

a = parse("t0(t1(t2(0)+t0(0)))")
print(a, "->", f(a), "->", g(f(a)))

for text in ["b0(b2(0))", "b0(b2(0)+b2(0))", "b0(b2(0)+b1(b1(b2(0))))"]:
    b = parse(text)
    for n in range(2):
        native = fundseq_bar(b, n)
        routed = f(fundseq_case(g(b), n).result)
        literal = fundseq_case(b, n, literal=True).result
        mark = "" if literal == native else "   verbatim clauses give " + str(literal)
        print(f"{b}[{n}] = {native}  (via g/f: {'same' if routed == native else routed}){mark}")
