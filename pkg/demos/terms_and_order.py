"""Parse a few terms, print them, and sort them by ordinal value."""

from functools import cmp_to_key

from ordcalc import compare, localization, parse, star, to_text

names = {
    "1": "t0(0)",
    "omega": "t0(t0(0))",
    "omega^omega": "t0(t0(t0(0)))",
    "epsilon_0": "t0(t1(0))",
    "phi_omega(0)": "t0(t1(t0(0)))",
    "Gamma_0": "t0(t1(t1(0)))",
    "Omega": "t1(0)",
    "Bachmann-Howard": "t0(t1(t2(0)))",
}

terms = {k: parse(v) for k, v in names.items()}
for name, t in sorted(terms.items(), key=lambda kv: cmp_to_key(compare)(kv[1])):
    print(f"{name:16s} {to_text(t, pretty=True)}")

a = parse("t0(t1(0)+t0(t1(t2(0))))")
print()
print("star of the argument", star(a.arg, 0))
print("localization       ", ", ".join(map(to_text, localization(a, 0).entries)))
