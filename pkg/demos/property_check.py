"""Run a few harness properties on a small universe and print the reports."""

from ordcalc import System, UniverseSpec
from ordcalc.harness import run_suite

spec = UniverseSpec(System.STEP, max_norm=6, max_level=2)
for report in run_suite(spec, "bachmann,cantorian,commutation,negative_fixture"):
    print(report.to_json())
