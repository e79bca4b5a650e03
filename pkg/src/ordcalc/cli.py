"""Command line interface: ``ordcalc <command> ...``.

Exit codes: 0 ok, 1 usage or parse error, 2 domain error, 3 budget exceeded,
4 property failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

from . import bar, iso, norms, stepwise
from .fundseq import chi, dom_ind, fundseq_case, support
from .harness import REGISTRY, SUITES, run_suite, select
from .norms import BudgetExceeded, HardyBudget
from .terms import Collapse, DomainError, OrdinalError, ParseError, System, Term, classify, parse, system_of, to_text
from .universe import UniverseSpec

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET, EXIT_FAIL = 0, 1, 2, 3, 4

DEFAULTS = {
    "max_steps": 10**7,
    "max_value": 10**9,
    "max_size": 5000,
    "max_norm": 8,
    "max_level": 2,
    "n_cap": 3,
    "iso_max_norm": 7,
    "suite": "all",
    "workers": 1,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is taken by domain errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_config(path: str | None = None, environ=None) -> dict:
    """Defaults, then the key=value file (``--config`` or ORDCALC_CONFIG), then ORDCALC_* variables."""
    environ = os.environ if environ is None else environ
    cfg = dict(DEFAULTS)
    path = path or environ.get("ORDCALC_CONFIG")
    if path:
        parser = configparser.ConfigParser()
        try:
            with open(path) as fh:
                parser.read_string("[ordcalc]\n" + fh.read())
        except (OSError, configparser.Error) as e:
            raise UsageError(f"cannot read config {path}: {e}") from None
        for key, value in parser["ordcalc"].items():
            _set(cfg, key, value, f"config {path}")
    for key in DEFAULTS:
        env = environ.get("ORDCALC_" + key.upper())
        if env is not None:
            _set(cfg, key, env, "ORDCALC_" + key.upper())
    return cfg


def _set(cfg: dict, key: str, value: str, where: str) -> None:
    key = key.strip().replace("-", "_")
    if key not in DEFAULTS:
        raise UsageError(f"{where}: unknown key {key!r}")
    if isinstance(DEFAULTS[key], int):
        try:
            cfg[key] = int(value)
        except ValueError:
            raise UsageError(f"{where}: {key} must be an integer") from None
    else:
        cfg[key] = value.strip()


# ---------------------------------------------------------------------------
# JSON shapes (also used by the tests to validate output)

_TERM = {"type": "string"}
SCHEMAS = {
    "parse": {"type": "object", "required": ["input", "term", "system", "kind", "valid"],
              "properties": {"input": _TERM, "term": _TERM, "system": {"enum": ["t", "b"]},
                             "kind": {"enum": ["zero", "successor", "limit"]}, "valid": {"type": "boolean"}}},
    "cmp": {"type": "object", "required": ["a", "b", "result"],
            "properties": {"a": _TERM, "b": _TERM, "result": {"enum": [-1, 0, 1]}}},
    "term_level": {"type": "object", "required": ["input", "level", "result"],
                   "properties": {"input": _TERM, "level": {"type": "integer"}, "result": _TERM}},
    "loc": {"type": "object", "required": ["input", "level", "entries"],
            "properties": {"input": _TERM, "level": {"type": "integer"},
                           "entries": {"type": "array", "items": _TERM, "minItems": 1}}},
    "fixp": {"type": "object", "required": ["delta", "eta", "level", "result"],
             "properties": {"delta": _TERM, "eta": _TERM, "level": {"type": "integer"}, "result": {"type": "boolean"}}},
    "fs": {"type": "object", "required": ["input", "param", "clause", "support", "result"],
           "properties": {"input": _TERM, "param": _TERM, "clause": {"type": "string"},
                          "support": _TERM, "result": _TERM}},
    "number": {"type": "object", "required": ["input", "result"],
               "properties": {"input": _TERM, "result": {"type": "integer", "minimum": 0}}},
    "chi": {"type": "object", "required": ["input", "level", "result"],
            "properties": {"input": _TERM, "level": {"type": "integer"}, "result": {"enum": [0, 1]}}},
    "hardy": {"type": "object", "required": ["input", "n", "result"],
              "properties": {"input": _TERM, "n": {"type": "integer"}, "result": {"type": "integer"}}},
    "walk": {"type": "object", "required": ["input", "n", "k", "result"],
             "properties": {"input": _TERM, "n": {"type": "integer"}, "k": {"type": "integer"}, "result": _TERM}},
    "convert": {"type": "object", "required": ["input", "result"],
                "properties": {"input": _TERM, "result": _TERM}},
    "error": {"type": "object", "required": ["error", "kind"],
              "properties": {"error": {"type": "string"},
                             "kind": {"enum": ["usage", "parse", "domain", "budget"]}}},
    "report": {
        "type": "object",
        "required": ["property_id", "universe", "instances_checked", "counterexamples", "elapsed", "passed"],
        "properties": {
            "property_id": {"type": "string"},
            "universe": {"type": "object", "required": ["system", "max_norm", "max_level"]},
            "instances_checked": {"type": "integer", "minimum": 0},
            "skipped": {"type": "integer", "minimum": 0},
            "passed": {"type": "boolean"},
            "counterexamples": {
                "type": "array",
                "items": {"type": "object", "required": ["inputs", "expected", "actual"],
                          "properties": {"inputs": {"type": "array", "items": {"type": "string"}},
                                         "expected": {"type": "string"}, "actual": {"type": "string"}}},
            },
            "elapsed": {"type": "number", "minimum": 0},
        },
    },
}


# ---------------------------------------------------------------------------
# helpers


def _term(args, text: str) -> Term:
    return parse(text, System.BAR if args.bar else None)


def _is_bar(args, *terms) -> bool:
    return args.bar or any(system_of(t) is System.BAR for t in terms)


def _validate(args, *terms: Term) -> None:
    for t in terms:
        ok = bar.valid_bar(t) if _is_bar(args, t) else stepwise.valid_T(t)
        if not ok:
            raise DomainError(f"not a valid {'simultaneous' if _is_bar(args, t) else 'stepwise'} term: {to_text(t)}")


def _show(args, t: Term) -> str:
    return to_text(t, pretty=args.pretty)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args):
    t = _term(args, args.term)
    valid = bar.valid_bar(t) if _is_bar(args, t) else stepwise.valid_T(t)
    sys_ = system_of(t) or (System.BAR if args.bar else System.STEP)
    payload = {"input": args.term, "term": _show(args, t), "system": sys_.value,
               "kind": classify(t).value, "valid": valid}
    _emit(args, payload, _show(args, t) if valid else f"{_show(args, t)}  (not a valid term)")
    return EXIT_OK if valid else EXIT_DOMAIN


def cmd_cmp(args):
    a, b = _term(args, args.a), _term(args, args.b)
    _validate(args, a, b)
    stepwise.check_same_system(a, b)
    r = stepwise.compare(a, b)
    _emit(args, {"a": _show(args, a), "b": _show(args, b), "result": r}, {-1: "<", 0: "=", 1: ">"}[r])
    return EXIT_OK


def cmd_star(args):
    a = _term(args, args.term)
    _validate(args, a)
    r = bar.star_bar(a, args.level) if _is_bar(args, a) else stepwise.star(a, args.level)
    _emit(args, {"input": _show(args, a), "level": args.level, "result": _show(args, r)}, _show(args, r))
    return EXIT_OK


def cmd_loc(args):
    a = _term(args, args.term)
    _validate(args, a)
    entries = [_show(args, e) for e in stepwise.localization(a, args.level).entries]
    _emit(args, {"input": _show(args, a), "level": args.level, "entries": entries}, ", ".join(entries))
    return EXIT_OK


def cmd_fixp(args):
    d, e = _term(args, args.delta), _term(args, args.eta)
    r = stepwise.fixpoint_F(d, e, args.level)
    _emit(args, {"delta": _show(args, d), "eta": _show(args, e), "level": args.level, "result": r}, str(r).lower())
    return EXIT_OK


def cmd_fs(args):
    a = _term(args, args.term)
    z = parse(args.param, system_of(a) or (System.BAR if args.bar else None))
    _validate(args, a, z)
    if _is_bar(args, a):
        res = bar.fundseq_bar_case(a, z)
    else:
        res = fundseq_case(a, z)
    payload = {"input": _show(args, a), "param": _show(args, z), "clause": res.case.value,
               "support": _show(args, res.support), "result": _show(args, res.result)}
    _emit(args, payload, _show(args, res.result))
    return EXIT_OK


def cmd_chi(args):
    a = _term(args, args.term)
    _validate(args, a)
    r = chi(args.level, a)
    _emit(args, {"input": _show(args, a), "level": args.level, "result": r}, str(r))
    return EXIT_OK


def _number(args, fn):
    a = _term(args, args.term)
    _validate(args, a)
    r = fn(a)
    _emit(args, {"input": _show(args, a), "result": r}, str(r))
    return EXIT_OK


def cmd_dom(args):
    return _number(args, dom_ind)


def cmd_norm(args):
    return _number(args, norms.norm)


def cmd_gnorm(args):
    return _number(args, norms.gnorm)


def cmd_ht(args):
    return _number(args, bar.ht)


def cmd_support(args):
    a = _term(args, args.term)
    _validate(args, a)
    if not isinstance(a, Collapse):
        raise DomainError("support is defined for collapse terms")
    r = support(a)
    _emit(args, {"input": _show(args, a), "result": _show(args, r)}, _show(args, r))
    return EXIT_OK


def cmd_hardy(args):
    a = _term(args, args.term)
    _validate(args, a)
    cfg = args.config_values
    steps = args.max_steps if args.max_steps is not None else cfg["max_steps"]
    budget = HardyBudget(steps, cfg["max_value"], cfg["max_size"])
    r = norms.hardy(a, args.n, budget)
    _emit(args, {"input": _show(args, a), "n": args.n, "result": r}, str(r))
    return EXIT_OK


def cmd_walk(args):
    a = _term(args, args.term)
    _validate(args, a)
    r = norms.bracket_walk(a, args.n, args.k)
    _emit(args, {"input": _show(args, a), "n": args.n, "k": args.k, "result": _show(args, r)}, _show(args, r))
    return EXIT_OK


def cmd_to_bar(args):
    a = parse(args.term, System.STEP)
    r = iso.to_bar(a)
    _emit(args, {"input": _show(args, a), "result": _show(args, r)}, _show(args, r))
    return EXIT_OK


def cmd_to_step(args):
    a = parse(args.term, System.BAR)
    r = iso.to_step(a)
    _emit(args, {"input": _show(args, a), "result": _show(args, r)}, _show(args, r))
    return EXIT_OK


def cmd_check(args):
    cfg = args.config_values
    max_norm = args.max_norm if args.max_norm is not None else cfg["max_norm"]
    max_level = args.max_level if args.max_level is not None else cfg["max_level"]
    n_cap = args.n_cap if args.n_cap is not None else cfg["n_cap"]
    iso_norm = args.iso_max_norm if args.iso_max_norm is not None else cfg["iso_max_norm"]
    suite = args.suite if args.suite is not None else cfg["suite"]
    workers = args.workers if args.workers is not None else cfg["workers"]
    if max_norm < 1 or max_level < 0 or n_cap < 0:
        raise UsageError("max-norm must be >= 1, max-level and n-cap >= 0")
    try:
        select(suite)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    spec = UniverseSpec(System.STEP, max_norm, max_level)
    iso_spec = UniverseSpec(System.STEP, min(iso_norm, max_norm), max_level)
    failed = False
    for report in run_suite(spec, suite, n_cap=n_cap, workers=workers, iso_spec=iso_spec):
        failed |= not report.passed
        if args.json:
            print(report.to_json(), flush=True)
        else:
            mark = "PASS" if report.passed else "FAIL"
            extra = f", {report.skipped} skipped" if report.skipped else ""
            print(f"{mark} {report.property_id}: {report.instances_checked} instances{extra} "
                  f"({report.elapsed:.2f}s)", flush=True)
            for c in report.counterexamples[:3]:
                print(f"    inputs={c.inputs} expected={c.expected} actual={c.actual}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_list(args):
    for pid, prop in REGISTRY.items():
        print(f"{pid:18s} {prop.suite:9s} {prop.statement}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bar", action="store_true", help="read prefix-free terms in the simultaneous system")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--pretty", action="store_true", help="print trailing 1s as a decimal")
    common.add_argument("--config", help="key=value file with budgets and defaults")

    p = _Parser(prog="ordcalc", description="Ordinal term calculator and property checker.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, *params):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for pname, kw in params:
            sp.add_argument(pname, **kw)
        sp.set_defaults(func=fn)
        return sp

    term = ("term", {"help": "term, e.g. t0(t1(0))"})
    level = ("level", {"type": int})
    add("parse", cmd_parse, "parse and print a term", term)
    add("cmp", cmd_cmp, "compare two terms", ("a", {}), ("b", {}))
    add("star", cmd_star, "star operator at a level", term, level)
    add("loc", cmd_loc, "localization at a level", term, level)
    add("fixp", cmd_fixp, "fixed-point condition F_level(delta, eta)", ("delta", {}), ("eta", {}), level)
    add("fs", cmd_fs, "fundamental sequence element", term, ("param", {"help": "index (a number or a term)"}))
    add("chi", cmd_chi, "characteristic function chi(level, term)", level, term)
    add("dom", cmd_dom, "domain indicator d(term)", term)
    add("support", cmd_support, "support term of a collapse", term)
    add("norm", cmd_norm, "canonical norm", term)
    add("gnorm", cmd_gnorm, "number of [0] steps down to 0", term)
    hp = add("hardy", cmd_hardy, "Hardy function H_term(n)", term, ("n", {"type": int}))
    hp.add_argument("--max-steps", type=int)
    add("walk", cmd_walk, "bracket walk term[n:k]", term, ("n", {"type": int}), ("k", {"type": int}))
    add("to-bar", cmd_to_bar, "stepwise to simultaneous", term)
    add("to-step", cmd_to_step, "simultaneous to stepwise", term)
    add("ht", cmd_ht, "height (largest collapse index + 1)", term)
    chk = add("check", cmd_check, "run the property suite")
    chk.add_argument("--max-norm", type=int)
    chk.add_argument("--max-level", type=int)
    chk.add_argument("--n-cap", type=int)
    chk.add_argument("--iso-max-norm", type=int, help="norm bound for the isomorphism suite")
    chk.add_argument("--suite", help=f"comma-separated property ids or suites ({', '.join(SUITES)}, all)")
    chk.add_argument("--workers", type=int)
    add("list", cmd_list, "list registered properties")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    kind = None
    try:
        args.config_values = load_config(args.config)
        return args.func(args)
    except UsageError as e:
        kind, code, msg = "usage", EXIT_USAGE, str(e)
    except ParseError as e:
        kind, code, msg = "parse", EXIT_USAGE, str(e)
    except BudgetExceeded as e:
        kind, code, msg = "budget", EXIT_BUDGET, str(e)
    except OrdinalError as e:
        kind, code, msg = "domain", EXIT_DOMAIN, str(e)
    if args.json:
        print(json.dumps({"error": msg, "kind": kind}, sort_keys=True))
    else:
        print(f"ordcalc: {kind} error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
