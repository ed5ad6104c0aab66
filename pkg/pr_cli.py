"""
Command-line surface for the partition-regularity lab.

    python pr_cli.py algebra verify|eval ...
    python pr_cli.py patterns find|enumerate ...
    python pr_cli.py largeness analyze|compare ...
    python pr_cli.py pr decide|rado|export-cnf|check-model ...

Exit codes: 0 verified success, 1 negative mathematical outcome, 2 usage or
validation error. Settings resolve as flags > config file > environment >
defaults, and the merged settings are echoed in the report manifest.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dotenv import load_dotenv

import symmetric_algebra as algebra
from cnf_export import export_cnf, parse_dimacs, parse_model, solve_cnf, validate_model
from largeness_lab import (
    FiniteSetWindow,
    LargenessParams,
    analyze_additive,
    analyze_multiplicative,
    analyze_star,
    pullback_compare,
    run_transfer_corpus,
)
from pattern_engine import (
    Coloring,
    Window,
    enumerate_solutions,
    find_monochromatic,
    validate_solution,
)
from pattern_factory import parse_pattern
from pr_search import decide, rado_number
from report_writer import Report, RunManifest, emit_report
from utils import ValidationError, env_flag, env_int, log, parse_int_list

LOG_PREFIX = "[pr_cli]"

load_dotenv()

# ============================
# Defaults per command
# ============================
COMMON = {"format": "json", "output": None, "timing": False}

DEFAULTS = {
    ("algebra", "verify"): {"l": None, "k": None, "samples": 100_000, "seed": 0, "bound": 1_000_000,
                            "fold_max": 8, "suite": "all"},
    ("algebra", "eval"): {"op": None, "l": 1, "k": 1, "t": 0, "j": 1, "n": 1, "values": None,
                          "depth": None, "direction": "forward", "lo": None, "hi": None},
    ("patterns", "find"): {"pattern": None, "window": None, "n": None, "classes": None, "rule": "mono"},
    ("patterns", "enumerate"): {"pattern": None, "window": None, "n": None, "limit": 100},
    ("largeness", "analyze"): {"structure": "additive", "set": None, "members": None, "window": None,
                               "g": 2, "L": 8, "m": 3, "l": 1, "k": 0, "t": None},
    ("largeness", "compare"): {"set": None, "members": None, "window": None, "t": 0, "g": 2, "L": 8, "m": 3,
                               "corpus": False, "count": 100, "width": 4096, "density": 0.5, "seed": 0,
                               "t_min": -5, "t_max": 5},
    ("pr", "decide"): {"pattern": None, "colors": 2, "n": None, "workers": None, "domain": "positive",
                       "expect": None, "split_depth": None},
    ("pr", "rado"): {"pattern": None, "colors": 2, "max": None, "workers": None, "domain": "positive",
                     "sweep": False, "split_depth": None},
    ("pr", "export-cnf"): {"pattern": None, "colors": 2, "n": None, "domain": "positive", "cnf": None,
                           "solve": False, "solver": "cadical195"},
    ("pr", "check-model"): {"cnf": None, "model": None},
}

ENV_KEYS = {"workers": "PR_WORKERS", "split_depth": "PR_SPLIT_DEPTH"}


# ============================
# Parser
# ============================
def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML or JSON settings file")
    parser.add_argument("--format", choices=["json", "csv"], default=None)
    parser.add_argument("--output", help="report destination (default stdout)")
    parser.add_argument("--timing", action="store_true", default=None, help="include wall-clock fields")


def _pattern_args(parser, n_flag="--n"):
    parser.add_argument("--pattern", help="canonical pattern name, e.g. schur:add or ap:3")
    parser.add_argument("--colors", type=int, help="number of colors r")
    if n_flag:
        parser.add_argument(n_flag, dest=n_flag.lstrip("-"), type=int, help="window [1,N]")
    parser.add_argument("--domain", choices=["positive", "z"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pr_cli", description="(l,k)-symmetric partition regularity lab")
    groups = parser.add_subparsers(dest="group", required=True)

    # algebra
    alg = groups.add_parser("algebra").add_subparsers(dest="action", required=True)
    p = alg.add_parser("verify", help="run the identity suites")
    _common(p)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--fold-max", dest="fold_max", type=int)
    p.add_argument("--suite", choices=["identities", "ring", "sigma", "all"])

    p = alg.add_parser("eval", help="evaluate one operation")
    _common(p)
    p.add_argument("--op", choices=["star", "fold", "gsym", "esym", "oplus", "odot", "h", "sigma", "fs",
                                    "translate", "factor"])
    for name in ("l", "k", "t", "j", "n", "depth", "lo", "hi"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--values", help="comma separated integers, e.g. 2,3")
    p.add_argument("--direction", choices=["forward", "inverse"])

    # patterns
    pat = groups.add_parser("patterns").add_subparsers(dest="action", required=True)
    p = pat.add_parser("find", help="least monochromatic witness in a coloring")
    _common(p)
    p.add_argument("--pattern")
    p.add_argument("--window", help="lo:hi")
    p.add_argument("--n", type=int, help="window [1,N]")
    p.add_argument("--classes", help="color classes, e.g. '1,4|2,3' or '1-10|11-20'")
    p.add_argument("--rule", help="mono, parity, mod:R or blocks:B")

    p = pat.add_parser("enumerate", help="list solution tuples in a window")
    _common(p)
    p.add_argument("--pattern")
    p.add_argument("--window", help="lo:hi")
    p.add_argument("--n", type=int, help="window [1,N]")
    p.add_argument("--limit", type=int)

    # largeness
    lg = groups.add_parser("largeness").add_subparsers(dest="action", required=True)
    for action in ("analyze", "compare"):
        p = lg.add_parser(action)
        _common(p)
        p.add_argument("--set", help="JSON file with a run-length encoded set")
        p.add_argument("--members", help="members, e.g. '10-40,60-90'")
        p.add_argument("--window", help="lo:hi")
        p.add_argument("--g", type=int)
        p.add_argument("--L", dest="L", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--t", type=int)
        if action == "analyze":
            p.add_argument("--structure", choices=["additive", "multiplicative", "star"])
            p.add_argument("--l", type=int)
            p.add_argument("--k", type=int)
        else:
            p.add_argument("--corpus", action="store_true", default=None, help="run the seeded transfer corpus")
            p.add_argument("--count", type=int)
            p.add_argument("--width", type=int)
            p.add_argument("--density", type=float)
            p.add_argument("--seed", type=int)
            p.add_argument("--t-min", dest="t_min", type=int)
            p.add_argument("--t-max", dest="t_max", type=int)

    # pr
    pr = groups.add_parser("pr").add_subparsers(dest="action", required=True)
    p = pr.add_parser("decide", help="is some r-coloring of [1,N] free of monochromatic solutions?")
    _common(p)
    _pattern_args(p)
    p.add_argument("--workers", type=int)
    p.add_argument("--split-depth", dest="split_depth", type=int)
    p.add_argument("--expect", choices=["avoidable", "unavoidable"])

    p = pr.add_parser("rado", help="least unavoidable N")
    _common(p)
    _pattern_args(p, n_flag="--max")
    p.add_argument("--workers", type=int)
    p.add_argument("--split-depth", dest="split_depth", type=int)
    p.add_argument("--sweep", action="store_true", default=None)

    p = pr.add_parser("export-cnf", help="DIMACS CNF of the avoidance problem")
    _common(p)
    _pattern_args(p)
    p.add_argument("--cnf", help="where to write the DIMACS file")
    p.add_argument("--solve", action="store_true", default=None, help="solve with python-sat and validate")
    p.add_argument("--solver")

    p = pr.add_parser("check-model", help="validate a solver model against an exported CNF")
    _common(p)
    p.add_argument("--cnf", help="DIMACS file written by export-cnf")
    p.add_argument("--model", help="solver output with v-lines")
    return parser


# ============================
# Config
# ============================
def load_config(path: str) -> dict:
    if not path:
        return {}
    try:
        if path.endswith(".toml"):
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        if path.endswith(".json"):
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
    except OSError as e:
        raise ValidationError(f"cannot read config {path}: {e}")
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ValidationError(f"malformed config {path}: {e}")
    raise ValidationError(f"config must be .toml or .json, got {path}")


def _config_key(key: str) -> list:
    return [key, key.replace("_", "-")]


def merge_settings(args: argparse.Namespace, config: dict) -> dict:
    """flags > config table for the group > flat config keys > environment > defaults."""
    defaults = {**COMMON, **DEFAULTS[(args.group, args.action)]}
    table = config.get(args.group, {}) if isinstance(config.get(args.group), dict) else {}
    settings = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            for source in (table, config):
                for name in _config_key(key):
                    if name in source and not isinstance(source[name], dict):
                        value = source[name]
                        break
                if value is not None:
                    break
        if value is None and key in ENV_KEYS and os.environ.get(ENV_KEYS[key]):
            value = env_int(ENV_KEYS[key], default or 1)
        if value is None and key == "timing":
            value = env_flag("PR_REPORT_TIMING")
        settings[key] = default if value is None else value
    return settings


def _require(settings: dict, *keys):
    missing = [k for k in keys if settings.get(k) is None]
    if missing:
        raise ValidationError(f"missing required setting(s): {', '.join('--' + k for k in missing)}")


def _window(settings: dict) -> Window:
    if settings.get("window"):
        text = str(settings["window"])
        lo, sep, hi = text.partition(":")
        if not sep:
            raise ValidationError(f"window must be lo:hi, got {text!r}")
        try:
            return Window(int(lo), int(hi))
        except ValueError:
            raise ValidationError(f"window must be lo:hi, got {text!r}")
    if settings.get("n"):
        return Window.positive(int(settings["n"]))
    raise ValidationError("give --window lo:hi or --n N")


def _coloring(settings: dict, window: Window) -> Coloring:
    if settings.get("classes"):
        classes = [parse_int_list(part) for part in str(settings["classes"]).split("|")]
        return Coloring.from_classes(window, classes)
    rule = str(settings.get("rule") or "mono")
    values = window.values()
    if rule == "mono":
        return Coloring.monochrome(window)
    if rule == "parity":
        return Coloring(window, 2, tuple(v % 2 for v in values))
    name, _, arg = rule.partition(":")
    if name == "mod" and arg.isdigit() and int(arg) >= 1:
        return Coloring(window, int(arg), tuple(v % int(arg) for v in values))
    if name == "blocks" and arg.isdigit() and int(arg) >= 1:
        size = int(arg)
        colors = tuple((v - window.lo) // size for v in values)
        return Coloring(window, max(colors) + 1, colors)
    raise ValidationError(f"unknown coloring rule {rule!r} (mono, parity, mod:R, blocks:B)")


def _finite_set(settings: dict) -> FiniteSetWindow:
    if settings.get("set"):
        try:
            with open(settings["set"], encoding="utf-8") as fh:
                return FiniteSetWindow.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"cannot read set {settings['set']}: {e}")
    _require(settings, "members", "window")
    return FiniteSetWindow.from_members(_window(settings), parse_int_list(str(settings["members"])))


def _read_text(path: str, what: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {what} {path}: {e}")


# ============================
# Handlers: each returns (exit code, outcome, csv rows)
# ============================
def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def cmd_algebra_verify(s: dict):
    params = [(s["l"], s["k"])] if s["l"] is not None or s["k"] is not None else None
    if params and None in params[0]:
        raise ValidationError("give both --l and --k")
    suites = []
    if s["suite"] in ("identities", "all"):
        suites.append(algebra.verify_identities(params, s["samples"], s["seed"], s["bound"], s["fold_max"]))
    if s["suite"] in ("ring", "all"):
        suites.append(algebra.verify_ring_isomorphism())
    if s["suite"] in ("sigma", "all"):
        suites.append(algebra.verify_sigma_translate(seed=s["seed"]))
    passed = all(suite["passed"] for suite in suites)
    rows = [{"suite": suite["suite"], "passed": suite["passed"]} for suite in suites]
    return (0 if passed else 1), {"suites": suites, "passed": passed}, rows


def cmd_algebra_eval(s: dict):
    _require(s, "op")
    op = s["op"]
    values = parse_int_list(s["values"]) if s["values"] else []
    p = algebra.StarParams(s["l"], s["k"]) if op in ("star", "fold", "gsym", "translate", "factor") else None
    t = algebra.AffineShift(s["t"])

    def need(count):
        if len(values) < count:
            raise ValidationError(f"--op {op} needs at least {count} value(s) in --values")

    if op == "star":
        need(2)
        value = algebra.star(p, values[0], values[1])
    elif op == "fold":
        value = algebra.star_fold(p, values)
    elif op == "gsym":
        value = algebra.gsym(p, values)
    elif op == "esym":
        value = algebra.elem_sym(s["j"], values)
    elif op == "oplus":
        need(2)
        value = algebra.oplus(t, values[0], values[1])
    elif op == "odot":
        need(2)
        value = algebra.odot(t, values[0], values[1])
    elif op == "h":
        need(1)
        value = algebra.h_iso(t, values[0], s["direction"])
    elif op == "sigma":
        value = algebra.sigma_set(t, values, s["depth"] or len(values))
    elif op == "fs":
        value = algebra.fs_set(t, values, s["depth"] or len(values))
    elif op == "translate":
        value = algebra.star_translate(p, s["n"], values)
    else:
        need(1)
        _require(s, "lo", "hi")
        value = algebra.star_factorizations(p, values[0], s["n"], s["lo"], s["hi"])
    outcome = {"op": op, "values": values, "l": s["l"], "k": s["k"], "t": s["t"],
               "value": [_jsonable(v) for v in value] if isinstance(value, list) else _jsonable(value)}
    return 0, outcome, None


def cmd_patterns_find(s: dict):
    _require(s, "pattern")
    pattern = parse_pattern(s["pattern"])
    window = _window(s)
    coloring = _coloring(s, window)
    witness = find_monochromatic(coloring, pattern)
    outcome = {
        "pattern": pattern.canonical_name(),
        "coloring": coloring.to_dict(),
        "witness": witness.to_dict() if witness else None,
    }
    if witness:
        log(LOG_PREFIX, f"✅ Witness {witness.solution.occupied} in color {witness.color}")
    else:
        log(LOG_PREFIX, "⚠️ No monochromatic witness")
    rows = [witness.solution.to_dict()] if witness else []
    return (0 if witness else 1), outcome, rows


def cmd_patterns_enumerate(s: dict):
    _require(s, "pattern")
    pattern = parse_pattern(s["pattern"])
    window = _window(s)
    solutions = enumerate_solutions(pattern, window, s["limit"])
    validated = all(validate_solution(pattern, sol) for sol in solutions)
    outcome = {
        "pattern": pattern.canonical_name(),
        "window": window.to_dict(),
        "limit": s["limit"],
        "count": len(solutions),
        "validated": validated,
        "solutions": [sol.to_dict() for sol in solutions],
    }
    rows = [{**sol.as_dict(), "occupied": " ".join(map(str, sol.occupied))} for sol in solutions]
    return 0, outcome, rows


def _largeness_params(s: dict) -> LargenessParams:
    return LargenessParams(gap=s["g"], run=s["L"], translate_bound=s["m"])


def cmd_largeness_analyze(s: dict):
    A = _finite_set(s)
    params = _largeness_params(s)
    if s["structure"] == "additive":
        report = analyze_additive(A, params)
    elif s["structure"] == "multiplicative":
        report = analyze_multiplicative(A, params)
    else:
        sp = algebra.AffineShift(s["t"]).star_params if s["t"] is not None else algebra.StarParams(s["l"], s["k"])
        report = analyze_star(A, sp, params)
    outcome = {"set": A.to_json(), "report": report.to_dict()}
    return 0, outcome, report.to_rows("A")


def cmd_largeness_compare(s: dict):
    params = _largeness_params(s)
    if s["corpus"]:
        result = run_transfer_corpus(range(s["t_min"], s["t_max"] + 1), s["count"], s["width"],
                                     s["density"], s["seed"], params)
        return (0 if result["passed"] else 1), result, result["rows"]
    A = _finite_set(s)
    comparison = pullback_compare(A, s["t"], params)
    outcome = {"set": A.to_json(), **comparison.to_dict()}
    ok = comparison.agreement and comparison.translation_invariant
    return (0 if ok else 1), outcome, comparison.to_rows()


def cmd_pr_decide(s: dict):
    _require(s, "pattern", "n")
    outcome = decide(s["pattern"], s["colors"], s["n"], s["workers"], s["domain"], s["split_depth"],
                     timing=s["timing"])
    data = outcome.to_dict()
    data["expect"] = s["expect"]
    if s["expect"]:
        code = 0 if outcome.verdict.lower() == s["expect"] else 1
    else:
        code = 1 if outcome.avoidable else 0
    row = {"pattern": outcome.pattern, "r": outcome.r, "n": s["n"], "verdict": outcome.verdict,
           "nodes": outcome.stats.get("nodes")}
    return code, data, [row]


def cmd_pr_rado(s: dict):
    _require(s, "pattern", "max")
    result = rado_number(s["pattern"], s["colors"], s["max"], s["workers"], s["domain"], s["sweep"],
                         s["split_depth"], timing=s["timing"])
    rows = [{"n": n, "verdict": v} for n, v in result.history]
    return (1 if result.bound_exceeded else 0), result.to_dict(), rows


def cmd_pr_export_cnf(s: dict):
    _require(s, "pattern", "n")
    doc = export_cnf(s["pattern"], s["colors"], s["n"], s["domain"])
    text = doc.to_dimacs()
    outcome = {"pattern": doc.pattern, "n": doc.n, "r": doc.r, "num_vars": doc.num_vars,
               "num_clauses": len(doc.clauses), "cnf": s["cnf"]}
    if s["cnf"]:
        try:
            with open(s["cnf"], "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            raise ValidationError(f"cannot write CNF to {s['cnf']}: {e}")
        log(LOG_PREFIX, f"✅ DIMACS written to {s['cnf']}")
    else:
        outcome["dimacs"] = text
    code = 0
    if s["solve"]:
        check = solve_cnf(doc, s["solver"])
        outcome["solve"] = check.to_dict()
        code = 0 if check.accepted else 1
    return code, outcome, None


def cmd_pr_check_model(s: dict):
    _require(s, "cnf", "model")
    doc = parse_dimacs(_read_text(s["cnf"], "CNF"))
    model = parse_model(_read_text(s["model"], "model"))
    check = validate_model(doc, model)
    outcome = {"pattern": doc.pattern, "n": doc.n, "r": doc.r, **check.to_dict()}
    return (0 if check.accepted else 1), outcome, None


HANDLERS = {
    ("algebra", "verify"): cmd_algebra_verify,
    ("algebra", "eval"): cmd_algebra_eval,
    ("patterns", "find"): cmd_patterns_find,
    ("patterns", "enumerate"): cmd_patterns_enumerate,
    ("largeness", "analyze"): cmd_largeness_analyze,
    ("largeness", "compare"): cmd_largeness_compare,
    ("pr", "decide"): cmd_pr_decide,
    ("pr", "rado"): cmd_pr_rado,
    ("pr", "export-cnf"): cmd_pr_export_cnf,
    ("pr", "check-model"): cmd_pr_check_model,
}


# ============================
# Entry point
# ============================
def run_command(argv) -> tuple:
    """
    Parse, dispatch and emit.

    Returns:
        (exit code, Report or None)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else 2), None

    command = f"{args.group} {args.action}"
    try:
        settings = merge_settings(args, load_config(args.config))
        log(LOG_PREFIX, f"🚀 {command}")
        started = time.perf_counter()
        code, outcome, rows = HANDLERS[(args.group, args.action)](settings)
        params = {k: v for k, v in settings.items() if k not in ("output", "format")}
        manifest = RunManifest(
            command=command,
            params=params,
            seed=settings.get("seed"),
            workers=settings.get("workers") or env_int("PR_WORKERS", 1),
            wall_time=round(time.perf_counter() - started, 6) if settings["timing"] else None,
        )
        report = Report(manifest, outcome, rows)
        emit_report(report, settings["format"], settings["output"])
    except (ValueError, OverflowError) as e:
        log(LOG_PREFIX, f"❌ {command}: {e}")
        return 2, None
    status = "✅" if code == 0 else "⚠️"
    log(LOG_PREFIX, f"{status} {command} finished with exit code {code}")
    return code, report


def main():
    code, _ = run_command(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
