"""Command-line entry point: ``loy check|diagnose|encode``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from loy.encoder import EncodedSpec, StateContext, encode_formula, encode_spec
from loy.encoder.alloy import emit_alloy_text
from loy.errors import LoyError
from loy.frontend import SpecDiagnostics, parse_files, parse_formula, resolve, typecheck
from loy.frontend.resolve import bind, formula_scope
from loy.frontend.typecheck import check_formula
from loy.patterns import (
    Diagnosis, check_core_first, diagnose_formula, diagnose_method, render_text, to_json,
)
from loy.relcore import ast as R
from loy.relcore.solver import DEFAULT_BUDGET, SAT, UNKNOWN, UNSAT, solve

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_scope(items: Sequence[str]) -> R.Scope:
    default, bounds = 3, {}
    for item in items:
        name, sep, value = item.partition("=")
        try:
            n = int(value if sep else name)
        except ValueError:
            raise UsageError(f"bad scope {item!r}") from None
        if n < 1:
            raise UsageError(f"scope bounds must be >= 1: {item!r}")
        if sep:
            bounds[name] = n
        else:
            default = n
    return R.Scope(default, tuple(sorted(bounds.items())))


def load_inputs(paths: Sequence[str]) -> EncodedSpec:
    if not paths:
        raise UsageError("no input files")
    rs = resolve(parse_files(paths))
    diags = typecheck(rs)
    if diags:
        raise SpecDiagnostics(diags)
    return encode_spec(rs)


def _status(statuses: List[str]) -> int:
    if UNKNOWN in statuses:
        return EXIT_BUDGET
    return EXIT_OK if all(s == SAT for s in statuses) else EXIT_FAIL


def cmd_check(es: EncodedSpec, args, out) -> int:
    scope = args.scope
    core = check_core_first(es.problem, scope, args.budget)
    targets = [("core", core.verdict, core.model, core.note)]
    for (cls, name), em in es.methods.items():
        f, env = em.query()
        r = solve(es.problem, f, env, scope, args.budget)
        targets.append((f"{cls}.{name}", r.status, r.model, None))
    if args.format == "json":
        doc = {"scope": str(scope), "targets": []}
        for name, status, model, note in targets:
            t = {"target": name, "verdict": status}
            if model is not None:
                t["model"] = model.to_dict()
            if note:
                t["note"] = note
            doc["targets"].append(t)
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for name, status, model, note in targets:
            word = {SAT: "satisfiable", UNSAT: "unsatisfiable", UNKNOWN: "unknown (budget exhausted)"}
            line = f"{name}: {word[status]} ({scope})"
            if note:
                line += f"  [{note}]"
            out.write(line + "\n")
            if model is not None and args.models:
                out.write("".join(f"    {ln}\n" for ln in model.dump().splitlines()))
    return _status([t[1] for t in targets])


def _formula_target(es: EncodedSpec, text: str) -> R.RelFormula:
    rs = es.resolved
    f = bind(parse_formula(text), formula_scope(rs.order()))
    diags = check_formula(rs, f, where="formula target")
    if diags:
        raise SpecDiagnostics(diags)
    return encode_formula(f, StateContext.stateless(rs))


def _invariant_target(es: EncodedSpec, spec: str, args) -> Diagnosis:
    cls, _, k = spec.partition("#")
    try:
        inv = es.invariant(cls.strip(), int(k))
    except (KeyError, ValueError):
        raise UsageError(f"unknown target: invariant {spec}") from None
    # the invariant is diagnosed against the core without itself
    rest = es.problem.with_core([c for c in es.problem.core if c.label != inv.label])
    return diagnose_formula(rest, R.Named(inv.label, inv.formula), R.TypeEnv(), args.scope,
                            args.budget, args.range_cap)


def cmd_diagnose(es: EncodedSpec, args, out) -> int:
    target = (args.target or "core").strip()
    kind, _, rest = target.partition(" ")
    rest = rest.strip()
    if kind == "core":
        node = check_core_first(es.problem, args.scope, args.budget, args.range_cap)
        ok = node.sat and not node.warnings()
        doc, text = to_json(node), render_text(node, args.models)
    else:
        if kind == "method":
            cls, _, m = rest.partition(".")
            try:
                es.method(cls, m)
            except KeyError:
                raise UsageError(f"unknown target: method {rest}") from None
            d = diagnose_method(es, cls, m, args.scope, args.budget, args.range_cap)
        elif kind == "invariant":
            d = _invariant_target(es, rest, args)
        elif kind == "formula":
            d = diagnose_formula(es.problem, _formula_target(es, rest), R.TypeEnv(), args.scope,
                                 args.budget, args.range_cap)
        else:
            raise UsageError(f"unknown target: {target}")
        ok = d.ok
        doc = {"core": to_json(d.core), "tree": to_json(d.tree)}
        text = render_text(d.core, args.models) + "\n\n" + render_text(d.tree, args.models)
    if args.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def write_alloy(es: EncodedSpec, inputs: Sequence[str], outdir: str) -> str:
    stem = os.path.splitext(os.path.basename(inputs[0]))[0]
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, stem + ".als")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_alloy_text(es))
    return path


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loy", description="Analyze Loy class specifications.")
    p.add_argument("command", choices=["check", "diagnose", "encode"])
    p.add_argument("inputs", nargs="*", help=".loy files forming one specification")
    p.add_argument("--scope", action="append", default=[],
                   help="default bound (3) or Domain=k override; repeatable")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node limit")
    p.add_argument("--target", help='"core", "invariant Class#k", "method Class.m" or "formula <text>"')
    p.add_argument("--emit-alloy", metavar="DIR", help="write <input>.als into DIR")
    p.add_argument("--range-cap", type=int, default=32, help="sub-conjunction queries per node")
    p.add_argument("--models", action="store_true", help="print models in text output")
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        args.scope = parse_scope(args.scope)
        es = load_inputs(args.inputs)
        if args.emit_alloy or args.command == "encode":
            path = write_alloy(es, args.inputs, args.emit_alloy or ".")
            out.write(path + "\n")
        if args.command == "check":
            return cmd_check(es, args, out)
        if args.command == "diagnose":
            return cmd_diagnose(es, args, out)
        return EXIT_OK
    except UsageError as e:
        err.write(f"loy: {e}\n")
        return EXIT_USAGE
    except (LoyError, OSError) as e:
        err.write(f"loy: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
