"""Batch command line: validate, interpret, check, redundancy, gen.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input or usage error.
Diagnostics go to stderr; reports go to stdout and, with --report, to a file.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import (
    CertificateFailure,
    MalformedInput,
    MissingAtom,
    ScaleExceeded,
    TheoryFileError,
    FormulaSyntaxError,
    WorkbenchError,
)
from .heyting import gen_chain, gen_diamond, gen_powerset
from .kernel import FinCategory, parse_category, format_category, validate_category
from .logic import Theory, connective_depth, free_vars, parse_formula, parse_theory
from .report import Report
from .semantics import (
    Interpretation,
    build_interpretation,
    check_conditions,
    derive_instances,
)
from .structure import discover_structure
from .theorems import delta_certificate, verify_frobenius


def _load_model(path: str) -> tuple[FinCategory, str]:
    text = Path(path).read_text()
    return parse_category(text, name=Path(path).stem), text


def _load_theory(path: str) -> tuple[Theory, str]:
    text = Path(path).read_text()
    return parse_theory(text, theory_id=Path(path).stem), text


def _emit(report: Report, args) -> None:
    text = report.render()
    sys.stdout.write(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text)


def _header(report: Report, cat: FinCategory, model_text: str,
            theory: Theory | None = None, theory_text: str | None = None) -> None:
    report.add("tool", "catlogic")
    report.add("format", 1)
    report.add("model.id", cat.name)
    report.add("model.objects", len(cat.objects))
    report.add("model.arrows", len(cat.arrows))
    report.add_block("input.model", model_text)
    if theory is not None:
        report.add("theory.id", theory.theory_id)
        report.add_block("input.theory", theory_text or "")


def _universe_section(report: Report, interp: Interpretation) -> None:
    report.add("universe.depth", interp.universe.depth)
    report.add("universe.saturated", "yes" if interp.universe.saturated else "no")
    for sort in interp.theory.signature.sorts:
        terms = " ".join(str(t) for t in interp.universe.terms(sort)) or "(none)"
        report.add(f"universe.sort.{sort}", terms)
    report.add("reach.depth", interp.reach_depth)
    assert interp.reach is not None
    report.add("reach.size", len(interp.reach.members))
    for i, m in enumerate(interp.reach.members, 1):
        report.add(f"reach.member.{i:03d}", f"{m.obj.name} <- {m.provenance}")
    for i, w in enumerate(interp.warnings, 1):
        report.add(f"warning.{i:03d}", w)


def cmd_validate(args) -> int:
    cat, model_text = _load_model(args.model)
    rep = validate_category(cat)
    report = Report()
    _header(report, cat, model_text)
    report.add("validation", "PASS" if rep.ok else "FAIL")
    for i, v in enumerate(rep.violations, 1):
        report.add(f"validation.violation.{i:03d}", v)
    _emit(report, args)
    return 0 if rep.ok else 1


def cmd_interpret(args) -> int:
    cat, _ = _load_model(args.model)
    rep = validate_category(cat)
    if not rep.ok:
        print(f"error: model fails validation: {rep.violations[0]}", file=sys.stderr)
        return 1
    theory, _ = _load_theory(args.theory)
    formula = parse_formula(args.formula, theory.signature)
    if free_vars(formula):
        print("error: interpret needs a closed formula", file=sys.stderr)
        return 2
    st = discover_structure(cat)
    interp = build_interpretation(st, theory, reach_depth=args.reach,
                                  universe_depth=args.depth)
    obj = interp.interpret(formula)
    print(obj.name)
    return 0


def cmd_check(args) -> int:
    t0 = time.monotonic()
    cat, model_text = _load_model(args.model)
    theory, theory_text = _load_theory(args.theory)
    report = Report()
    _header(report, cat, model_text, theory, theory_text)

    rep = validate_category(cat)
    report.add("validation", "PASS" if rep.ok else "FAIL")
    for i, v in enumerate(rep.violations, 1):
        report.add(f"validation.violation.{i:03d}", v)
    if not rep.ok:
        _emit(report, args)
        return 1

    st = discover_structure(cat)
    interp = build_interpretation(st, theory, reach_depth=args.reach,
                                  universe_depth=args.depth)
    _universe_section(report, interp)

    cond = check_conditions(interp)
    for v in cond.verdicts:
        report.add(f"condition.{v.number}.{v.name}", v.status)
        for i, d in enumerate(v.details, 1):
            report.add(f"condition.{v.number}.detail.{i:03d}", d)
    report.add("conditions.overall", "PASS" if cond.all_pass else "FAIL")

    for i, ax in enumerate(theory.signature.axioms, 1):
        report.add(f"interpret.{i:03d}.formula", ax)
        try:
            report.add(f"interpret.{i:03d}.object", interp.interpret(ax).name)
        except WorkbenchError as exc:
            report.add(f"interpret.{i:03d}.object", f"(failed: {exc})")

    report.add_timing("total_ms", (time.monotonic() - t0) * 1000)
    _emit(report, args)
    return 0 if cond.all_pass else 1


def cmd_redundancy(args) -> int:
    t0 = time.monotonic()
    cat, model_text = _load_model(args.model)
    theory, theory_text = _load_theory(args.theory)
    report = Report()
    _header(report, cat, model_text, theory, theory_text)

    rep = validate_category(cat)
    report.add("validation", "PASS" if rep.ok else "FAIL")
    if not rep.ok:
        for i, v in enumerate(rep.violations, 1):
            report.add(f"validation.violation.{i:03d}", v)
        _emit(report, args)
        return 1

    st = discover_structure(cat)
    interp = build_interpretation(st, theory, reach_depth=args.reach,
                                  universe_depth=args.depth)
    _universe_section(report, interp)
    failed = 0

    triples = [(a, b, c) for a in cat.objects for b in cat.objects
               for c in cat.objects]
    report.add("delta.count", len(triples))
    for i, (a, b, c) in enumerate(triples, 1):
        key = f"delta.{i:04d}"
        report.add(f"{key}.triple", f"({a.name}, {b.name}, {c.name})")
        try:
            cert = delta_certificate(st, a, b, c)
        except WorkbenchError as exc:
            failed += 1
            report.add(f"{key}.verdict", f"FAIL: {exc}")
            continue
        report.add(f"{key}.arrow", cert.delta.name)
        report.add(f"{key}.inverse", cert.delta_inv.name)
        report.add(f"{key}.verdict", "PASS")

    instances = derive_instances(theory)
    report.add("frobenius.count", len(instances))
    for i, inst in enumerate(instances, 1):
        key = f"frobenius.{i:03d}"
        report.add(f"{key}.instance", inst.describe())
        try:
            cert = verify_frobenius(interp, inst.left, inst.body,
                                    inst.var, inst.sort)
        except WorkbenchError as exc:
            failed += 1
            report.add(f"{key}.verdict", f"FAIL: {exc}")
            continue
        report.add(f"{key}.alpha", cert.alpha.name)
        report.add(f"{key}.gamma", cert.gamma.name)
        report.add(f"{key}.beta", cert.beta.name)
        report.add(f"{key}.equations", " and ".join(cert.equations))
        report.add(f"{key}.initiality",
                   f"PASS ({cert.initiality.vertexes_checked} vertexes, "
                   f"{cert.initiality.families_checked} families"
                   + (", truncated)" if cert.initiality.truncated else ")"))
        report.add(f"{key}.verdict", "PASS")

    report.add("redundancy.overall", "PASS" if failed == 0 else f"FAIL ({failed})")
    report.add_timing("total_ms", (time.monotonic() - t0) * 1000)
    _emit(report, args)
    return 0 if failed == 0 else 1


def cmd_gen(args) -> int:
    if args.kind == "chain":
        model = gen_chain(args.n)
    elif args.kind == "powerset":
        model = gen_powerset(args.n)
    else:
        model = gen_diamond()
    text = format_category(model.category())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="catlogic",
        description="Check finite categories with an interpretation map against "
                    "the bicartesian-closed quantifier-semantics conditions, and "
                    "certify that the two distributivity conditions are derivable.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theory=True):
        sp.add_argument("--model", required=True, help="category file")
        if theory:
            sp.add_argument("--theory", required=True, help="theory file")
            sp.add_argument("--depth", type=int, default=None,
                            help="term universe depth (default: theory file)")
            sp.add_argument("--reach", type=int, default=3,
                            help="reachable-set formula depth (default 3)")
        sp.add_argument("--report", default=None, help="also write the report here")

    sp = sub.add_parser("validate", help="check the category laws")
    common(sp, theory=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("interpret", help="interpret one closed formula")
    common(sp)
    sp.add_argument("--formula", required=True)
    sp.set_defaults(func=cmd_interpret)

    sp = sub.add_parser("check", help="verdicts for all seven conditions")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("redundancy",
                        help="build and verify the delta and frobenius certificates")
    common(sp)
    sp.set_defaults(func=cmd_redundancy)

    sp = sub.add_parser("gen", help="generate a bundled Heyting model file")
    sp.add_argument("--kind", required=True, choices=["chain", "powerset", "diamond"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)

    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (MalformedInput, TheoryFileError, FormulaSyntaxError, MissingAtom,
            ScaleExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(run_cli())
