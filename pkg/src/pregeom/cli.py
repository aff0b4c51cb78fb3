"""Command-line front end: ``pregeom <verb> ...``.

Exit codes: 0 success, 2 bad input, 3 capacity exceeded, 4 theorem violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import docs, perm
from .action import BoundAction, family_failure
from .classify import decompose_theorem11, full_report
from .errors import CapacityError, ClassificationError, TheoremViolation, ValidationError
from .gen import REGISTRY, GeneratorSpec, generate
from .perm import PermGroup
from .quotient import TypeRefiningPartition, normal_quotient, quotient_by, quotient_summary

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_THEOREM = 0, 2, 3, 4


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(docs.dumps(doc))
    else:
        print(text)


def _fmt_kv(d: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in d.items())


def _analysis(a: BoundAction) -> dict:
    rep = full_report(a).to_dict()
    keys = ("verdict", "reason", "fiber_sizes", "in_family", "type_classes", "primitive_degenerate",
            "normal_degenerate", "primitive_basic", "normal_basic", "case_tag")
    return {k: rep[k] for k in keys}


def cmd_analyze(args) -> int:
    for path in args.paths:
        a = docs.load_binding(path)
        info = _analysis(a)
        lines = [f"{path}:", f"  in family: {info['in_family']}"]
        if info["reason"]:
            lines.append(f"  note: {info['reason']}")
        if info["type_classes"]:
            lines.append(f"  type classes: {_fmt_kv(info['type_classes'])}")
            lines.append(f"  degenerate: primitive={info['primitive_degenerate']} "
                         f"normal={info['normal_degenerate']}")
            lines.append(f"  primitive-basic: {info['primitive_basic']}  normal-basic: {info['normal_basic']}")
        lines.append(f"  verdict: {' + '.join(info['verdict'])}"
                     + (f" (case {info['case_tag']})" if info["case_tag"] else ""))
        _emit(args, docs.report_doc(info, "analyze"), "\n".join(lines))
    return EXIT_OK


def _read_partition(path: str, a: BoundAction) -> TypeRefiningPartition:
    raw = docs.read_json(path)
    if isinstance(raw, dict):
        raw = raw.get("parts")
    if not isinstance(raw, list) or not all(isinstance(P, list) for P in raw):
        raise ValidationError(f"{path}: expected a list of parts (lists of element ids)")
    return TypeRefiningPartition.from_parts(raw, a.geometry)


def cmd_quotient(args) -> int:
    a = docs.load_binding(args.path)
    if args.normal:
        gens = [perm.parse_cycles(s, a.group.degree) for s in args.normal]
        res = normal_quotient(a, PermGroup(a.group.degree, gens))
    else:
        res = quotient_by(a, _read_partition(args.partition, a))
    summary = quotient_summary(res)
    out = args.out or str(Path(args.path).with_suffix("")) + ".quotient.binding"
    docs.write_json(docs.binding_doc(res.quotient), out)
    summary["output"] = out
    lines = [f"quotient written to {out}", f"  fiber sizes: {_fmt_kv(summary['fiber_sizes'])}"]
    if "k_table" in summary:
        lines.append(f"  k table: {_fmt_kv(summary['k_table'])}")
    lines.append(f"  part degrees: {_fmt_kv(summary['part_degrees'])}")
    lines.append(f"  geometry before/after: {summary['source_is_geometry']}/{summary['quotient_is_geometry']}")
    _emit(args, docs.report_doc(summary, "quotient"), "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    for path in args.paths:
        a = docs.load_binding(path)
        res = decompose_theorem11(a)
        text = f"{path}: " + " + ".join("{" + ", ".join(P) + "}" for P in res.partition.parts)
        _emit(args, docs.report_doc(res.as_dict(), "decompose"), text)
    return EXIT_OK


def cmd_classify(args) -> int:
    for path in args.paths:
        a = docs.load_binding(path)
        rep = full_report(a).to_dict()
        if args.json:
            _emit(args, docs.report_doc(rep, "classify"), "")
            continue
        lines = [f"{path}: {' + '.join(rep['verdict'])}"]
        if rep["reason"]:
            lines.append(f"  note: {rep['reason']}")
        if rep["thm11_partition"]:
            lines.append("  decomposition: " + " + ".join(
                "{" + ", ".join(P) + "}" for P in rep["thm11_partition"]["parts"]))
        if rep["case_tag"]:
            lines.append(f"  case {rep['case_tag']}" + (f" ({rep['case_alias']})" if rep["case_alias"] else ""))
        if rep["table1_line"]:
            t = rep["table1_line"]
            lines.append(f"  {t['line']}: {_fmt_kv(t['params'])}")
        for key, val in rep["witnesses"].items():
            lines.append(f"  witness {key}: {json.dumps(val)}")
        print("\n".join(lines))
    return EXIT_OK


def _parse_params(extra: Sequence[str]) -> dict[str, str]:
    params: dict[str, str] = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise ValidationError(f"unexpected argument {tok!r}; parameters look like --name value")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            val = next(it, None)
            if val is None:
                raise ValidationError(f"parameter --{key} needs a value")
        params[key] = val
    return params


def cmd_gen(args, extra: Sequence[str]) -> int:
    a = generate(GeneratorSpec(args.name, _parse_params(extra)))
    reason = family_failure(a)
    if reason:
        raise TheoremViolation(f"generator {args.name} produced a pair outside the family: {reason}")
    docs.write_json(docs.binding_doc(a), args.out)
    info = {"output": args.out, "types": list(a.types), "fiber_sizes": list(a.geometry.fiber_sizes()),
            "group_order": a.group.order()}
    _emit(args, docs.report_doc(info, "gen"),
          f"wrote {args.out}: types {info['types']}, fiber sizes {info['fiber_sizes']}, "
          f"|G| = {info['group_order']}")
    return EXIT_OK


def cmd_census(args) -> int:
    from .census import SUITES, run_suite

    if args.suite not in SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}")
    rows = run_suite(args.suite, args.workers)
    for r in rows:
        if not args.json:
            tag = "PASS" if r.ok else "FAIL"
            desc = " + ".join(r.verdict) + (f" case {r.case}" if r.case else "") + (f" {r.line}" if r.line else "")
            print(f"{tag} {r.id:<18} {r.seconds:6.2f}s  {desc}" + (f"  [{r.error}]" if r.error else ""))
    if args.json:
        sys.stdout.write(docs.dumps(docs.report_doc(
            {"suite": args.suite, "rows": [{"id": r.id, "ok": r.ok, "verdict": list(r.verdict), "case": r.case,
                                           "line": r.line, "error": r.error} for r in rows]}, "census")))
    if any(r.theorem_violation for r in rows):
        return EXIT_THEOREM
    failed = [r for r in rows if not r.ok]
    if failed and all(r.error and r.error.startswith("CapacityError") for r in failed):
        return EXIT_CAPACITY
    return EXIT_THEOREM if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pregeom", description=__doc__.splitlines()[0], allow_abbrev=False)
    ap.add_argument("--max-order", type=int, default=None, help="element-enumeration cap")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--seed", default=None, help="reserved; every computation is deterministic")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", help="family membership, type classes, degeneracy and basicness")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("quotient", help="imprimitive or normal quotient of a binding")
    p.add_argument("path")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--normal", action="append", help="generator of N in cycle notation (repeatable)")
    g.add_argument("--partition", help="JSON file with a list of parts")
    p.add_argument("--out", help="output binding path")
    p = sub.add_parser("decompose", help="summand decomposition of a primitive-basic pair")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("classify", help="full classification report")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("gen", allow_abbrev=False, help=f"generate a binding: {', '.join(sorted(REGISTRY))}")
    p.add_argument("name")
    p.add_argument("--out", default="out.binding")
    p = sub.add_parser("census", help="run a named suite of generated instances")
    p.add_argument("--suite", default="quick")
    p.add_argument("--workers", type=int, default=1)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    if extra and args.verb != "gen":
        ap.error(f"unrecognized arguments: {' '.join(extra)}")
    saved_cap = perm.LIMITS.element_cap
    if args.max_order is not None:
        perm.LIMITS.element_cap = args.max_order
    handlers = {"analyze": cmd_analyze, "quotient": cmd_quotient, "decompose": cmd_decompose,
                "classify": cmd_classify, "census": cmd_census}
    try:
        if args.verb == "gen":
            return cmd_gen(args, extra)
        return handlers[args.verb](args)
    except (ValidationError, ClassificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    finally:
        perm.LIMITS.element_cap = saved_cap


if __name__ == "__main__":
    sys.exit(main())
