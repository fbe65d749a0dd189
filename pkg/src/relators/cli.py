"""Command-line entry point.

JSON results go to stdout and diagnostics to stderr.  Exit status is 0 on
success (or a true verdict), 1 when a check fails or an audit finds a
counterexample, and 2 on malformed input or configuration.
"""

import argparse
import json
import sys

from . import jsonio
from .audit import PROPERTIES, AuditConfig, replay, run_audit
from .composition import canonical_comparison, compose_distributors, compose_spans, reflect_span
from .distributors import check_dfib_into_product, check_opfib_into_product, check_two_sided
from .errors import ComparisonFailed, RelatorsError, ValidationError
from .factorization import comprehensive_factorization, is_discrete_fibration, is_discrete_opfibration, is_final


class UsageError(Exception):
    pass


def _emit(doc):
    sys.stdout.write(jsonio.dumps(doc))


def _read(path, *kinds):
    kind, obj = jsonio.read(path)
    if kinds and kind not in kinds:
        raise UsageError(f"{path}: expected {' or '.join(kinds)}, got {kind}")
    return obj


def _summary(kind, obj):
    if kind == "groupoid":
        return {"objects": obj.n_objects, "arrows": obj.n_arrows}
    if kind == "functor":
        return {"source_objects": obj.source.n_objects, "target_objects": obj.target.n_objects}
    if kind == "distributor":
        return {"elements": obj.n_elements, "fibers": {f"{b},{a}": n for (b, a), n in obj.sizes().items()}}
    if kind == "span":
        return {"apex_objects": obj.apex.n_objects, "apex_arrows": obj.apex.n_arrows}
    if kind == "internal_groupoid":
        return {"C0": obj.C0.n, "C1": obj.C1.n}
    if kind == "internal_functor":
        return {"source_C1": obj.source.C1.n, "target_C1": obj.target.C1.n}
    return {"S0": obj.S0.n}


def cmd_validate(args):
    try:
        kind, obj = jsonio.read(args.file)
    except ValidationError as exc:
        _emit({"valid": False, "error": type(exc).__name__, "message": str(exc), "witness": exc.witness})
        return 1
    _emit({"valid": True, "kind": kind, **_summary(kind, obj)})
    return 0


def cmd_factorize(args):
    F = _read(args.file, "functor")
    _emit(comprehensive_factorization(F).to_json())
    return 0


def cmd_check(args):
    if args.two_sided:
        span = _read(args.file, "span")
        v = check_two_sided(span)
        doc = {
            "check": "two_sided",
            **jsonio.verdict_to_json(v),
            "dfib_into_product": bool(check_dfib_into_product(span)),
            "opfib_into_product": bool(check_opfib_into_product(span)),
        }
    else:
        F = _read(args.file, "functor")
        name, fn = {
            "final": ("final", is_final),
            "dfib": ("dfib", is_discrete_fibration),
            "opfib": ("opfib", is_discrete_opfibration),
        }[args.which]
        v = fn(F)
        doc = {"check": name, **jsonio.verdict_to_json(v)}
    _emit(doc)
    return 0 if doc["ok"] else 1


def cmd_compose(args):
    if args.span:
        sp1, sp2 = _read(args.first, "span"), _read(args.second, "span")
        _emit(jsonio.span_to_json(compose_spans(sp1, sp2)))
    else:
        S, T = _read(args.first, "distributor"), _read(args.second, "distributor")
        TS = compose_distributors(S, T)
        doc = jsonio.distributor_to_json(TS)
        doc["representatives"] = [list(r) for r in TS.representative]
        _emit(doc)
    return 0


def cmd_reflect(args):
    span = _read(args.file, "span")
    r = reflect_span(span)
    doc = jsonio.distributor_to_json(r.distributor)
    doc["unit"] = jsonio.functor_to_json(r.unit, endpoints=False)
    _emit(doc)
    return 0


def cmd_compare(args):
    S, T = _read(args.first, "distributor"), _read(args.second, "distributor")
    try:
        comp = canonical_comparison(S, T)
    except ComparisonFailed as exc:
        _emit({"bijective": False, "error": str(exc), "witness": exc.witness})
        return 1
    _emit({**comp.verdict, "mapping": list(comp.mapping)})
    return 0


def cmd_audit(args):
    try:
        cfg = AuditConfig(
            seed=args.seed,
            trials=args.trials,
            max_objects=args.max_objects,
            max_arrows_per_hom=args.max_arrows_per_hom,
            max_fiber=args.max_fiber,
            base=args.base,
            properties=tuple(args.property or ()),
            timings=args.timings,
        )
    except RelatorsError as exc:
        raise UsageError(str(exc)) from None
    report = run_audit(cfg)
    _emit(report.to_json())
    for name, r in sorted(report.results.items()):
        print(f"{name}: {r.passed}/{r.passed + r.failed}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_replay(args):
    with open(args.file) as fh:
        doc = json.load(fh)
    # accept a whole report as well as a single counterexample
    if "properties" in doc and "config" in doc:
        found = [p["counterexample"] for _, p in sorted(doc["properties"].items()) if p.get("counterexample")]
        if not found:
            raise UsageError("report contains no counterexample")
        doc = found[0]
    ok, detail = replay(doc)
    _emit({"property": doc["property"], "ok": ok, "detail": detail, "reproduced": detail == doc.get("detail")})
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="relators", description="Finite groupoids, distributors and their composition.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="validate a JSON structure")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("factorize", help="comprehensive factorization of a functor")
    s.add_argument("file")
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("check", help="final / discrete (op)fibration / two-sided checks")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--final", dest="which", action="store_const", const="final")
    g.add_argument("--dfib", dest="which", action="store_const", const="dfib")
    g.add_argument("--opfib", dest="which", action="store_const", const="opfib")
    g.add_argument("--two-sided", dest="two_sided", action="store_true")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("compose", help="compose two spans or two distributors")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--span", action="store_true")
    g.add_argument("--dist", action="store_true")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("reflect", help="reflect a span into a distributor")
    s.add_argument("file")
    s.set_defaults(func=cmd_reflect)

    s = sub.add_parser("compare", help="compare the two composites of a composable pair")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("audit", help="randomized property audit")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-objects", type=int, default=4)
    s.add_argument("--max-arrows-per-hom", type=int, default=4)
    s.add_argument("--max-fiber", type=int, default=4)
    s.add_argument("--base", default="finset", help="finset, gset:z2, gset:z3 or gset:s3")
    s.add_argument("--property", action="append", choices=sorted(PROPERTIES))
    s.add_argument("--timings", action="store_true", help="add wall-clock seconds (breaks byte-identical output)")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("replay", help="re-run a serialized counterexample")
    s.add_argument("file")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "which", None) is None and args.command == "check" and not args.two_sided:
        parser.error("choose a check")
    try:
        return args.func(args)
    except (UsageError, RelatorsError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"relators: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
