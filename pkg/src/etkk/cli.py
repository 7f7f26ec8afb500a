"""Command-line front end.

Every command prints one JSON report on stdout:
    {"command": ..., "verdict": ..., "details": {...}, "exit_code": n}
Exit code 0 means an affirmative verdict, 1 a well-formed negative one,
2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import charts, kkcalc, lifting, spectra
from .blocks import classify, n_constant
from .errors import (
    BoundaryMismatch,
    EtkkError,
    FiberDimMismatch,
    NotCommutative,
    PreconditionUnmet,
)
from .io import (
    block_from_doc,
    chart_from_doc,
    decomposition_from_doc,
    diagram_from_doc,
    encode,
    load_json,
    parse_int,
    parse_rational,
    spectrum_from_doc,
    test_function_from_doc,
    witness_from_doc,
)
from .ktheory import compute_ktheory
from .reference_cases import verify_paper


@dataclass
class Report:
    command: str
    verdict: object
    details: dict = field(default_factory=dict)
    exit_code: int = 0

    def to_json(self) -> str:
        payload = encode({"command": self.command, "verdict": self.verdict, "details": self.details})
        payload["exit_code"] = self.exit_code  # a bare JSON number, unlike payload integers
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


class UsageError(Exception):
    def __init__(self, message: str, usage: str):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage().strip())


def _report(command: str, verdict, details=None, affirmative=None) -> Report:
    ok = bool(verdict) if affirmative is None else affirmative
    return Report(command, verdict, details or {}, 0 if ok else 1)


# ---- ktheory --------------------------------------------------------------

def cmd_ktheory(args) -> Report:
    A = block_from_doc(load_json(args.block))
    kt = compute_ktheory(A)
    details = {
        "k0_rank": kt.k0_rank,
        "k0_basis": kt.k0_basis,
        "k1": str(kt.k1),
        "unit": kt.unit_class,
        "is_in_C_O": classify(A).is_in_C_O,
    }
    if A.is_interval:
        details["n_constant"] = n_constant(A)
    return _report("ktheory", True, details)


# ---- kk -------------------------------------------------------------------

def _diagram(path):
    return diagram_from_doc(load_json(path))


def cmd_kk_validate(args) -> Report:
    doc = load_json(args.diagram)
    try:
        d = diagram_from_doc(doc)
    except NotCommutative as exc:
        return _report("kk validate", False, {"reason": str(exc), **exc.details})
    return _report("kk validate", True, {"diagram": d})


def cmd_kk_equal(args) -> Report:
    d1, d2 = _diagram(args.first), _diagram(args.second)
    equal = kkcalc.kk_equal(d1, d2)
    w = kkcalc.in_M(d1 - d2)
    return _report("kk equal", equal, {"mu": w.mu if w else None})


def cmd_kk_compose(args) -> Report:
    d = kkcalc.compose(_diagram(args.first), _diagram(args.second))
    return _report("kk compose", True, {"diagram": d})


def cmd_kk_positive(args) -> Report:
    return _report("kk positive", kkcalc.is_positive(_diagram(args.diagram)))


def cmd_kk_positive_mod_m(args) -> Report:
    found = kkcalc.positive_mod_M(_diagram(args.diagram))
    if found is None:
        return _report("kk positive-mod-m", False)
    mu, rep = found
    return _report("kk positive-mod-m", True, {"mu": mu.mu, "representative": rep})


def cmd_kk_generators(args) -> Report:
    A = block_from_doc(load_json(args.block))
    gens = [
        {"kind": g.kind, "indices": g.indices, "w": g.w, "source": g.source,
         "lambda0": g.diagram.lambda0, "lambda1": g.diagram.lambda1}
        for g in kkcalc.dl_generators(A)
    ]
    return _report("kk generators", True, {"count": len(gens), "generators": gens})


def cmd_kk_preserves_order(args) -> Report:
    g = _diagram(args.diagram)
    ok = kkcalc.preserves_dl_order(g)
    failing = [{"kind": f.kind, "indices": f.indices} for f in kkcalc.failing_generators(g)]
    return _report("kk preserves-order", ok, {"failing_generators": failing})


# ---- lift -----------------------------------------------------------------

def _verdict_report(command: str, v: lifting.LiftVerdict) -> Report:
    details = {
        "status": v.status,
        "criterion": v.criterion,
        "witness_rows": v.witness_rows,
        "unital_ok": v.unital_ok,
        "verified": v.verify(),
        "extra": v.details,
    }
    return Report(command, v.status, details, 0 if v.liftable else 1)


def cmd_lift_d0(args) -> Report:
    return _verdict_report("lift d0", lifting.d0_conditions(_diagram(args.diagram)))


def cmd_lift_suff(args) -> Report:
    return _verdict_report("lift suff", lifting.suff_condition(_diagram(args.diagram)))


def cmd_lift_decide(args) -> Report:
    return _verdict_report("lift decide", lifting.decide_lift(_diagram(args.diagram)))


def cmd_lift_composed(args) -> Report:
    dec, gamma = decomposition_from_doc(load_json(args.document))
    return _verdict_report("lift composed", lifting.composed_existence(dec, gamma))


def cmd_lift_zero_check(args) -> Report:
    g = _diagram(args.diagram)
    try:
        ok = lifting.zero_kk_check(g)
    except PreconditionUnmet as exc:
        return Report("lift zero-check", "precondition_unmet", {"reason": str(exc), **exc.details}, 1)
    return _report("lift zero-check", ok)


# ---- spectra ----------------------------------------------------------------

def _spectrum(path):
    return spectrum_from_doc(load_json(path))


def _values(path) -> list:
    doc = load_json(path)
    if isinstance(doc, dict):
        doc = doc.get("values", [])
    return [parse_rational(v) for v in doc]


def cmd_spectra_eig(args) -> Report:
    S = _spectrum(args.spectrum)
    h = test_function_from_doc(load_json(args.test_function), S.block)
    vals = spectra.eig(h, S)
    return _report("spectra eig", True, {"values": vals, "dimension": S.dim})


def cmd_spectra_dist(args) -> Report:
    return _report("spectra dist", True, {"distance": spectra.eig_dist(_values(args.first), _values(args.second))})


def cmd_spectra_kk_equal(args) -> Report:
    S1, S2 = _spectrum(args.first), _spectrum(args.second)
    c = spectra.kk_equal_points(S1.block, S1, S2)
    return _report("spectra kk-equal", c is not None, {"c": c})


def cmd_spectra_align(args) -> Report:
    S1, S2 = _spectrum(args.first), _spectrum(args.second)
    res = spectra.align_spectra(S1.block, S1, S2, parse_rational(args.eta))
    bound = 4 * n_constant(S1.block) * parse_rational(args.eta)
    return _report("spectra align", True, {
        "c": res.c, "S1": res.S1, "S2": res.S2, "pairing": res.pairing,
        "maxdist": res.maxdist, "bound": bound, "moved1": res.moved1, "moved2": res.moved2,
    })


def cmd_spectra_pair(args) -> Report:
    S1, S2 = _spectrum(args.first), _spectrum(args.second)
    found = spectra.pair_cores(S1, S2, parse_rational(args.eta))
    if found is None:
        return _report("spectra pair", False)
    X, Y, pairs = found
    return _report("spectra pair", True, {"X": X, "Y": Y, "pairs": pairs})


def cmd_spectra_test_functions(args) -> Report:
    A = block_from_doc(load_json(args.block))
    hs = spectra.test_functions(A, parse_rational(args.eta), budget=args.budget)
    t1 = [h for h in hs if h.kind == "type1"]
    t2 = [h for h in hs if h.kind == "type2"]
    return _report("spectra test-functions", True, {
        "type1_count": len(t1), "type2_count": len(t2), "budget": args.budget,
        "type1": [(h.j, h.r, h.s) for h in t1], "type2": [h.X for h in t2],
    })


# ---- charts -----------------------------------------------------------------

def cmd_chart_validate(args) -> Report:
    doc = load_json(args.chart)
    try:
        c = chart_from_doc(doc)
    except (FiberDimMismatch, BoundaryMismatch) as exc:
        return _report("chart validate", False, {"error": type(exc).__name__, "reason": str(exc), **exc.details})
    return _report("chart validate", True, {"paths": len(c.paths)})


def cmd_chart_fiber(args) -> Report:
    c = chart_from_doc(load_json(args.chart))
    return _report("chart fiber", True, {"fiber": charts.fiber(c, parse_rational(args.x))})


def cmd_chart_compose(args) -> Report:
    c1 = chart_from_doc(load_json(args.first))
    c2 = chart_from_doc(load_json(args.second))
    return _report("chart compose", True, {"chart": charts.compose_charts(c1, c2)})


def cmd_chart_distribute(args) -> Report:
    c = chart_from_doc(load_json(args.chart))
    K, L = parse_int(args.K), parse_int(args.L)
    if args.eta is not None:
        w = charts.has_distribution(c, parse_rational(args.eta), K, L)
        return _report("chart distribute", w is not None, {"witness": w})
    delta, w = charts.find_distribution(c, K, L)
    return _report("chart distribute", True, {"delta": delta, "witness": w})


def cmd_chart_decompose(args) -> Report:
    c = chart_from_doc(load_json(args.chart))
    K, L = parse_int(args.K), parse_int(args.L)
    if args.witness:
        w = witness_from_doc(load_json(args.witness))
    else:
        _, w = charts.find_distribution(c, K, L)
    cert = charts.decompose(c, K, L, w)
    return _report("chart decompose", True, {"witness": w, "certificate": cert})


# ---- built-in cases -----------------------------------------------------------

def cmd_verify_paper(args) -> Report:
    results = verify_paper()
    cases = [
        {
            "name": r.name,
            "passed": r.passed,
            "error": r.error or None,
            "checks": [{"label": label, "passed": ok, "value": value} for label, ok, value in r.checks],
        }
        for r in results
    ]
    details = {"cases": cases, "failures": [r.name for r in results if not r.passed]}
    if args.seed is not None:
        details["rigidity_sample"] = _rigidity_sample(args.seed)
    ok = all(r.passed for r in results) and details.get("rigidity_sample", {}).get("failures", 0) == 0
    return _report("verify-paper", ok, details)


def _rigidity_sample(seed: int, trials: int = 200) -> dict:
    """Seeded spot check: order-preserving, unit-killing diagrams are zero in KK."""
    from .sampling import random_block, random_diagram

    rng = random.Random(seed)
    checked = failures = 0
    for _ in range(trials):
        A, B = random_block(rng), random_block(rng)
        for _ in range(3):
            d = random_diagram(rng, A, B, box=1)
            if d is None or not kkcalc.kills_unit(d) or not kkcalc.preserves_dl_order(d):
                continue
            checked += 1
            failures += not kkcalc.kk_equal(d, kkcalc.zero_diagram(A, B))
    return {"seed": seed, "trials": trials, "checked": checked, "failures": failures}


# ---- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # Subcommands repeat the global flags without overriding values given earlier.
        p = _Parser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--budget", type=int, default=d(spectra.DEFAULT_BUDGET), help="cap on type 2 test sets")
        p.add_argument("--seed", type=int, default=d(None), help="seed for randomized checks")
        p.add_argument("--format", choices=["json"], default=d("json"))
        return p

    common = flags(suppress=True)
    parser = _Parser(prog="etkk", parents=[flags(suppress=False)], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(subparsers, name, fn, *positional, **options):
        p = subparsers.add_parser(name, parents=[common])
        for arg in positional:
            p.add_argument(arg)
        for opt, kw in options.items():
            p.add_argument(f"--{opt}", **kw)
        p.set_defaults(func=fn)
        return p

    add(sub, "ktheory", cmd_ktheory, "block")

    kk = sub.add_parser("kk").add_subparsers(dest="action", required=True)
    add(kk, "validate", cmd_kk_validate, "diagram")
    add(kk, "equal", cmd_kk_equal, "first", "second")
    add(kk, "compose", cmd_kk_compose, "first", "second")
    add(kk, "positive", cmd_kk_positive, "diagram")
    add(kk, "positive-mod-m", cmd_kk_positive_mod_m, "diagram")
    add(kk, "generators", cmd_kk_generators, "block")
    add(kk, "preserves-order", cmd_kk_preserves_order, "diagram")

    lift = sub.add_parser("lift").add_subparsers(dest="action", required=True)
    add(lift, "d0", cmd_lift_d0, "diagram")
    add(lift, "suff", cmd_lift_suff, "diagram")
    add(lift, "decide", cmd_lift_decide, "diagram")
    add(lift, "composed", cmd_lift_composed, "document")
    add(lift, "zero-check", cmd_lift_zero_check, "diagram")

    sp = sub.add_parser("spectra").add_subparsers(dest="action", required=True)
    add(sp, "eig", cmd_spectra_eig, "test_function", "spectrum")
    add(sp, "dist", cmd_spectra_dist, "first", "second")
    add(sp, "kk-equal", cmd_spectra_kk_equal, "first", "second")
    add(sp, "align", cmd_spectra_align, "first", "second", eta={"required": True})
    add(sp, "pair", cmd_spectra_pair, "first", "second", eta={"required": True})
    add(sp, "test-functions", cmd_spectra_test_functions, "block", eta={"required": True})

    ch = sub.add_parser("chart").add_subparsers(dest="action", required=True)
    add(ch, "validate", cmd_chart_validate, "chart")
    add(ch, "fiber", cmd_chart_fiber, "chart", x={"required": True})
    add(ch, "compose", cmd_chart_compose, "first", "second")
    add(ch, "distribute", cmd_chart_distribute, "chart", K={"required": True}, L={"required": True},
        eta={"default": None})
    add(ch, "decompose", cmd_chart_decompose, "chart", K={"required": True}, L={"required": True},
        witness={"default": None})

    add(sub, "verify-paper", cmd_verify_paper)
    return parser


def run(argv=None) -> Report:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return Report("usage", None, {"error": "UsageError", "message": str(exc), "usage": exc.usage}, 2)
    name = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    try:
        return args.func(args)
    except EtkkError as exc:
        details = {"error": type(exc).__name__, "message": str(exc), **exc.details}
        return Report(name, None if exc.input_error else False, details, 2 if exc.input_error else 1)


def main(argv=None) -> int:
    report = run(argv)
    print(report.to_json())
    if report.exit_code == 2:
        print(f"etkk: {report.details.get('message', 'malformed input')}", file=sys.stderr)
    return report.exit_code
