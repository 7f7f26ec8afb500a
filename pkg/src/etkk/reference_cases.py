"""Built-in worked examples, re-derived from embedded constants on every run.

Each case returns a list of named checks with the computed values.  Every
constant in REFERENCE_DATA feeds at least one check, so corrupting any of
them makes the suite fail.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .blocks import canonical_circle, canonical_dimension_drop, make_finite_dim_block, validate_block
from .errors import EtkkError
from .kkcalc import (
    apply_to_k0,
    compose,
    diagram_validate,
    dl_generators,
    enumerate_positive_reps,
    in_M,
    is_positive,
    kk_equal,
    positive_mod_M,
    preserves_dl_order,
)
from .ktheory import compute_ktheory
from .lifting import NOT_LIFTABLE, UNKNOWN, d0_conditions, decide_lift, suff_condition

REFERENCE_DATA = {
    "counterexample_1": {
        "A": {"k": [1, 1, 1, 1, 1], "n": 3, "alpha": [1, 1, 0, 0, 1], "beta": [0, 0, 1, 1, 1]},
        "B": {"k": [1, 1, 1, 1], "n": 2, "alpha": [1, 1, 0, 0], "beta": [0, 0, 1, 1]},
        "lambda0": [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
        "lambda1": 1,
        "epsilon_lambda0": [[0], [0], [0], [0], [1]],
        "epsilon_lambda1": 1,
        "e": [0, 0, 0, 0, 1],
        "mu": [1, 0, 0, 0],
    },
    "counterexample_2": {
        "A": {"k": [1, 1, 1, 1, 1], "n": 5, "alpha": [2, 2, 0, 0, 1], "beta": [0, 0, 2, 2, 1]},
        "B": {"k": [1, 1, 1, 1], "n": 4, "alpha": [2, 2, 0, 0], "beta": [0, 0, 2, 2]},
        "delta_lambda0": [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
        "delta_lambda1": 1,
        "zeta_lambda0": [[0], [0], [0], [0], [1]],
        "zeta_lambda1": 1,
        "k1_orders": [2, 2],
    },
    "dimension_drop_rigidity": {
        "q": [2, 3, 4, 5, 6, 7],
        "k1_orders": [2, 3, 4, 5, 6, 7],
        "eval_first": [1, 0],
        "eval_second": [0, 1],
    },
    "stable_homotopy": {
        "A": {"k": [1, 1], "n": 2, "alpha": [2, 0], "beta": [1, 1]},
        "delta1": [[1, 0]],
        "delta2": [[0, 1]],
        "mu": [1],
    },
    "generators": {
        "dimension_drop_count": 4,
        "circle_count": 1,
        "weights": [1, 1, 1, 1],
        "circle_index": 5,
        "I2_q": 2,
        "I2_w": 4,
        "I2_lambda0": [[2, 0], [0, 2]],
    },
}


@dataclass
class CaseResult:
    name: str
    checks: list = field(default_factory=list)
    error: str = ""

    @property
    def passed(self) -> bool:
        return not self.error and all(ok for _, ok, _ in self.checks)

    def check(self, label: str, ok: bool, value=None) -> None:
        self.checks.append((label, bool(ok), value))


def _interval(raw: dict):
    return validate_block(dict(raw, kind="interval"))


def case_counterexample_1(everything: dict, res: CaseResult) -> None:
    data = everything["counterexample_1"]
    A, B = _interval(data["A"]), _interval(data["B"])
    lam = diagram_validate(A, B, data["lambda0"], data["lambda1"])
    res.check("diagram commutes", True)
    res.check("lambda is positive", is_positive(lam))
    res.check("lambda preserves the order", preserves_dl_order(lam))
    e = tuple(data["e"])
    res.check("lambda kills e", apply_to_k0(lam, e) == (0,) * B.p, apply_to_k0(lam, e))
    reps = enumerate_positive_reps(lam)
    res.check("lambda is the unique positive representative", reps == [lam], len(reps) if isinstance(reps, list) else str(reps))
    v0, v1 = d0_conditions(lam), suff_condition(lam)
    res.check("row criterion is inconclusive", v0.status == UNKNOWN, v0.status)
    res.check("inequality criterion is inconclusive", v1.status == UNKNOWN, v1.status)
    eps = diagram_validate(canonical_circle(), A, data["epsilon_lambda0"], data["epsilon_lambda1"])
    res.check("epsilon sends the unit to e", apply_to_k0(eps, (1,)) == e, apply_to_k0(eps, (1,)))
    w = in_M(compose(eps, lam))
    res.check("epsilon x lambda lies in M", w is not None and w.mu == tuple(data["mu"]), w.mu if w else None)


def case_counterexample_2(everything: dict, res: CaseResult) -> None:
    data = everything["counterexample_2"]
    A, B = _interval(data["A"]), _interval(data["B"])
    orders = (compute_ktheory(A).k1.order, compute_ktheory(B).k1.order)
    res.check("K1 orders", orders == tuple(data["k1_orders"]), orders)
    delta = diagram_validate(A, B, data["delta_lambda0"], data["delta_lambda1"])
    zeta = diagram_validate(canonical_circle(), A, data["zeta_lambda0"], data["zeta_lambda1"])
    circles = [g.diagram for g in dl_generators(A) if g.kind == "circle"]
    res.check("zeta is the circle generator", circles == [zeta])
    zd = compose(zeta, delta)
    res.check("zeta x delta is (0, 1)", zd.lambda0_is_zero and zd.lambda1 == 1, zd.lambda1)
    res.check("zeta x delta is not in M", in_M(zd) is None)
    res.check("zeta x delta is not positive mod M", positive_mod_M(zd) is None)
    verdict = decide_lift(zd)
    res.check("zeta x delta does not lift", verdict.status == NOT_LIFTABLE and verdict.criterion == "circle_source",
              verdict.status)
    res.check("delta does not preserve the order", not preserves_dl_order(delta))


def case_dimension_drop_rigidity(everything: dict, res: CaseResult) -> None:
    data = everything["dimension_drop_rigidity"]
    point = make_finite_dim_block((1,))
    for q, order in zip(data["q"], data["k1_orders"]):
        A = canonical_dimension_drop(q)
        res.check(f"K1 order for q={q}", compute_ktheory(A).k1.order == order, compute_ktheory(A).k1.order)
        d1 = diagram_validate(A, point, [data["eval_first"]])
        d2 = diagram_validate(A, point, [data["eval_second"]])
        res.check(f"evaluations differ in KK for q={q}", not kk_equal(d1, d2))
        diff = d1 - d2
        res.check(f"difference kills the unit for q={q}", apply_to_k0(diff, A.unit) == (0,), apply_to_k0(diff, A.unit))


def case_stable_homotopy(everything: dict, res: CaseResult) -> None:
    data = everything["stable_homotopy"]
    A = _interval(data["A"])
    point = make_finite_dim_block((1,))
    d1 = diagram_validate(A, point, data["delta1"])
    d2 = diagram_validate(A, point, data["delta2"])
    res.check("delta1 and delta2 agree in KK", kk_equal(d1, d2))
    w = in_M(d1 - d2)
    res.check("witness mu", w is not None and w.mu == tuple(data["mu"]), w.mu if w else None)


def case_generators(everything: dict, res: CaseResult) -> None:
    data = everything["generators"]
    A = _interval(everything["counterexample_1"]["A"])
    gens = dl_generators(A)
    drops = [g for g in gens if g.kind == "dimension_drop"]
    circles = [g for g in gens if g.kind == "circle"]
    res.check("dimension-drop generators", len(drops) == data["dimension_drop_count"], len(drops))
    res.check("circle generators", len(circles) == data["circle_count"], len(circles))
    res.check("weights", [g.w for g in drops] == data["weights"], [g.w for g in drops])
    res.check("circle index", [g.indices[0] for g in circles] == [data["circle_index"]])
    res.check("generators are positive", all(is_positive(g.diagram) for g in gens))
    I2 = canonical_dimension_drop(data["I2_q"])
    g2 = dl_generators(I2)
    res.check("one generator for the dimension-drop block", len(g2) == 1, len(g2))
    res.check("its weight", g2[0].w == data["I2_w"], g2[0].w)
    res.check("its lambda0", g2[0].diagram.lambda0 == tuple(map(tuple, data["I2_lambda0"])), g2[0].diagram.lambda0)


CASES = (
    ("counterexample_1", case_counterexample_1),
    ("counterexample_2", case_counterexample_2),
    ("dimension_drop_rigidity", case_dimension_drop_rigidity),
    ("stable_homotopy", case_stable_homotopy),
    ("generators", case_generators),
)

def verify_paper(data: dict = None) -> list:
    """Run all built-in cases; returns a list of CaseResult."""
    data = copy.deepcopy(REFERENCE_DATA if data is None else data)
    results = []
    for name, fn in CASES:
        res = CaseResult(name)
        try:
            fn(data, res)
        except (EtkkError, KeyError, TypeError, IndexError, ValueError) as exc:
            res.error = f"{type(exc).__name__}: {exc}"
        results.append(res)
    return results
