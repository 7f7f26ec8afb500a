"""Lifting KK-classes to homomorphisms.

The row criteria here are sufficient conditions only.  A negative answer
("not_liftable") is given only where an if-and-only-if rule applies: circle
sources and sources in which every summand meets a single endpoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .blocks import Block, canonical_circle, classify, dot
from .errors import HypothesisViolation, NotPositive, PreconditionUnmet, SourceTargetMismatch, WrongKind
from .kkcalc import (
    UNBOUNDED,
    Diagram,
    compose,
    enumerate_positive_reps,
    failing_generators,
    in_M,
    is_positive,
    kills_unit,
    kk_equal,
    positive_mod_M,
    preserves_dl_order,
    row_times,
    zero_diagram,
)
from .ktheory import k0_positive_contains

LIFTABLE = "liftable"
NOT_LIFTABLE = "not_liftable"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class LiftVerdict:
    status: str
    criterion: str
    witness_rows: tuple = ()
    details: dict = field(default_factory=dict, compare=False)
    unital_ok: Optional[bool] = None

    @property
    def liftable(self) -> bool:
        return self.status == LIFTABLE

    def verify(self) -> bool:
        """Re-evaluate the plan: every listed row must be entrywise >= 0."""
        if self.status != LIFTABLE:
            return True
        return all(x >= 0 for row in self.witness_rows for x in row)


def _sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def _scale(c: int, v) -> tuple:
    return tuple(c * a for a in v)


def unital_flag(d: Diagram) -> bool:
    """lambda0 . k <= k' (room to correct to a unital map)."""
    image = tuple(dot(row, d.source.k) for row in d.lambda0)
    return all(x <= y for x, y in zip(image, d.target.k))


def _require_positive_interval(d: Diagram) -> None:
    if not (d.source.is_interval and d.target.is_interval):
        raise WrongKind("lifting criteria need interval blocks on both sides")
    if not is_positive(d):
        raise NotPositive("the diagram is not positive")


def d0_rows(d: Diagram) -> tuple:
    """The l-indexed rows whose nonnegativity implies a lift."""
    A, B = d.source, d.target
    l1 = d.lambda1
    if l1 > 0:
        base = _sub(row_times(B.alpha, d.lambda0), A.alpha)
        step = A.diff
        count = l1
    elif l1 < 0:
        base = _sub(row_times(B.beta, d.lambda0), A.beta)
        step = _scale(-1, A.diff)
        count = -l1
    else:
        return ()
    return tuple(_sub(base, _scale(l, step)) for l in range(count))


def d0_conditions(d: Diagram) -> LiftVerdict:
    _require_positive_interval(d)
    flag = unital_flag(d)
    if d.lambda1 == 0:
        return LiftVerdict(LIFTABLE, "zero_lambda1", (), {}, flag)
    rows = d0_rows(d)
    name = "rows_alpha" if d.lambda1 > 0 else "rows_beta"
    bad = [l for l, row in enumerate(rows) if any(x < 0 for x in row)]
    if bad:
        return LiftVerdict(UNKNOWN, name, rows, {"first_failing_l": bad[0]}, flag)
    return LiftVerdict(LIFTABLE, name, rows, {}, flag)


def suff_rows(d: Diagram) -> tuple:
    A, B = d.source, d.target
    l1 = d.lambda1
    a_img = row_times(B.alpha, d.lambda0)
    b_img = row_times(B.beta, d.lambda0)
    rhs_a, rhs_b = [], []
    for a, b in zip(A.alpha, A.beta):
        ra = (a * l1 if a * l1 >= 0 else 0) - (b * l1 if b * l1 <= 0 else 0)
        rb = -(a * l1 if a * l1 <= 0 else 0) + (b * l1 if b * l1 >= 0 else 0)
        rhs_a.append(ra)
        rhs_b.append(rb)
    return _sub(a_img, rhs_a), _sub(b_img, rhs_b)


def suff_condition(d: Diagram) -> LiftVerdict:
    _require_positive_interval(d)
    rows = suff_rows(d)
    ok = all(x >= 0 for row in rows for x in row)
    return LiftVerdict(LIFTABLE if ok else UNKNOWN, "sufficient_inequalities", rows, {}, unital_flag(d))


def decide_lift(d: Diagram) -> LiftVerdict:
    """Combine the exact rules with the sufficient criteria."""
    A, B = d.source, d.target
    if not (A.is_interval and B.is_interval):
        raise WrongKind("lifting decisions need interval blocks on both sides")
    flags = classify(A)
    rule = "circle_source" if A == canonical_circle() else ("co_source" if flags.is_in_C_O else None)
    found = positive_mod_M(d)
    if found is None:
        if rule:
            return LiftVerdict(NOT_LIFTABLE, rule, (), {"reason": "no positive representative"})
        return LiftVerdict(UNKNOWN, "no_positive_representative", ())
    mu, rep = found
    if rule:
        rows = tuple(tuple(r) for r in rep.lambda0)
        return LiftVerdict(LIFTABLE, rule, rows, {"mu": mu.mu}, unital_flag(rep))
    reps = enumerate_positive_reps(d)
    candidates = [rep] if reps is UNBOUNDED else ([rep] + [r for r in reps if r != rep])
    for cand in candidates:
        for check in (d0_conditions, suff_condition):
            v = check(cand)
            if v.liftable:
                return LiftVerdict(v.status, v.criterion, v.witness_rows, {"representative": cand}, v.unital_ok)
    return LiftVerdict(UNKNOWN, "criteria_inconclusive", (), {"representatives_tried": len(candidates)})


@dataclass(frozen=True)
class FinDimDecomposition:
    """psi = psi_F1 + psi_int + psi_r from A to B, recorded at the K-theory level.

    psi_int_g_vectors are the classes g^i in K0+(B) of the interior pieces,
    each divided by n (the interval size of A).
    """

    source: Block
    target: Block
    psi_int_g_vectors: tuple
    psi_r_diagram: Diagram
    psi_F1_diagram: Optional[Diagram] = None

    @property
    def psi_int_unit(self) -> tuple:
        total = [0] * self.target.p
        for g in self.psi_int_g_vectors:
            total = [t + x for t, x in zip(total, g)]
        return tuple(self.source.n * t for t in total)

    @property
    def psi_r_unit(self) -> tuple:
        return tuple(dot(row, self.source.k) for row in self.psi_r_diagram.lambda0)

    @property
    def psi_F1_unit(self) -> tuple:
        if self.psi_F1_diagram is None:
            return (0,) * self.target.p
        return tuple(dot(row, self.source.k) for row in self.psi_F1_diagram.lambda0)

    def pushed_interior(self, endpoint: int) -> Diagram:
        """zeta: the interior part with its spectrum pushed to an endpoint."""
        A, B = self.source, self.target
        row = A.alpha if endpoint == 0 else A.beta
        l0 = [[0] * A.p for _ in range(B.p)]
        for g in self.psi_int_g_vectors:
            for i in range(B.p):
                for j in range(A.p):
                    l0[i][j] += g[i] * row[j]
        return Diagram(A, B, tuple(tuple(r) for r in l0), 0)


def check_decomposition(dec: FinDimDecomposition) -> None:
    A, B = dec.source, dec.target
    if not (A.is_interval and B.is_interval):
        raise WrongKind("decomposition needs interval blocks")
    for name, dg in (("psi_r", dec.psi_r_diagram), ("psi_F1", dec.psi_F1_diagram)):
        if dg is None:
            continue
        if dg.source != A or dg.target != B:
            raise SourceTargetMismatch(f"{name} diagram does not run from source to target")
        if not is_positive(dg):
            raise HypothesisViolation(f"{name} diagram is not positive", hypothesis=f"{name}_positive")
    if dec.psi_F1_diagram is not None and dec.psi_F1_diagram.lambda1 != 0:
        raise HypothesisViolation("psi_F1 must have lambda1 = 0", hypothesis="psi_F1_finite")
    for g in dec.psi_int_g_vectors:
        if len(g) != B.p or not k0_positive_contains(B, g):
            raise HypothesisViolation("g-vector is not in K0+ of the target", hypothesis="g_vectors")


def composed_existence(dec: FinDimDecomposition, g: Diagram) -> LiftVerdict:
    """Certify that KK(psi) x g lifts, replaying the case analysis on lambda1*eta1."""
    check_decomposition(dec)
    if g.source != dec.target:
        raise SourceTargetMismatch("g must start where psi ends")
    if not g.target.is_interval:
        raise WrongKind("g must end in an interval block")
    A, C = dec.source, g.target
    if any(x < y for x, y in zip(dec.psi_int_unit, dec.psi_r_unit)):
        raise HypothesisViolation(
            "[psi_int(1)] >= [psi_r(1)] fails", hypothesis="unit_order",
            psi_int_unit=dec.psi_int_unit, psi_r_unit=dec.psi_r_unit,
        )
    if not preserves_dl_order(g):
        raise HypothesisViolation(
            "g does not preserve the Dadarlat-Loring order", hypothesis="order_preservation",
            failing=[f.indices for f in failing_generators(g)],
        )
    found = positive_mod_M(g)
    if found is None:  # excluded by the order hypothesis
        raise HypothesisViolation("g has no positive representative", hypothesis="order_preservation")
    lam = found[1]
    eta = dec.psi_r_diagram
    prod = lam.lambda1 * eta.lambda1
    endpoint = 1 if prod < 0 else 0
    zeta = dec.pushed_interior(endpoint)
    psi = zeta + eta
    if dec.psi_F1_diagram is not None:
        psi = psi + dec.psi_F1_diagram
    total = compose(psi, lam)
    details = {
        "lambda1_eta1": prod,
        "endpoint": endpoint,
        "representative": lam,
        "composite": total,
    }
    flag = unital_flag(total)

    if prod == 0:
        rows = tuple(tuple(r) for r in total.lambda0)
        return LiftVerdict(LIFTABLE, "finite_dim_image", rows, details, flag)

    zero_cols = {j for j in range(lam.source.p) if all(row[j] == 0 for row in lam.lambda0)}
    unit = dec.psi_int_unit
    if all(unit[j] == 0 for j in range(len(unit)) if j not in zero_cols):
        rest = compose(zeta + eta, lam)
        details["zero_columns"] = sorted(j + 1 for j in zero_cols)
        details["rest_in_M"] = in_M(rest) is not None
        if not details["rest_in_M"]:
            raise HypothesisViolation("zero-class route failed", hypothesis="order_preservation")
        rows = ()
        if dec.psi_F1_diagram is not None:
            rows = tuple(tuple(r) for r in compose(dec.psi_F1_diagram, lam).lambda0)
        return LiftVerdict(LIFTABLE, "zero_class", rows, details, flag)

    # Internal identity: the eta part alone already satisfies the rows for j in 0..|prod|.
    eta_img = compose(eta, lam)
    if prod > 0:
        img = row_times(C.alpha, eta_img.lambda0)
        step = A.diff
    else:
        img = row_times(C.beta, eta_img.lambda0)
        step = _scale(-1, A.diff)
    identity_rows = tuple(_sub(img, _scale(j, step)) for j in range(abs(prod) + 1))
    if any(x < 0 for row in identity_rows for x in row):
        raise HypothesisViolation("eta rows fail; inputs are inconsistent", hypothesis="eta_rows")
    verdict = d0_conditions(total)
    if not verdict.liftable:
        raise HypothesisViolation("composite rows fail", hypothesis="order_preservation", rows=verdict.witness_rows)
    details["eta_rows"] = identity_rows
    name = "rows_alpha" if prod > 0 else "rows_beta"
    return LiftVerdict(LIFTABLE, name, verdict.witness_rows, details, flag)


def zero_kk_check(g: Diagram) -> bool:
    """Order-preserving diagrams that kill the unit are zero in KK."""
    if not kills_unit(g):
        raise PreconditionUnmet("g does not kill the unit", precondition="kills_unit")
    if not preserves_dl_order(g):
        raise PreconditionUnmet("g does not preserve the Dadarlat-Loring order", precondition="order")
    return kk_equal(g, zero_diagram(g.source, g.target))
