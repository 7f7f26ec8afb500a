"""Diagram calculus for KK(A, B) between minimal blocks.

A diagram is a pair (lambda0, lambda1): lambda0 is a p' x p integer matrix
K0(F1) -> K0(F1'), lambda1 an integer K1(SF2) -> K1(SF2'), subject to

    (alpha' - beta') lambda0 = lambda1 (alpha - beta).

KK(A, B) is the group of diagrams modulo the subgroup M(A, B) of diagrams
lambda_mu = (mu (alpha - beta), (alpha' - beta') mu), mu in Z^{p'}.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .blocks import Block, _dimension_drop, canonical_circle, dot
from .errors import (
    BadParameter,
    DimensionMismatch,
    MalformedDocument,
    NotCommutative,
    NotInK0,
    SourceTargetMismatch,
)
from .ktheory import k0_contains

BOX_LIMIT = 2_000_000


def _zeros(rows: int, cols: int) -> tuple:
    return tuple((0,) * cols for _ in range(rows))


def matmul(a, b) -> tuple:
    if not a:
        return ()
    inner = len(b)
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols))
        for i in range(len(a))
    )


def row_times(row, mat) -> tuple:
    """1 x p' row times a p' x p matrix."""
    if not mat:
        return ()
    return tuple(sum(row[i] * mat[i][j] for i in range(len(mat))) for j in range(len(mat[0])))


@dataclass(frozen=True)
class Diagram:
    source: Block
    target: Block
    lambda0: tuple
    lambda1: int = 0

    def _same_ends(self, other: "Diagram") -> None:
        if self.source != other.source or self.target != other.target:
            raise SourceTargetMismatch("diagrams have different source or target")

    def __add__(self, other: "Diagram") -> "Diagram":
        self._same_ends(other)
        l0 = tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.lambda0, other.lambda0)
        )
        return Diagram(self.source, self.target, l0, self.lambda1 + other.lambda1)

    def __neg__(self) -> "Diagram":
        return Diagram(
            self.source, self.target, tuple(tuple(-x for x in r) for r in self.lambda0), -self.lambda1
        )

    def __sub__(self, other: "Diagram") -> "Diagram":
        return self + (-other)

    def scaled(self, c: int) -> "Diagram":
        return Diagram(
            self.source, self.target, tuple(tuple(c * x for x in r) for r in self.lambda0), c * self.lambda1
        )

    @property
    def lambda0_is_zero(self) -> bool:
        return all(x == 0 for r in self.lambda0 for x in r)

    @property
    def is_zero(self) -> bool:
        return self.lambda0_is_zero and self.lambda1 == 0


@dataclass(frozen=True)
class MWitness:
    mu: tuple


@dataclass(frozen=True)
class Generator:
    source: Block
    diagram: Diagram
    kind: str  # "dimension_drop" or "circle"
    indices: tuple  # original summand indices (1-based) the generator touches
    w: Optional[int] = None


class _Unbounded:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Unbounded"


UNBOUNDED = _Unbounded()


def _carries_lambda1(d_source: Block, d_target: Block) -> bool:
    return d_source.is_interval and d_target.is_interval


def commutativity_defect(A: Block, B: Block, lambda0, lambda1: int) -> Optional[int]:
    """Index (0-based) of the first column breaking commutativity, else None."""
    p = A.p
    left = row_times(B.diff, lambda0) if B.is_interval else (0,) * p
    if A.is_interval and B.is_interval:
        right = tuple(lambda1 * x for x in A.diff)
    else:
        right = (0,) * p
    for j in range(p):
        if left[j] != right[j]:
            return j
    return None


def diagram_validate(A: Block, B: Block, lambda0, lambda1=0) -> Diagram:
    try:
        l0 = tuple(tuple(int(x) for x in row) for row in lambda0)
        l1 = int(lambda1)
    except (TypeError, ValueError) as exc:
        raise MalformedDocument("lambda0 must be an integer matrix, lambda1 an integer") from exc
    if len(l0) != B.p or any(len(r) != A.p for r in l0):
        raise DimensionMismatch(f"lambda0 must be {B.p} x {A.p}")
    if not _carries_lambda1(A, B):
        l1 = 0  # K1(SF2) or K1(SF2') vanishes
    bad = commutativity_defect(A, B, l0, l1)
    if bad is not None:
        raise NotCommutative(f"commutativity fails in column {bad + 1}", column=bad + 1)
    return Diagram(A, B, l0, l1)


def zero_diagram(A: Block, B: Block) -> Diagram:
    return Diagram(A, B, _zeros(B.p, A.p), 0)


def identity_diagram(A: Block) -> Diagram:
    p = A.p
    l0 = tuple(tuple(1 if i == j else 0 for j in range(p)) for i in range(p))
    return Diagram(A, A, l0, 1 if A.is_interval else 0)


def lambda_mu(A: Block, B: Block, mu) -> Diagram:
    """The element of M(A, B) determined by mu in Z^{p'}."""
    if not A.is_interval:
        return zero_diagram(A, B)
    d = A.diff
    l0 = tuple(tuple(m * x for x in d) for m in mu)
    l1 = dot(B.diff, mu) if B.is_interval else 0
    return Diagram(A, B, l0, l1)


def bezout(values) -> tuple:
    """(g, coeffs) with sum(c*v) = g = gcd(values) >= 0.

    Coefficients stay on the earliest entries when g already divides the rest.
    """
    g, coeffs = 0, []
    for v in values:
        if g and v % g == 0:
            coeffs.append(0)
            continue
        x0, x1, a, b = 1, 0, g, v
        y0, y1 = 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coeffs = [c * x0 for c in coeffs]
        coeffs.append(y0)
        g = a
    return g, tuple(coeffs)


def in_M(d: Diagram) -> Optional[MWitness]:
    A, B = d.source, d.target
    pp = B.p
    if not A.is_interval:
        return MWitness((0,) * pp) if d.is_zero else None
    diff = A.diff
    if any(diff):
        j0 = next(j for j, x in enumerate(diff) if x)
        mu = []
        for row in d.lambda0:
            if row[j0] % diff[j0]:
                return None
            m = row[j0] // diff[j0]
            if any(r != m * x for r, x in zip(row, diff)):
                return None
            mu.append(m)
        if B.is_interval and dot(B.diff, mu) != d.lambda1:
            return None
        return MWitness(tuple(mu))
    if not d.lambda0_is_zero:
        return None
    if not B.is_interval or d.lambda1 == 0:
        return MWitness((0,) * pp)
    g, coeffs = bezout(B.diff)
    if g == 0 or d.lambda1 % g:
        return None
    return MWitness(tuple(c * (d.lambda1 // g) for c in coeffs))


def kk_equal(d1: Diagram, d2: Diagram) -> bool:
    d1._same_ends(d2)
    return in_M(d1 - d2) is not None


def compose(d: Diagram, e: Diagram) -> Diagram:
    """Product of d: A -> B and e: B -> C, a diagram A -> C."""
    if d.target != e.source:
        raise SourceTargetMismatch("target of the first diagram is not the source of the second")
    l0 = matmul(e.lambda0, d.lambda0)
    l1 = e.lambda1 * d.lambda1 if _carries_lambda1(d.source, e.target) else 0
    return Diagram(d.source, e.target, l0, l1)


def is_positive(d: Diagram) -> bool:
    if d.is_zero:
        return True
    return all(x >= 0 for r in d.lambda0 for x in r) and not d.lambda0_is_zero


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def row_interval(row, diff) -> Optional[tuple]:
    """Integer range (lo, hi) of m with row + m*diff >= 0; None bounds are infinite.

    Returns None when no m works.
    """
    lo, hi = None, None
    for r, x in zip(row, diff):
        if x > 0:
            b = _ceil_div(-r, x)
            lo = b if lo is None else max(lo, b)
        elif x < 0:
            b = r // (-x)
            hi = b if hi is None else min(hi, b)
        elif r < 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def apply_mu(d: Diagram, mu) -> Diagram:
    return d + lambda_mu(d.source, d.target, mu)


def positive_mod_M(d: Diagram) -> Optional[tuple]:
    """A witness mu and the positive representative d + lambda_mu, or None."""
    w = in_M(d)
    if w is not None:
        neg = MWitness(tuple(-m for m in w.mu))
        return neg, apply_mu(d, neg.mu)
    A, B = d.source, d.target
    zero_mu = (0,) * B.p
    if is_positive(d):
        return MWitness(zero_mu), d
    if not A.is_interval or not any(A.diff):
        # lambda_mu leaves lambda0 untouched here.
        return None
    diff = A.diff
    mu = []
    for row in d.lambda0:
        box = row_interval(row, diff)
        if box is None:
            return None
        lo, hi = box
        m = 0
        if lo is not None and m < lo:
            m = lo
        if hi is not None and m > hi:
            m = hi
        mu.append(m)
    rep = apply_mu(d, mu)
    # A zero lambda0 with alpha != beta forces lambda1 = 0 by commutativity,
    # so rep is either the zero element or has lambda0 >= 0 and nonzero.
    return MWitness(tuple(mu)), rep


def enumerate_positive_reps(d: Diagram):
    """All positive diagrams in the class of d, or UNBOUNDED."""
    A = d.source
    if not A.is_interval:
        return [d] if is_positive(d) else []
    diff = A.diff
    boxes = []
    for row in d.lambda0:
        box = row_interval(row, diff)
        if box is None:
            return []
        boxes.append(box)
    if not (any(x > 0 for x in diff) and any(x < 0 for x in diff)):
        return UNBOUNDED
    size = 1
    for lo, hi in boxes:
        size *= hi - lo + 1
    if size > BOX_LIMIT:
        raise BadParameter(f"mu box has {size} points, above the enumeration limit")
    reps = []
    for mu in product(*(range(lo, hi + 1) for lo, hi in boxes)):
        rep = apply_mu(d, mu)
        if is_positive(rep):
            reps.append(rep)
    return reps


def rearrangement(A: Block) -> tuple:
    """Order of summands putting alpha - beta as (+a..., -b..., 0...).

    Returns (positive indices, negative indices, zero indices), 0-based.
    """
    A.require_interval("rearrangement")
    diff = A.diff
    pos = tuple(j for j, x in enumerate(diff) if x > 0)
    neg = tuple(j for j, x in enumerate(diff) if x < 0)
    zer = tuple(j for j, x in enumerate(diff) if x == 0)
    return pos, neg, zer


def dl_generators(A: Block) -> list:
    """Diagrams whose positivity after composition tests the Dadarlat-Loring order."""
    A.require_interval("dl_generators")
    pos, neg, zer = rearrangement(A)
    diff = A.diff
    p = A.p
    gens = []
    for x in pos:
        for y in neg:
            a, b = diff[x], -diff[y]
            w = a * b
            S = _dimension_drop(w)
            l0 = [[0, 0] for _ in range(p)]
            l0[x][0] = b
            l0[y][1] = a
            D = diagram_validate(S, A, l0, 1)
            gens.append(Generator(S, D, "dimension_drop", (x + 1, y + 1), w))
    circle = canonical_circle()
    for i in zer:
        l0 = [[1 if j == i else 0] for j in range(p)]
        D = diagram_validate(circle, A, l0, 1)
        gens.append(Generator(circle, D, "circle", (i + 1,)))
    return gens


def preserves_dl_order(g: Diagram) -> bool:
    A = g.source
    if not A.is_interval:
        return all(x >= 0 for r in g.lambda0 for x in r)
    return all(positive_mod_M(compose(f.diagram, g)) is not None for f in dl_generators(A))


def failing_generators(g: Diagram) -> list:
    if not g.source.is_interval:
        return []
    return [f for f in dl_generators(g.source) if positive_mod_M(compose(f.diagram, g)) is None]


def apply_to_k0(d: Diagram, v) -> tuple:
    if len(v) != d.source.p:
        raise DimensionMismatch(f"vector has length {len(v)}, source has p = {d.source.p}")
    if not k0_contains(d.source, v):
        raise NotInK0("vector is not in K0 of the source")
    return tuple(dot(row, v) for row in d.lambda0)


def kills_unit(d: Diagram) -> bool:
    return all(x == 0 for x in apply_to_k0(d, d.source.unit))


def canonical_representative(d: Diagram) -> Diagram:
    """Least-mu positive representative when the box is finite, else d itself."""
    reps = enumerate_positive_reps(d)
    if reps is UNBOUNDED or not reps:
        return d
    return reps[0]

