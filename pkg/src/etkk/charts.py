"""Piecewise-linear spectral charts of unital homomorphisms between blocks.

A chart for phi: A -> B records, for every point of Sp(B), the spectrum of
the composed point evaluation.  Over the interval of B the interior spectrum
moves along piecewise-linear paths; a path sitting at 0 or 1 is read as the
base points alpha or beta of A.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from .blocks import Block, dot
from .errors import (
    BadParameter,
    BoundaryMismatch,
    CompositionCheckFailed,
    DistributionNotFound,
    FiberDimMismatch,
    GridMismatch,
    InequalityFailed,
    MalformedDocument,
    NotInK0Plus,
    SourceTargetMismatch,
    WitnessSpacingMismatch,
)
from .ktheory import k0_positive_contains, minimal_positive_classes
from .spectra import Spectrum, grid_size

ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class PLPath:
    breakpoints: tuple  # ((x, y), ...) with x strictly increasing from 0 to 1

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.breakpoints)
        if len(pts) < 2:
            raise MalformedDocument("a path needs breakpoints at x = 0 and x = 1")
        xs = [x for x, _ in pts]
        if xs[0] != 0 or xs[-1] != 1 or any(a >= b for a, b in zip(xs, xs[1:])):
            raise MalformedDocument("path x values must increase strictly from 0 to 1")
        if any(not (0 <= y <= 1) for _, y in pts):
            raise MalformedDocument("path values must lie in [0, 1]")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def xs(self) -> list:
        return [x for x, _ in self.breakpoints]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        pts = self.breakpoints
        i = bisect_right(self.xs, x) - 1
        if i >= len(pts) - 1:
            return pts[-1][1]
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def segments(self):
        return zip(self.breakpoints, self.breakpoints[1:])


def constant_path(y) -> PLPath:
    return PLPath(((ZERO, Fraction(y)), (ONE, Fraction(y))))


def _simplify(pts: list) -> tuple:
    out = [pts[0]]
    for nxt in pts[1:]:
        out.append(nxt)
        while len(out) >= 3:
            (x0, y0), (x1, y1), (x2, y2) = out[-3:]
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
                del out[-2]
            else:
                break
    return tuple(out)


def compose_paths(p: PLPath, q: PLPath) -> PLPath:
    """x -> p(q(x)), again piecewise linear."""
    xs = set(q.xs)
    inner = p.xs
    for (x0, y0), (x1, y1) in q.segments():
        if y0 == y1:
            continue
        lo, hi = min(y0, y1), max(y0, y1)
        for u in inner[bisect_right(inner, lo):bisect_left(inner, hi)]:
            xs.add(x0 + (u - y0) * (x1 - x0) / (y1 - y0))
    pts = [(x, p(q(x))) for x in sorted(xs)]
    return PLPath(_simplify(pts))


@dataclass(frozen=True)
class SpectralChart:
    source: Block
    target: Block
    base_fibers: tuple
    t: tuple
    paths: tuple


def fiber(c: SpectralChart, x) -> Spectrum:
    A = c.source
    base = list(c.t)
    interior = []
    for path in c.paths:
        y = path(x)
        if y == 0:
            base = [b + a for b, a in zip(base, A.alpha)]
        elif y == 1:
            base = [b + a for b, a in zip(base, A.beta)]
        else:
            interior.append(y)
    return Spectrum(A, tuple(base), tuple(sorted(interior)))


def union(spectra, block: Block, weights=None) -> Spectrum:
    base = [0] * block.p
    interior = []
    weights = weights if weights is not None else [1] * len(spectra)
    for S, w in zip(spectra, weights):
        base = [b + w * t for b, t in zip(base, S.base)]
        interior.extend(list(S.interior) * w)
    return Spectrum(block, tuple(base), tuple(sorted(interior)))


def breakpoint_xs(c: SpectralChart) -> list:
    xs = {ZERO, ONE}
    for path in c.paths:
        xs.update(path.xs)
    return sorted(xs)


def chart_validate(c: SpectralChart) -> SpectralChart:
    A, B = c.source, c.target
    A.require_interval("a chart source")
    B.require_interval("a chart target")
    if len(c.base_fibers) != B.p or len(c.t) != A.p:
        raise MalformedDocument("chart needs p' base fibers and a length-p t vector")
    for i, S in enumerate(c.base_fibers):
        if S.block != A:
            raise MalformedDocument(f"base fiber {i + 1} is over a different block")
        if S.dim != B.k[i]:
            raise FiberDimMismatch(
                f"base fiber {i + 1} has dimension {S.dim}, expected {B.k[i]}",
                index=i + 1, got=S.dim, expected=B.k[i],
            )
    xs = breakpoint_xs(c)
    samples = xs + [(a + b) / 2 for a, b in zip(xs, xs[1:])]
    for x in samples:
        d = fiber(c, x).dim
        if d != B.n:
            raise FiberDimMismatch(f"fiber at x = {x} has dimension {d}, expected {B.n}", x=x, got=d, expected=B.n)
    for end, row in ((0, B.alpha), (1, B.beta)):
        got = fiber(c, end)
        want = union(c.base_fibers, A, row)
        if got != want:
            raise BoundaryMismatch(
                f"fiber at x = {end} does not match the base fibers",
                endpoint=end, got=got, expected=want,
            )
    return c


def make_chart(source: Block, target: Block, base_fibers, t, paths) -> SpectralChart:
    c = SpectralChart(source, target, tuple(base_fibers), tuple(int(v) for v in t), tuple(paths))
    return chart_validate(c)


def pushforward(c1: SpectralChart, S: Spectrum) -> Spectrum:
    """Spectrum over A of the point evaluation S of B precomposed with c1."""
    parts, weights = [], []
    for S_j, w in zip(c1.base_fibers, S.base):
        parts.append(S_j)
        weights.append(w)
    for y in S.interior:
        parts.append(fiber(c1, y))
        weights.append(1)
    return union(parts, c1.source, weights)


def compose_charts(c1: SpectralChart, c2: SpectralChart) -> SpectralChart:
    """Chart of the composite A -> B -> C."""
    if c1.target != c2.source:
        raise SourceTargetMismatch("first chart's target is not the second chart's source")
    A = c1.source
    base_fibers = tuple(pushforward(c1, S) for S in c2.base_fibers)
    t = [len(c2.paths) * v for v in c1.t]
    paths = []
    for S_j, mult in zip(c1.base_fibers, c2.t):
        t = [a + mult * b for a, b in zip(t, S_j.base)]
        for y in S_j.interior:
            paths.extend([constant_path(y)] * mult)
    for q in c2.paths:
        for p in c1.paths:
            paths.append(compose_paths(p, q))
    return SpectralChart(A, c2.target, base_fibers, tuple(t), tuple(paths))


def fiber_identity_holds(c1: SpectralChart, c2: SpectralChart, comp: SpectralChart, y) -> bool:
    return fiber(comp, y) == pushforward(c1, fiber(c2, y))


# ---- pigeonhole interval --------------------------------------------------

def _open_count(values, lo, hi) -> int:
    return sum(1 for v in values if lo < v < hi)


def ccut_interval(E, L: int, lo=ZERO, hi=ONE) -> tuple:
    """Nested pigeonhole: one sub-interval per set, each (L+1) times thinner."""
    lo, hi = Fraction(lo), Fraction(hi)
    for values in E:
        width = (hi - lo) / (L + 1)
        here = _open_count(values, lo, hi)
        for k in range(L + 1):
            a, b = lo + k * width, lo + (k + 1) * width
            if (L + 1) * _open_count(values, a, b) <= here:
                lo, hi = a, b
                break
        else:  # pragma: no cover - pigeonhole
            raise AssertionError("pigeonhole failed")
    return lo, hi


def ccut(E, L: int) -> tuple:
    """Integers (c, d), d = c + 1, on the grid of step 1/(L+1)^s."""
    E = [[Fraction(v) for v in values] for values in E]
    lo, _ = ccut_interval(E, L)
    scale = (L + 1) ** len(E)
    c = int(lo * scale)
    return c, c + 1


# ---- distributions ----------------------------------------------------------

@dataclass(frozen=True)
class DistributionWitness:
    eta: Fraction
    K: int
    L: int
    intervals: tuple  # ((a_1, b_1), ..., (a_K, b_K))
    method: str = "search"


def _candidates(m: int, K: int, r: int) -> range:
    lo = ceil(Fraction((r - 1) * m, K))
    hi = floor(Fraction(r * m, K)) - 1
    return range(lo, hi + 1)


def sweep_points(c: SpectralChart, thresholds) -> list:
    """x values where window counts may change, plus one point between each pair."""
    ts = sorted(set(thresholds))
    xs = set(breakpoint_xs(c))
    for path in c.paths:
        for (x0, y0), (x1, y1) in path.segments():
            if y0 == y1:
                continue
            lo, hi = min(y0, y1), max(y0, y1)
            for v in ts[bisect_left(ts, lo):bisect_right(ts, hi)]:
                xs.add(x0 + (v - y0) * (x1 - x0) / (y1 - y0))
    xs = sorted(xs)
    return xs + [(a + b) / 2 for a, b in zip(xs, xs[1:])]


def _cell_counts(values, m: int) -> Counter:
    cells = Counter()
    for y in values:
        z = y * m
        if z.denominator != 1:
            cells[floor(z)] += 1
    return cells


def _surviving(c: SpectralChart, eta, K: int, L: int, fixed=None) -> list:
    """For each r, the cells a meeting both counting conditions.

    ``fixed`` restricts the search to one given cell per r.
    """
    m = grid_size(eta)
    if m % K:
        raise GridMismatch(f"grid 1/{m} does not refine the 1/{K} partition")
    alive = []
    for r in range(1, K + 1):
        cand = list(_candidates(m, K, r))
        if not cand:
            raise GridMismatch(f"no grid cell fits inside window {r}")
        if fixed is not None:
            cand = [fixed[r - 1]] if fixed[r - 1] in cand else []
        alive.append(set(cand))
    if fixed is None:
        thresholds = [Fraction(k, m) for k in range(m + 1)]
    else:
        # Counts only change where a path crosses a cell edge or window edge.
        thresholds = [Fraction(r, K) for r in range(K + 1)]
        thresholds += [Fraction(a + e, m) for a in fixed for e in (0, 1)]
    multisets = [S.interior for S in c.base_fibers]
    multisets += [fiber(c, x).interior for x in sweep_points(c, thresholds)]
    for values in multisets:
        cells = _cell_counts(values, m)
        for r in range(1, K + 1):
            if not alive[r - 1]:
                continue
            window = _open_count(values, Fraction(r - 1, K), Fraction(r, K))
            alive[r - 1] = {a for a in alive[r - 1] if (L + 1) * cells[a] <= window}
    return alive


def has_distribution(c: SpectralChart, eta, K: int, L: int) -> Optional[DistributionWitness]:
    eta = Fraction(eta)
    alive = _surviving(c, eta, K, L)
    if not all(alive):
        return None
    intervals = tuple((min(s), min(s) + 1) for s in alive)
    return DistributionWitness(eta, K, L, intervals, "search")


def verify_witness(c: SpectralChart, w: DistributionWitness) -> bool:
    if len(w.intervals) != w.K or any(b - a != 1 for a, b in w.intervals):
        return False
    try:
        alive = _surviving(c, w.eta, w.K, w.L, fixed=[a for a, _ in w.intervals])
    except GridMismatch:
        return False
    return all(alive)


def find_distribution(c: SpectralChart, K: int, L: int) -> tuple:
    """(delta, witness), following the two-stage pigeonhole placement."""
    if K < 1 or L < 1:
        raise BadParameter("K and L must be positive")
    pp = c.target.p
    eta = Fraction(1, 8 * K * (L + 1))
    delta = eta / (L + 1) ** pp
    start = fiber(c, 0).interior
    cells = []
    for r in range(1, K + 1):
        g0, g1 = Fraction(r - 1, K), Fraction(r, K)
        lo, hi = g0 + 2 * eta, g1 - 2 * eta
        u, v = ccut_interval([[y for y in start if lo < y < hi]], L, lo, hi)
        E = [[y for y in S.interior if g0 < y < g1] for S in c.base_fibers]
        u2, v2 = ccut_interval(E, L, u + 2 * eta, v - 2 * eta)
        a = ceil(u2 / delta)
        assert (a + 1) * delta <= v2
        cells.append(a)
    w = DistributionWitness(delta, K, L, tuple((a, a + 1) for a in cells), "replay")
    if verify_witness(c, w):
        return delta, w
    found = has_distribution(c, delta, K, L)
    if found is None:
        raise DistributionNotFound(
            "no (delta, K, L)-distribution on this chart", delta=delta, K=K, L=L
        )
    return delta, found


def distribution_composes(c1: SpectralChart, c2: SpectralChart, w: DistributionWitness) -> DistributionWitness:
    comp = compose_charts(c1, c2)
    if not verify_witness(comp, w):
        raise CompositionCheckFailed("witness intervals fail on the composite chart")
    return DistributionWitness(w.eta, w.K, w.L, w.intervals, "composed")


# ---- K0 bookkeeping -----------------------------------------------------------

def k0_image(c: SpectralChart, g) -> tuple:
    A = c.source
    g = tuple(int(x) for x in g)
    if len(g) != A.p or not k0_positive_contains(A, g):
        raise NotInK0Plus("class is not in the positive cone of K0(A)")
    ag = dot(A.alpha, g)
    return tuple(dot(S.base, g) + len(S.interior) * ag for S in c.base_fibers)


@dataclass(frozen=True)
class Check:
    name: str
    lhs: tuple
    rhs: tuple

    @property
    def margin(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lhs, self.rhs))

    @property
    def holds(self) -> bool:
        return all(x >= 0 for x in self.margin)


@dataclass(frozen=True)
class DecompositionCertificate:
    eta: Fraction
    V: tuple
    W: tuple
    P: tuple  # P_1 .. P_{K-1}
    Q: tuple  # Q_1 .. Q_p
    R: tuple
    q: tuple
    nu_unit: tuple
    rho_unit: tuple
    unit: tuple
    checks: tuple

    @property
    def P_sum(self) -> tuple:
        """Sum of P_r over r = 2 .. K-2."""
        return _vsum(self.P[1:-1], len(self.unit)) if len(self.P) > 2 else (0,) * len(self.unit)

    @property
    def Q_sum(self) -> tuple:
        return _vsum(self.Q, len(self.unit))


def _vsum(vectors, size: int) -> tuple:
    out = [0] * size
    for v in vectors:
        out = [a + b for a, b in zip(out, v)]
    return tuple(out)


def _closed_count(values, lo, hi) -> int:
    return sum(1 for v in values if lo <= v <= hi)


def decompose(c: SpectralChart, K: int, L: int, w: DistributionWitness) -> DecompositionCertificate:
    """K0 bookkeeping splitting the chart into a small corner plus large finite parts."""
    A, B = c.source, c.target
    if K < 3:
        raise BadParameter("decomposition needs K >= 3")
    if w.K != K or w.L != L or len(w.intervals) != K or any(b - a != 1 for a, b in w.intervals):
        raise WitnessSpacingMismatch("witness does not match (K, L) or has cells wider than one step")
    eta = w.eta / 8
    a = [8 * x for x, _ in w.intervals]
    b = [8 * y for _, y in w.intervals]
    # a[r - 1], b[r - 1] hold a_r, b_r.
    V = [(ZERO, a[1] * eta + 2 * eta)]
    V += [(b[r - 1] * eta, a[r] * eta) for r in range(1, K)]
    V.append((b[K - 2] * eta - 2 * eta, ONE))
    Wn = tuple((max(ZERO, lo - 2 * eta), min(ONE, hi + 2 * eta)) for lo, hi in V)
    n = A.n
    inter = [S.interior for S in c.base_fibers]
    P = tuple(
        tuple(n * _closed_count(I, *V[r]) for I in inter) for r in range(1, K)
    )
    Q = tuple(
        tuple(
            A.k[j] * S.base[j]
            + A.k[j] * A.alpha[j] * _closed_count(S.interior, *V[0])
            + A.k[j] * A.beta[j] * _closed_count(S.interior, *V[K])
            for S in c.base_fibers
        )
        for j in range(A.p)
    )
    pp = B.p
    P_sum = _vsum(P[1:K - 2], pp)
    R = _vsum([P[0], P[K - 2]], pp)
    Q_sum = _vsum(Q, pp)
    unit = B.k
    q = tuple(u - x - y for u, x, y in zip(unit, P_sum, Q_sum))
    nu_unit = tuple(x + y for x, y in zip(P_sum, R))
    small = tuple(
        n * sum(_open_count(I, a[r] * eta, b[r] * eta) for r in range(K)) for I in inter
    )
    zeros = (0,) * pp
    checks = [
        Check("q >= 0", zeros, q),
        Check("L*q <= nu_unit", tuple(L * x for x in q), nu_unit),
        Check("R <= Q", R, Q_sum),
        Check("q <= n*#(a_r, b_r)", q, small),
    ]
    for cl in minimal_positive_classes(A):
        nu_e = tuple(len([y for r in range(1, K) for y in I if V[r][0] <= y <= V[r][1]]) * dot(A.alpha, cl)
                     for I in inter)
        tag = ",".join(str(x) for x in cl)
        checks.append(Check(f"nu_unit <= n*nu(e) for e=({tag})", nu_unit, tuple(n * x for x in nu_e)))
        checks.append(Check(f"L*q <= n*nu(e) for e=({tag})", tuple(L * x for x in q), tuple(n * x for x in nu_e)))
    for ch in checks:
        if not ch.holds:
            raise InequalityFailed(f"inequality '{ch.name}' fails", name=ch.name, lhs=ch.lhs, rhs=ch.rhs)
    return DecompositionCertificate(
        eta, tuple(V), Wn, P, Q, R, q, nu_unit, q, unit, tuple(checks)
    )
