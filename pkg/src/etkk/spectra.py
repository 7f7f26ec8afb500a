"""Spectra of point evaluations, test functions and spectral alignment.

A point evaluation of a block A into a matrix algebra is determined up to
unitary equivalence by its spectrum: multiplicities t_j of the base points
theta_j together with a multiset of interior points of (0, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

import networkx as nx

from .blocks import Block, n_constant
from .errors import (
    BadGrid,
    BlockMismatch,
    CardinalityMismatch,
    DensityViolation,
    InteriorMismatch,
    MalformedDocument,
    NotKKEqual,
)

DEFAULT_BUDGET = 4096


@dataclass(frozen=True)
class Spectrum:
    block: Block
    base: tuple
    interior: tuple  # sorted Fractions in (0, 1)

    def __post_init__(self):
        if len(self.base) != self.block.p:
            raise MalformedDocument("base vector length must equal p")
        if any(t < 0 for t in self.base):
            raise MalformedDocument("base multiplicities must be nonnegative")
        if any(not (0 < y < 1) for y in self.interior):
            raise MalformedDocument("interior points must lie strictly inside (0, 1)")
        if self.interior and not self.block.is_interval:
            raise MalformedDocument("a finite-dimensional block has no interior points")
        if list(self.interior) != sorted(self.interior):
            object.__setattr__(self, "interior", tuple(sorted(self.interior)))

    @property
    def dim(self) -> int:
        n = self.block.n or 0
        return sum(t * k for t, k in zip(self.base, self.block.k)) + n * len(self.interior)


def make_spectrum(block: Block, base, interior=()) -> Spectrum:
    return Spectrum(block, tuple(int(t) for t in base), tuple(sorted(Fraction(y) for y in interior)))


@dataclass(frozen=True)
class TestFunction:
    """Type 1 carries (j, r, s) with j 1-based; type 2 carries X.

    X is a tuple of closed intervals (lo, hi); a point is an interval with lo == hi.
    """

    __test__ = False  # not a pytest class

    kind: str
    eta: Fraction
    j: int = 0
    r: int = 0
    s: int = 0
    X: tuple = ()

    @property
    def m(self) -> int:
        return int(1 / self.eta)


def grid_size(eta) -> int:
    eta = Fraction(eta)
    if eta <= 0 or eta.numerator != 1:
        raise BadGrid(f"eta must be 1/m for a positive integer m, got {eta}")
    return eta.denominator


def type1(A: Block, eta, j: int, r: int, s: int) -> TestFunction:
    m = grid_size(eta)
    if not (1 <= j <= A.p):
        raise BadGrid(f"index j={j} out of range 1..{A.p}")
    if not (0 <= r and r + 2 <= s <= m):
        raise BadGrid(f"need 0 <= r, r + 2 <= s <= m; got r={r}, s={s}, m={m}")
    return TestFunction("type1", Fraction(eta), j, r, s)


def type2(eta, X) -> TestFunction:
    eta = Fraction(eta)
    m = grid_size(eta)
    parts = []
    for lo, hi in X:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi or lo < eta or hi > 1 - eta:
            raise BadGrid(f"component [{lo}, {hi}] is not inside [eta, 1 - eta]")
        if (lo * m).denominator != 1 or (hi * m).denominator != 1:
            raise BadGrid(f"component [{lo}, {hi}] is not on the grid")
        parts.append((lo, hi))
    if not parts:
        raise BadGrid("type 2 set must be nonempty")
    return TestFunction("type2", eta, X=tuple(sorted(parts)))


def _type2_sets(m: int) -> Iterator[tuple]:
    """Nonempty grid-closed subsets of [1/m, 1 - 1/m], canonically encoded."""
    pts = list(range(1, m))  # grid indices
    segs = list(range(1, m - 1))  # segment i joins points i and i + 1
    for nseg in range(len(segs) + 1):
        for chosen in combinations(segs, nseg):
            forced = set(chosen) | {i + 1 for i in chosen}
            free = [x for x in pts if x not in forced]
            for nfree in range(len(free) + 1):
                for extra in combinations(free, nfree):
                    present = forced | set(extra)
                    if not present:
                        continue
                    yield _encode(sorted(present), set(chosen), m)


def _encode(points, segs, m: int) -> tuple:
    out = []
    start = prev = points[0]
    for x in points[1:]:
        if prev in segs and x == prev + 1:
            prev = x
            continue
        out.append((Fraction(start, m), Fraction(prev, m)))
        start = prev = x
    out.append((Fraction(start, m), Fraction(prev, m)))
    return tuple(out)


def iter_test_functions(A: Block, eta) -> Iterator[TestFunction]:
    m = grid_size(eta)
    eta = Fraction(1, m)
    for j in range(1, A.p + 1):
        for r in range(0, m - 1):
            for s in range(r + 2, m + 1):
                yield TestFunction("type1", eta, j, r, s)
    for X in _type2_sets(m):
        yield TestFunction("type2", eta, X=X)


def test_functions(A: Block, eta, budget: Optional[int] = DEFAULT_BUDGET) -> list:
    """H(eta): every type 1 function and type 2 sets up to ``budget`` of them."""
    m = grid_size(eta)
    if m < 2:
        raise BadGrid("need m >= 2")
    out, seen2 = [], 0
    for h in iter_test_functions(A, eta):
        if h.kind == "type2":
            if budget is not None and seen2 >= budget:
                break
            seen2 += 1
        out.append(h)
    return out


def in_H(h: TestFunction, A: Block) -> bool:
    """Exact membership of a test function in H(eta) for A, independent of any cap."""
    m = grid_size(h.eta)
    if h.kind == "type1":
        return 1 <= h.j <= A.p and 0 <= h.r and h.r + 2 <= h.s <= m
    try:
        type2(h.eta, h.X)
    except BadGrid:
        return False
    return True


def _dist_to_interval(y: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    if y < lo:
        return lo - y
    if y > hi:
        return y - hi
    return Fraction(0)


def _ramp(y: Fraction, lo: Fraction, hi: Fraction, eta: Fraction) -> Fraction:
    return max(Fraction(0), (eta - _dist_to_interval(y, lo, hi)) / eta)


def eig(h: TestFunction, S: Spectrum) -> tuple:
    """Sorted eigenvalue multiset of h evaluated on the point evaluation S."""
    A = S.block
    eta = h.eta
    vals = []
    if h.kind == "type1":
        if not (1 <= h.j <= A.p) or not A.is_interval:
            raise BlockMismatch("test function does not belong to this block")
        j = h.j - 1
        for i, (t, k) in enumerate(zip(S.base, A.k)):
            for _ in range(t):
                if i == j:
                    vals.append(Fraction(1))
                    vals.extend([Fraction(0)] * (k - 1))
                else:
                    vals.extend([Fraction(0)] * k)
        left_hi = h.r * eta
        right_lo = h.s * eta
        for y in S.interior:
            block_vals = []
            if y <= (h.r + 1) * eta:
                block_vals += [_ramp(y, Fraction(0), left_hi, eta)] * A.alpha[j]
            if y >= (h.s - 1) * eta:
                block_vals += [_ramp(y, right_lo, Fraction(1), eta)] * A.beta[j]
            block_vals += [Fraction(0)] * (A.n - len(block_vals))
            vals.extend(block_vals)
    else:
        for t, k in zip(S.base, A.k):
            vals.extend([Fraction(0)] * (t * k))
        for y in S.interior:
            dist = min(_dist_to_interval(y, lo, hi) for lo, hi in h.X)
            vals.append(max(Fraction(0), 1 - dist / eta))
            vals.extend([Fraction(0)] * (A.n - 1))
    return tuple(sorted(vals))


def eig_dist(E1, E2) -> Fraction:
    if len(E1) != len(E2):
        raise CardinalityMismatch(f"multisets have sizes {len(E1)} and {len(E2)}")
    if not E1:
        return Fraction(0)
    return max(abs(Fraction(a) - Fraction(b)) for a, b in zip(sorted(E1), sorted(E2)))


def _same_block(S1: Spectrum, S2: Spectrum) -> Block:
    if S1.block != S2.block:
        raise BlockMismatch("spectra belong to different blocks")
    return S1.block


def kk_equal_points(A: Block, S1: Spectrum, S2: Spectrum) -> Optional[int]:
    """Integer c with t - s = c (alpha - beta), if any."""
    if S1.block != A or S2.block != A:
        raise BlockMismatch("spectra do not belong to the given block")
    if len(S1.interior) != len(S2.interior):
        raise CardinalityMismatch("spectra have different numbers of interior points")
    d = [t - s for t, s in zip(S1.base, S2.base)]
    diff = A.diff
    if diff is None or not any(diff):
        return 0 if not any(d) else None
    j0 = next(j for j, x in enumerate(diff) if x)
    if d[j0] % diff[j0]:
        return None
    c = d[j0] // diff[j0]
    return c if all(x == c * y for x, y in zip(d, diff)) else None


def push_to_base(S: Spectrum, endpoint: int) -> Spectrum:
    A = S.block
    A.require_interval("push_to_base")
    row = A.alpha if endpoint == 0 else A.beta
    m = len(S.interior)
    return Spectrum(A, tuple(t + m * r for t, r in zip(S.base, row)), ())


@dataclass(frozen=True)
class Alignment:
    S1: Spectrum
    S2: Spectrum
    pairing: tuple
    maxdist: Fraction
    c: int
    moved1: tuple
    moved2: tuple


def density_windows(A: Block, interior, eta, c: int) -> Optional[tuple]:
    """First closed window [r eta, (r + 2N) eta] holding fewer than |c| points."""
    m = grid_size(eta)
    eta = Fraction(1, m)
    N = n_constant(A)
    for r in range(0, m - 2 * N + 1):
        lo, hi = r * eta, (r + 2 * N) * eta
        count = sum(1 for y in interior if lo <= y <= hi)
        if count < abs(c):
            return lo, hi, count
    return None


def align_spectra(A: Block, S1: Spectrum, S2: Spectrum, eta) -> Alignment:
    A.require_interval("align_spectra")
    if S1.block != A or S2.block != A:
        raise BlockMismatch("spectra do not belong to the given block")
    if S1.interior != S2.interior:
        raise InteriorMismatch("interior multisets must coincide")
    m = grid_size(eta)
    eta = Fraction(1, m)
    N = n_constant(A)
    if m < 2 * N:
        raise BadGrid(f"need m >= 2 N_A = {2 * N}, got m = {m}")
    c = kk_equal_points(A, S1, S2)
    if c is None:
        raise NotKKEqual("base vectors do not differ by a multiple of alpha - beta")
    bad = density_windows(A, S1.interior, eta, c)
    if bad is not None:
        lo, hi, count = bad
        raise DensityViolation(
            f"window [{lo}, {hi}] holds {count} interior points, fewer than |c| = {abs(c)}",
            window=(lo, hi), count=count, c=c,
        )
    pts = list(S1.interior)
    a = abs(c)
    if c > 0:
        # S1 sends its largest points to 1, S2 its smallest to 0.
        moved1, rest1 = tuple(pts[len(pts) - a:]), pts[:len(pts) - a]
        moved2, rest2 = tuple(pts[:a]), pts[a:]
        base1 = tuple(t + a * b for t, b in zip(S1.base, A.beta))
        base2 = tuple(s + a * x for s, x in zip(S2.base, A.alpha))
    elif c < 0:
        moved1, rest1 = tuple(pts[:a]), pts[a:]
        moved2, rest2 = tuple(pts[len(pts) - a:]), pts[:len(pts) - a]
        base1 = tuple(t + a * x for t, x in zip(S1.base, A.alpha))
        base2 = tuple(s + a * b for s, b in zip(S2.base, A.beta))
    else:
        moved1 = moved2 = ()
        rest1, rest2 = pts, pts
        base1, base2 = S1.base, S2.base
    T1 = Spectrum(A, base1, tuple(rest1))
    T2 = Spectrum(A, base2, tuple(rest2))
    pairing = tuple(zip(T1.interior, T2.interior))
    maxdist = max((abs(x - y) for x, y in pairing), default=Fraction(0))
    assert T1.base == T2.base
    return Alignment(T1, T2, pairing, maxdist, c, moved1, moved2)


def pair_cores(S1: Spectrum, S2: Spectrum, eta) -> Optional[tuple]:
    """Largest pairing within 2 eta covering every interior point in [eta, 1 - eta].

    Returns (X, Y, pairs) with X, Y sorted and pairs sorted by the X value.
    """
    _same_block(S1, S2)
    eta = Fraction(eta)
    reach = 2 * eta
    P1, P2 = list(S1.interior), list(S2.interior)
    core1 = [eta <= y <= 1 - eta for y in P1]
    core2 = [eta <= y <= 1 - eta for y in P2]
    if not P1 or not P2:
        return ((), (), ()) if not (any(core1) or any(core2)) else None
    big = len(P1) + len(P2) + 1
    G = nx.Graph()
    for i, x in enumerate(P1):
        for j, y in enumerate(P2):
            if abs(x - y) <= reach:
                w = 1 + big * (core1[i] + core2[j])
                G.add_edge(("a", i), ("b", j), weight=w)
    matching = nx.max_weight_matching(G)
    pairs = []
    for u, v in matching:
        if u[0] == "b":
            u, v = v, u
        pairs.append((u[1], v[1]))
    used1 = {i for i, _ in pairs}
    used2 = {j for _, j in pairs}
    if any(c and i not in used1 for i, c in enumerate(core1)):
        return None
    if any(c and j not in used2 for j, c in enumerate(core2)):
        return None
    pairs = sorted((P1[i], P2[j]) for i, j in pairs)
    X = tuple(sorted(x for x, _ in pairs))
    Y = tuple(sorted(y for _, y in pairs))
    return X, Y, tuple(pairs)


def count_formula_check(A: Block, S: Spectrum, j0: int, r: int, eta) -> tuple:
    """Count of eigenvalues equal to 1 for h_{j0}^r, directly and by formula."""
    m = grid_size(eta)
    eta = Fraction(1, m)
    h = type1(A, eta, j0, r, r + 2)
    lhs = sum(1 for v in eig(h, S) if v == 1)
    j = j0 - 1
    left = sum(1 for y in S.interior if 0 < y <= r * eta)
    right = sum(1 for y in S.interior if (r + 2) * eta <= y < 1)
    rhs = S.base[j] + A.alpha[j] * left + A.beta[j] * right
    return lhs, rhs
