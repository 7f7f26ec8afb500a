"""K0, K1 and the positive cone of a block from its six-term sequence.

With one interval summand the boundary map is the single row alpha - beta,
so K0 = ker(alpha - beta) and K1 = Z / image(alpha - beta).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Optional

from .blocks import Block, dot
from .errors import DimensionMismatch


@dataclass(frozen=True)
class K1Group:
    order: Optional[int]  # None means the free group Z

    @property
    def is_free(self) -> bool:
        return self.order is None

    def __str__(self) -> str:
        return "Z" if self.order is None else f"Z/{self.order}"


@dataclass(frozen=True)
class KTheoryData:
    k0_basis: tuple
    k0_rank: int
    k1: K1Group
    unit_class: tuple


def row_gcd(row) -> int:
    g = 0
    for x in row:
        g = gcd(g, x)
    return g


def hermite_rows(vectors) -> list:
    """Row-style Hermite normal form over Z (positive pivots, reduced above).

    Returns the nonzero rows; they span the same lattice as ``vectors``.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    width = len(rows[0])
    top = 0
    for col in range(width):
        if top == len(rows):
            break
        # Euclid on column entries below `top`.
        while True:
            live = [i for i in range(top, len(rows)) if rows[i][col] != 0]
            if not live:
                break
            piv = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[piv] = rows[piv], rows[top]
            done = True
            for i in range(top + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[top][col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[top])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[top][col] == 0:
            continue
        if rows[top][col] < 0:
            rows[top] = [-x for x in rows[top]]
        for i in range(top):
            q = rows[i][col] // rows[top][col]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[top])]
        top += 1
    return [tuple(r) for r in rows[:top]]


def kernel_basis_row(d) -> list:
    """Lattice basis of {v in Z^p : d.v = 0} for a single integer row d."""
    p = len(d)
    # Column operations on d tracked in U (columns of U are images of e_j).
    cols = [[1 if i == j else 0 for i in range(p)] for j in range(p)]
    vals = list(d)
    while True:
        live = [j for j in range(p) if vals[j] != 0]
        if len(live) <= 1:
            break
        piv = min(live, key=lambda j: abs(vals[j]))
        for j in live:
            if j != piv:
                q = vals[j] // vals[piv]
                vals[j] -= q * vals[piv]
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[piv])]
    kernel = [tuple(cols[j]) for j in range(p) if vals[j] == 0]
    return hermite_rows(kernel)


def compute_ktheory(A: Block) -> KTheoryData:
    p = A.p
    if not A.is_interval:
        basis = tuple(tuple(1 if i == j else 0 for i in range(p)) for j in range(p))
        return KTheoryData(basis, p, K1Group(1), A.k)
    d = A.diff
    basis = tuple(kernel_basis_row(d))
    g = row_gcd(d)
    k1 = K1Group(None) if g == 0 else K1Group(g)
    return KTheoryData(basis, len(basis), k1, A.k)


def _check_len(A: Block, v) -> None:
    if len(v) != A.p:
        raise DimensionMismatch(f"vector has length {len(v)}, block has p = {A.p}")


def k0_contains(A: Block, v) -> bool:
    _check_len(A, v)
    if not A.is_interval:
        return True
    return dot(A.diff, v) == 0


def k0_positive_contains(A: Block, v) -> bool:
    return k0_contains(A, v) and all(x >= 0 for x in v)


CLASS_BOX_LIMIT = 1_000_000


def minimal_positive_classes(A: Block) -> list:
    """Minimal nonzero elements of K0+(A) (its Hilbert basis), by box search.

    Every minimal element has entries at most max|alpha_j - beta_j|, so the
    box [0, that bound]^p suffices.
    """
    p = A.p
    if not A.is_interval:
        return [tuple(1 if i == j else 0 for i in range(p)) for j in range(p)]
    d = A.diff
    bound = max(1, max(abs(x) for x in d))
    if (bound + 1) ** p > CLASS_BOX_LIMIT:
        raise DimensionMismatch("block too large for the minimal-class search")
    members = [v for v in product(range(bound + 1), repeat=p) if any(v) and dot(d, v) == 0]
    members.sort(key=sum)
    minimal = []
    for v in members:
        if not any(all(x <= y for x, y in zip(u, v)) for u in minimal):
            minimal.append(v)
    return sorted(minimal)
