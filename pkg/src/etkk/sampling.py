"""Seeded random blocks, diagrams and charts for spot checks and property tests."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .blocks import Block, dot, make_interval_block
from .charts import PLPath, SpectralChart, constant_path, fiber, make_chart
from .kkcalc import Diagram, bezout, diagram_validate
from .ktheory import kernel_basis_row
from .spectra import Spectrum


def random_block(rng: random.Random, max_p: int = 4, max_entry: int = 3, max_k: int = 3) -> Block:
    """A minimal interval block with p <= max_p and alpha, beta entries <= max_entry."""
    while True:
        p = rng.randint(1, max_p)
        k = tuple(rng.randint(1, max_k) for _ in range(p))
        alpha = tuple(rng.randint(0, max_entry) for _ in range(p))
        n = dot(alpha, k)
        if n == 0:
            continue
        betas = [b for b in product(range(max_entry + 1), repeat=p)
                 if dot(b, k) == n and all(a or x for a, x in zip(alpha, b))]
        if betas:
            return make_interval_block(k, n, alpha, rng.choice(betas))


def _column_solutions(rng: random.Random, d_target, rhs: int, box: int):
    """Random x with d_target . x = rhs, or None when no integer solution exists."""
    g, coeffs = bezout(d_target)
    if g == 0:
        if rhs:
            return None
        base = [0] * len(d_target)
        return [x + rng.randint(-box, box) for x in base]
    if rhs % g:
        return None
    x = [c * (rhs // g) for c in coeffs]
    for v in kernel_basis_row(d_target):
        t = rng.randint(-box, box)
        x = [a + t * b for a, b in zip(x, v)]
    return x


def random_diagram(rng: random.Random, A: Block, B: Block, box: int = 2):
    """A random commuting diagram A -> B, or None if the drawn lambda1 admits none."""
    lambda1 = rng.randint(-box, box) if A.is_interval and B.is_interval else 0
    cols = []
    for j in range(A.p):
        if B.is_interval:
            rhs = lambda1 * A.diff[j] if A.is_interval else 0
            x = _column_solutions(rng, B.diff, rhs, box)
            if x is None:
                return None
        else:
            x = [rng.randint(-box, box) for _ in range(B.p)]
        cols.append(x)
    lambda0 = [[cols[j][i] for j in range(A.p)] for i in range(B.p)]
    return diagram_validate(A, B, lambda0, lambda1)


def random_box_diagram(rng: random.Random, A: Block, B: Block, box: int = 2) -> Diagram:
    """Like random_diagram but retries until a commuting diagram is found."""
    while True:
        d = random_diagram(rng, A, B, box)
        if d is not None:
            return d


def random_path(rng: random.Random, steps: int = 8, levels: int = 16, wiggle=None):
    """A PL path with breakpoints on a 1/steps grid and values on a 1/levels grid.

    With ``wiggle`` set, values stay within that many grid steps of a random level.
    """
    inner = sorted(rng.sample(range(1, steps), rng.randint(0, min(2, steps - 1))))
    xs = [0] + inner + [steps]
    level = rng.randint(0, levels)
    pts = []
    for x in xs:
        if wiggle is None:
            roll = rng.random()
            y = 0 if roll < 0.15 else levels if roll < 0.3 else rng.randint(1, levels - 1)
        else:
            y = min(levels, max(0, level + rng.randint(-wiggle, wiggle)))
        pts.append((Fraction(x, steps), Fraction(y, levels)))
    return PLPath(tuple(pts))


def _split_atoms(rng: random.Random, S: Spectrum, max_groups: int) -> list:
    """Randomly partition the points of S into nonempty sub-spectra."""
    A = S.block
    atoms = [("base", j) for j, m in enumerate(S.base) for _ in range(m)]
    atoms += [("interior", y) for y in S.interior]
    rng.shuffle(atoms)
    g = rng.randint(1, min(max_groups, len(atoms)))
    cut = sorted(rng.sample(range(1, len(atoms)), g - 1)) if g > 1 else []
    groups = []
    for lo, hi in zip([0] + cut, cut + [len(atoms)]):
        base = [0] * A.p
        interior = []
        for tag, v in atoms[lo:hi]:
            if tag == "base":
                base[v] += 1
            else:
                interior.append(v)
        groups.append(Spectrum(A, tuple(base), tuple(sorted(interior))))
    return groups


def random_chart(rng: random.Random, A: Block, max_paths: int = 3, max_groups: int = 2,
                 levels: int = 16, wiggle=None, finite_range: bool = False) -> SpectralChart:
    """A valid chart out of A, with a target built to match it.

    The target has one summand per group of points of the fiber at 0 (mapped
    into the left endpoint) and per group of the fiber at 1 (right endpoint).
    With ``finite_range`` every path is constant inside (0, 1) and t = 0.
    """
    count = rng.randint(1, max_paths)
    if finite_range:
        t = (0,) * A.p
        paths = tuple(constant_path(Fraction(rng.randint(1, levels - 1), levels)) for _ in range(count))
    else:
        t = tuple(rng.randint(0, 1) for _ in range(A.p))
        paths = tuple(random_path(rng, levels=levels, wiggle=wiggle) for _ in range(count))
    probe = SpectralChart(A, A, (), t, paths)
    left = _split_atoms(rng, fiber(probe, 0), max_groups)
    right = _split_atoms(rng, fiber(probe, 1), max_groups)
    fibers = left + right
    k = tuple(S.dim for S in fibers)
    alpha = tuple([1] * len(left) + [0] * len(right))
    beta = tuple([0] * len(left) + [1] * len(right))
    B = make_interval_block(k, dot(alpha, k), alpha, beta)
    return make_chart(A, B, fibers, t, paths)
