from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etkk.blocks import canonical_circle, canonical_dimension_drop, make_finite_dim_block, make_interval_block
from etkk.errors import DimensionMismatch
from etkk.ktheory import (
    K1Group,
    compute_ktheory,
    hermite_rows,
    k0_contains,
    k0_positive_contains,
    kernel_basis_row,
    minimal_positive_classes,
)


def test_worked_block(A_c):
    kt = compute_ktheory(A_c)
    assert kt.k0_rank == 4
    assert kt.k1 == K1Group(1) and str(kt.k1) == "Z/1"
    assert kt.unit_class == (1, 1, 1, 1, 1)
    assert kt.k0_basis == ((1, 0, 0, 1, 0), (0, 1, 0, 1, 0), (0, 0, 1, -1, 0), (0, 0, 0, 0, 1))


def test_torsion_two():
    A = make_interval_block((1,) * 5, 5, (2, 2, 0, 0, 1), (0, 0, 2, 2, 1))
    assert compute_ktheory(A).k1 == K1Group(2)


def test_circle():
    kt = compute_ktheory(canonical_circle())
    assert kt.k0_rank == 1 and kt.k1.is_free and str(kt.k1) == "Z"


@pytest.mark.parametrize("q", [2, 3, 4])
def test_dimension_drop(q):
    kt = compute_ktheory(canonical_dimension_drop(q))
    assert kt.k1 == K1Group(q)
    assert kt.k0_basis == ((1, 1),)
    assert kt.unit_class == (1, 1)


def test_finite_dim():
    kt = compute_ktheory(make_finite_dim_block((2, 3)))
    assert kt.k0_rank == 2 and kt.k1 == K1Group(1) and kt.unit_class == (2, 3)


def test_membership(A_c):
    assert k0_contains(A_c, (1, 0, 1, 0, 0))
    assert not k0_contains(A_c, (1, 0, 0, 0, 0))
    assert k0_contains(A_c, (0,) * 5)
    assert k0_positive_contains(A_c, (1, 0, 1, 0, 0))
    assert not k0_positive_contains(A_c, (1, -1, 0, 0, 0))
    assert k0_positive_contains(A_c, (0, 0, 0, 0, 1))
    with pytest.raises(DimensionMismatch):
        k0_contains(A_c, (1, 0))


def test_minimal_classes_of_dimension_drop():
    assert minimal_positive_classes(canonical_dimension_drop(3)) == [(1, 1)]


def test_minimal_classes_of_worked_block(A_c):
    classes = minimal_positive_classes(A_c)
    assert (0, 0, 0, 0, 1) in classes
    assert set(classes) == {(1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (0, 1, 1, 0, 0), (0, 1, 0, 1, 0), (0, 0, 0, 0, 1)}


rows = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


def _in_lattice(basis, v):
    """Back-substitution along the echelon pivots of basis."""
    v = list(v)
    for row in basis:
        lead = next(i for i, x in enumerate(row) if x)
        if v[lead] % row[lead]:
            return False
        c = v[lead] // row[lead]
        v = [a - c * b for a, b in zip(v, row)]
    return not any(v)


@settings(max_examples=60, deadline=None)
@given(rows)
def test_kernel_basis_against_box_search(d):
    basis = kernel_basis_row(d)
    p = len(d)
    assert len(basis) == p - (1 if any(d) else 0)
    for b in basis:
        assert sum(x * y for x, y in zip(d, b)) == 0
    # every kernel vector in the box [-3, 3]^p is spanned by the basis
    for v in product(range(-3, 4), repeat=p):
        if sum(x * y for x, y in zip(d, v)) == 0:
            assert _in_lattice(basis, v), v


@given(rows)
def test_hermite_form_shape(d):
    basis = kernel_basis_row(d)
    pivots = []
    for row in basis:
        lead = next(i for i, x in enumerate(row) if x)
        assert row[lead] > 0
        pivots.append(lead)
    assert pivots == sorted(set(pivots))
    assert hermite_rows(basis) == basis


@settings(deadline=None)
@given(rows)
def test_cokernel_order_by_residues(d):
    """The image of the row is gZ: residues mod M hit exactly M / gcd(g, M) classes."""
    g = 0
    for x in d:
        g = gcd(g, x)
    if g == 0:
        return
    M = 2 * g + 7
    image, frontier = {0}, [0]
    while frontier:
        y = frontier.pop()
        for x in d:
            z = (y + x) % M
            if z not in image:
                image.add(z)
                frontier.append(z)
    assert len(image) == M // gcd(g, M)


@st.composite
def minimal_blocks(draw):
    p = draw(st.integers(1, 4))
    k = draw(st.lists(st.integers(1, 3), min_size=p, max_size=p))
    alpha = draw(st.lists(st.integers(0, 3), min_size=p, max_size=p))
    n = sum(a * x for a, x in zip(alpha, k))
    betas = [b for b in product(range(4), repeat=p)
             if sum(x * y for x, y in zip(b, k)) == n and all(a or x for a, x in zip(alpha, b))]
    if n == 0 or not betas:
        return None
    return make_interval_block(k, n, alpha, draw(st.sampled_from(betas)))


@settings(max_examples=80, deadline=None)
@given(minimal_blocks())
def test_k1_order_is_gcd(A):
    if A is None:
        return
    g = 0
    for x in A.diff:
        g = gcd(g, x)
    kt = compute_ktheory(A)
    assert kt.k1.order == (None if g == 0 else g)
    assert k0_contains(A, kt.unit_class)


@settings(max_examples=40, deadline=None)
@given(minimal_blocks())
def test_minimal_classes_generate_the_cone(A):
    if A is None:
        return
    classes = minimal_positive_classes(A)
    for v in product(range(4), repeat=A.p):
        if any(v) and k0_positive_contains(A, v):
            # v minus some minimal class stays in the cone
            assert any(all(x >= y for x, y in zip(v, e)) for e in classes)
