import random
from itertools import product

import pytest
from hypothesis import given, settings

from etkk.blocks import canonical_circle, make_interval_block
from etkk.errors import DimensionMismatch, NotCommutative, NotInK0, SourceTargetMismatch
from etkk.kkcalc import (
    UNBOUNDED,
    apply_mu,
    apply_to_k0,
    bezout,
    canonical_representative,
    compose,
    diagram_validate,
    dl_generators,
    enumerate_positive_reps,
    failing_generators,
    identity_diagram,
    in_M,
    is_positive,
    kills_unit,
    kk_equal,
    lambda_mu,
    positive_mod_M,
    preserves_dl_order,
    row_interval,
    zero_diagram,
)
from etkk.sampling import random_block, random_box_diagram
from strategies import diagram_chains, diagrams, seeds


@pytest.fixture
def torsion_pair():
    A = make_interval_block((1,) * 5, 5, (2, 2, 0, 0, 1), (0, 0, 2, 2, 1))
    B = make_interval_block((1,) * 4, 4, (2, 2, 0, 0), (0, 0, 2, 2))
    return A, B


# ---- worked examples ---------------------------------------------------------------

def test_validate_examples(A_c, B_c, lam):
    assert lam.lambda1 == 1
    assert identity_diagram(A_c) == diagram_validate(A_c, A_c, identity_diagram(A_c).lambda0, 1)
    with pytest.raises(NotCommutative) as err:
        diagram_validate(A_c, B_c, lam.lambda0, 2)
    assert err.value.details["column"] == 1
    with pytest.raises(DimensionMismatch):
        diagram_validate(A_c, B_c, [[1, 0]], 1)


def test_finite_dim_side_drops_lambda1(I2, point):
    d = diagram_validate(I2, point, [[1, 0]], 5)
    assert d.lambda1 == 0


def test_dimension_drop_point_evaluations_differ(point):
    for q in range(2, 8):
        A = make_interval_block((1, 1), q, (q, 0), (0, q))
        d1 = diagram_validate(A, point, [[1, 0]])
        d2 = diagram_validate(A, point, [[0, 1]])
        assert in_M(d1 - d2) is None
        assert not kk_equal(d1, d2)
        assert apply_to_k0(d1 - d2, (1, 1)) == (0,)
        assert kills_unit(d1 - d2)


def test_stable_homotopy_witness(point):
    A = make_interval_block((1, 1), 2, (2, 0), (1, 1))
    d1 = diagram_validate(A, point, [[1, 0]])
    d2 = diagram_validate(A, point, [[0, 1]])
    assert in_M(d1 - d2).mu == (1,)
    assert kk_equal(d1, d2)


def test_zero_diagram_in_M(A_c, B_c):
    assert in_M(zero_diagram(A_c, B_c)).mu == (0, 0, 0, 0)
    assert is_positive(zero_diagram(A_c, B_c))


def test_remark_composition(A_c, B_c, lam, circle):
    eps = diagram_validate(circle, A_c, [[0], [0], [0], [0], [1]], 1)
    prod = compose(eps, lam)
    assert prod.lambda0_is_zero and prod.lambda1 == 1
    assert in_M(prod).mu == (1, 0, 0, 0)
    assert compose(lam, identity_diagram(B_c)) == lam
    assert compose(identity_diagram(A_c), lam) == lam
    with pytest.raises(SourceTargetMismatch):
        compose(lam, lam)


def test_positivity_examples(lam, torsion_pair, circle):
    A, B = torsion_pair
    assert is_positive(lam)
    zeta = diagram_validate(circle, A, [[0], [0], [0], [0], [1]], 1)
    delta = diagram_validate(A, B, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]], 1)
    zd = compose(zeta, delta)
    assert zd.lambda0_is_zero and zd.lambda1 == 1
    assert not is_positive(zd)
    assert in_M(zd) is None
    assert positive_mod_M(zd) is None
    assert not preserves_dl_order(delta)
    assert [f.kind for f in failing_generators(delta)] == ["circle"]


def test_positive_mod_M_examples(lam, A_c, B_c):
    mu, rep = positive_mod_M(lam)
    assert mu.mu == (0, 0, 0, 0) and rep == lam
    m = lambda_mu(A_c, B_c, (1, -2, 0, 3))
    mu, rep = positive_mod_M(m)
    assert rep.is_zero


def test_enumerate_examples(lam, A_c, B_c, circle):
    assert enumerate_positive_reps(lam) == [lam]
    assert zero_diagram(A_c, B_c) in enumerate_positive_reps(zero_diagram(A_c, B_c))
    d = diagram_validate(circle, B_c, [[1], [0], [1], [0]], 0)
    assert enumerate_positive_reps(d) is UNBOUNDED
    assert canonical_representative(lam) == lam


def test_generators(A_c, I2, circle):
    gens = dl_generators(A_c)
    assert [g.kind for g in gens] == ["dimension_drop"] * 4 + ["circle"]
    assert [g.w for g in gens[:4]] == [1, 1, 1, 1]
    assert gens[4].indices == (5,)
    assert all(is_positive(g.diagram) for g in gens)
    (g,) = dl_generators(I2)
    assert g.w == 4 and g.diagram.lambda0 == ((2, 0), (0, 2))
    (c,) = dl_generators(circle)
    assert c.kind == "circle"


def test_order_examples(lam, A_c):
    assert preserves_dl_order(lam)
    assert preserves_dl_order(identity_diagram(A_c))


def test_k0_maps(lam, A_c, B_c):
    assert apply_to_k0(lam, (0, 0, 0, 0, 1)) == (0, 0, 0, 0)
    assert apply_to_k0(lam, (0,) * 5) == (0,) * 4
    assert apply_to_k0(identity_diagram(A_c), A_c.unit) == A_c.unit
    assert not kills_unit(lam)
    assert kills_unit(zero_diagram(A_c, B_c))
    with pytest.raises(NotInK0):
        apply_to_k0(lam, (1, 0, 0, 0, 0))


def test_bezout_keeps_early_coefficients():
    assert bezout((1, 1, -1, -1)) == (1, (1, 0, 0, 0))
    assert bezout((0, 0)) == (0, (0, 0))
    g, cs = bezout((6, 10, 15))
    assert g == 1 and 6 * cs[0] + 10 * cs[1] + 15 * cs[2] == 1


def test_row_interval():
    assert row_interval((1, 2), (1, -1)) == (-1, 2)
    assert row_interval((-1, 0), (0, 1)) is None
    assert row_interval((0, 0), (0, 0)) == (None, None)


# ---- brute-force oracles -----------------------------------------------------------

def _mu_table(A, B, box):
    return {lambda_mu(A, B, mu): mu for mu in product(range(-box, box + 1), repeat=B.p)}


def test_in_M_against_mu_search():
    rng = random.Random(11)
    for _ in range(40):
        A = random_block(rng, max_p=3)
        B = random_block(rng, max_p=2)
        table = _mu_table(A, B, 20)
        samples = [random_box_diagram(rng, A, B) for _ in range(5)]
        samples += [lambda_mu(A, B, [rng.randint(-5, 5) for _ in range(B.p)]) for _ in range(3)]
        for d in samples:
            w = in_M(d)
            if w is not None:
                assert lambda_mu(A, B, w.mu) == d
            if d in table:
                assert w is not None


def test_positive_mod_M_against_mu_search():
    rng = random.Random(12)
    for _ in range(60):
        A = random_block(rng, max_p=3)
        B = random_block(rng, max_p=2)
        d = random_box_diagram(rng, A, B)
        found = positive_mod_M(d)
        brute = any(is_positive(apply_mu(d, mu)) for mu in product(range(-8, 9), repeat=B.p))
        if brute:
            assert found is not None
        if found is not None:
            mu, rep = found
            assert rep == apply_mu(d, mu.mu) and is_positive(rep) and kk_equal(rep, d)


def test_enumeration_against_mu_search():
    rng = random.Random(13)
    checked = 0
    while checked < 30:
        A = random_block(rng, max_p=3)
        if not (any(x > 0 for x in A.diff) and any(x < 0 for x in A.diff)):
            continue
        B = random_block(rng, max_p=2)
        d = random_box_diagram(rng, A, B)
        reps = enumerate_positive_reps(d)
        brute = {apply_mu(d, mu) for mu in product(range(-12, 13), repeat=B.p)}
        brute = {r for r in brute if is_positive(r)}
        assert set(reps) == brute and len(reps) == len(brute)
        checked += 1


# ---- algebraic properties --------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(seeds)
def test_M_is_a_subgroup(seed):
    rng = random.Random(seed)
    A, B = random_block(rng), random_block(rng)
    m1 = lambda_mu(A, B, [rng.randint(-4, 4) for _ in range(B.p)])
    m2 = lambda_mu(A, B, [rng.randint(-4, 4) for _ in range(B.p)])
    assert in_M(m1 + m2) is not None
    assert in_M(-m1) is not None
    assert in_M(m1 - m2) is not None


@settings(max_examples=60, deadline=None)
@given(diagram_chains())
def test_composition_is_associative(chain):
    d, e, f = chain
    assert compose(compose(d, e), f) == compose(d, compose(e, f))


@settings(max_examples=60, deadline=None)
@given(diagram_chains())
def test_products_are_diagrams(chain):
    d, e, _ = chain
    p = compose(d, e)
    assert diagram_validate(p.source, p.target, p.lambda0, p.lambda1) == p


@settings(max_examples=60, deadline=None)
@given(diagram_chains())
def test_M_is_an_ideal(chain):
    d, e, _ = chain
    rng = random.Random(len(d.lambda0))
    m = lambda_mu(d.source, d.target, [rng.randint(-3, 3) for _ in range(d.target.p)])
    assert in_M(compose(m, e)) is not None
    m2 = lambda_mu(e.source, e.target, [rng.randint(-3, 3) for _ in range(e.target.p)])
    assert in_M(compose(d, m2)) is not None


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_positivity_closed_under_sum_and_product(seed):
    rng = random.Random(seed)
    A, B, C = (random_block(rng) for _ in range(3))

    def positive(X, Y):
        for _ in range(50):
            d = random_box_diagram(rng, X, Y)
            found = positive_mod_M(d)
            if found and not found[1].is_zero:
                return found[1]
        return None

    d1, d2, e = positive(A, B), positive(A, B), positive(B, C)
    if d1 is not None and d2 is not None:
        assert is_positive(d1 + d2)
    if d1 is not None and e is not None:
        assert is_positive(compose(d1, e))


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_kk_equal_is_an_equivalence(d):
    rng = random.Random(sum(map(sum, d.lambda0)))
    m = lambda_mu(d.source, d.target, [rng.randint(-3, 3) for _ in range(d.target.p)])
    e = d + m
    assert kk_equal(d, d) and kk_equal(d, e) and kk_equal(e, d)
    assert kk_equal(d - d, zero_diagram(d.source, d.target))


@settings(max_examples=40, deadline=None)
@given(diagrams(box=1))
def test_unit_killing_order_preserving_maps_vanish(d):
    if kills_unit(d) and preserves_dl_order(d):
        assert kk_equal(d, zero_diagram(d.source, d.target))


@settings(max_examples=40, deadline=None)
@given(diagrams())
def test_generators_always_valid(d):
    for g in dl_generators(d.source):
        assert is_positive(g.diagram)
        D = g.diagram
        assert diagram_validate(D.source, D.target, D.lambda0, D.lambda1) == D


def test_circle_self_maps():
    C = canonical_circle()
    d = diagram_validate(C, C, [[2]], 3)
    assert enumerate_positive_reps(d) is UNBOUNDED
    assert preserves_dl_order(d)
