"""Acceptance criteria 1-14, all checked exactly (tolerance 0).

The conftest prints one PASS/FAIL line per criterion at the end of the run.
"""
import random
import subprocess
import sys
from fractions import Fraction as F
from itertools import product

from etkk import cli, reference_cases
from etkk.blocks import canonical_dimension_drop, make_interval_block, n_constant, point_block
from etkk.charts import ccut, compose_charts, decompose, find_distribution, verify_witness
from etkk.kkcalc import (
    apply_to_k0,
    compose,
    diagram_validate,
    dl_generators,
    enumerate_positive_reps,
    in_M,
    is_positive,
    kills_unit,
    kk_equal,
    lambda_mu,
    positive_mod_M,
    preserves_dl_order,
    zero_diagram,
)
from etkk.ktheory import compute_ktheory, minimal_positive_classes
from etkk.lifting import NOT_LIFTABLE, UNKNOWN, d0_conditions, decide_lift, suff_condition
from etkk.sampling import random_block, random_box_diagram, random_chart, random_diagram
from etkk.spectra import align_spectra, count_formula_check, density_windows, kk_equal_points, make_spectrum


def test_criterion_01_first_counterexample(A_c, B_c, lam, circle):
    assert is_positive(lam)
    assert preserves_dl_order(lam)
    assert apply_to_k0(lam, (0, 0, 0, 0, 1)) == (0, 0, 0, 0)
    assert enumerate_positive_reps(lam) == [lam]
    assert d0_conditions(lam).status == UNKNOWN
    assert suff_condition(lam).status == UNKNOWN
    eps = diagram_validate(circle, A_c, [[0], [0], [0], [0], [1]], 1)
    w = in_M(compose(eps, lam))
    assert w is not None and w.mu == (1, 0, 0, 0)


def test_criterion_02_second_counterexample(circle):
    A = make_interval_block((1,) * 5, 5, (2, 2, 0, 0, 1), (0, 0, 2, 2, 1))
    B = make_interval_block((1,) * 4, 4, (2, 2, 0, 0), (0, 0, 2, 2))
    assert compute_ktheory(A).k1.order == 2 and compute_ktheory(B).k1.order == 2
    zeta = diagram_validate(circle, A, [[0], [0], [0], [0], [1]], 1)
    delta = diagram_validate(A, B, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]], 1)
    zd = compose(zeta, delta)
    assert zd.lambda0_is_zero and zd.lambda1 == 1
    assert in_M(zd) is None
    assert positive_mod_M(zd) is None
    v = decide_lift(zd)
    assert v.status == NOT_LIFTABLE and v.criterion == "circle_source"


def test_criterion_03_dimension_drop_rigidity():
    point = point_block()
    for q in range(2, 8):
        A = canonical_dimension_drop(q)
        d1 = diagram_validate(A, point, [[1, 0]])
        d2 = diagram_validate(A, point, [[0, 1]])
        assert not kk_equal(d1, d2)
        assert apply_to_k0(d1 - d2, (1, 1)) == (0,)


def test_criterion_04_stable_homotopy():
    A = make_interval_block((1, 1), 2, (2, 0), (1, 1))
    point = point_block()
    d1 = diagram_validate(A, point, [[1, 0]])
    d2 = diagram_validate(A, point, [[0, 1]])
    assert kk_equal(d1, d2)
    assert in_M(d1 - d2).mu == (1,)


def test_criterion_05_generators(A_c):
    gens = dl_generators(A_c)
    assert sum(g.kind == "dimension_drop" for g in gens) == 4
    assert sum(g.kind == "circle" for g in gens) == 1
    for g in gens:
        D = g.diagram
        assert is_positive(D)
        assert diagram_validate(D.source, D.target, D.lambda0, D.lambda1) == D
    (g,) = dl_generators(canonical_dimension_drop(2))
    assert g.w == 4 and g.diagram.lambda0 == ((2, 0), (0, 2))


def test_criterion_06_zero_kk_rigidity():
    rng = random.Random(6)
    checked = failures = 0
    for _ in range(1000):
        A = random_block(rng, max_p=4, max_entry=3)
        B = random_block(rng, max_p=4, max_entry=3)
        for _ in range(5):
            d = random_diagram(rng, A, B, box=1)
            if d is None or not kills_unit(d) or not preserves_dl_order(d):
                continue
            checked += 1
            failures += not kk_equal(d, zero_diagram(A, B))
    print(f"zero-KK rigidity: {checked} qualifying diagrams, {failures} failures")
    assert failures == 0 and checked >= 100


def test_criterion_07_point_evaluations():
    rng = random.Random(7)
    positives = 0
    for _ in range(1000):
        A = random_block(rng, max_p=4)
        s = [rng.randint(0, 4) for _ in range(A.p)]
        c = rng.randint(-3, 3)
        t = [x + c * y for x, y in zip(s, A.diff)]
        if rng.random() < 0.3:
            t[rng.randrange(A.p)] += rng.choice([-1, 1])
        shift = [max(0, -x) for x in t]
        t = [x + y for x, y in zip(t, shift)]
        s = [x + y for x, y in zip(s, shift)]
        S1, S2 = make_spectrum(A, t), make_spectrum(A, s)
        got = kk_equal_points(A, S1, S2)
        d = [x - y for x, y in zip(t, s)]
        scan = [k for k in range(-10, 11) if all(x == k * y for x, y in zip(d, A.diff))]
        if got is None:
            assert scan == []
        else:
            assert got in scan
            positives += 1
    assert positives > 0


def test_criterion_08_alignment():
    rng = random.Random(8)
    for _ in range(500):
        A = random_block(rng, max_p=3)
        N = n_constant(A)
        m = 2 * N + rng.randint(0, 6)
        eta = F(1, m)
        c = rng.randint(-2, 2)
        pts = []
        for i in range(m):
            for _ in range(abs(c) + rng.randint(0, 1)):
                pts.append(F(8 * i + rng.randint(1, 7), 8 * m))
        s = [rng.randint(0, 3) for _ in range(A.p)]
        t = [x + c * y for x, y in zip(s, A.diff)]
        shift = [max(0, -x) for x in t]
        S1 = make_spectrum(A, [x + y for x, y in zip(t, shift)], pts)
        S2 = make_spectrum(A, [x + y for x, y in zip(s, shift)], pts)
        assert density_windows(A, pts, eta, c) is None
        res = align_spectra(A, S1, S2, eta)
        assert res.S1.base == res.S2.base
        assert res.maxdist <= 4 * N * eta
        assert res.S1.dim == res.S2.dim == S1.dim


def test_criterion_09_count_formula():
    rng = random.Random(9)
    for _ in range(1000):
        A = random_block(rng, max_p=4)
        m = rng.randint(3, 16)
        interior = [F(rng.randint(1, 4 * m - 1), 4 * m) for _ in range(rng.randint(0, 8))]
        S = make_spectrum(A, [rng.randint(0, 3) for _ in range(A.p)], interior)
        lhs, rhs = count_formula_check(A, S, rng.randint(1, A.p), rng.randint(0, m - 2), F(1, m))
        assert lhs == rhs


def test_criterion_10_pigeonhole():
    rng = random.Random(10)
    for _ in range(1000):
        s = rng.randint(1, 3)
        L = rng.randint(1, 4)
        E = [[F(rng.randint(0, 60), 60) for _ in range(rng.randint(0, 10))] for _ in range(s)]
        c, d = ccut(E, L)
        lo, hi = F(c, (L + 1) ** s), F(d, (L + 1) ** s)
        for values in E:
            assert (L + 1) * sum(lo < y < hi for y in values) <= len(values)


def test_criterion_11_distribution_composition():
    rng = random.Random(11)
    for _ in range(200):
        A = random_block(rng, max_p=2, max_entry=2, max_k=2)
        c1 = random_chart(rng, A, levels=64, wiggle=1)
        c2 = random_chart(rng, c1.target)
        _, w = find_distribution(c1, 3, 1)
        assert verify_witness(c1, w)
        assert verify_witness(compose_charts(c1, c2), w)


def test_criterion_12_decomposition():
    rng = random.Random(12)
    for i in range(200):
        A = random_block(rng, max_p=2, max_entry=2, max_k=2)
        finite = i % 2 == 1
        c = random_chart(rng, A, levels=64, wiggle=1, finite_range=finite)
        K, L = 3 + i % 2, 1 + i % 3
        _, w = find_distribution(c, K, L)
        cert = decompose(c, K, L, w)
        assert all(L * x <= y for x, y in zip(cert.q, cert.nu_unit))
        assert tuple(a + b + e for a, b, e in zip(cert.q, cert.P_sum, cert.Q_sum)) == cert.unit
        assert all(ch.holds for ch in cert.checks)
        if finite:
            by_name = {ch.name: ch for ch in cert.checks}
            for e in minimal_positive_classes(A):
                ch = by_name[f"nu_unit <= n*nu(e) for e=({','.join(map(str, e))})"]
                assert ch.holds


def test_criterion_13_group_and_cone_algebra():
    rng = random.Random(13)
    for _ in range(40):
        A, B, C = (random_block(rng, max_p=3) for _ in range(3))
        mu1 = [rng.randint(-3, 3) for _ in range(B.p)]
        mu2 = [rng.randint(-3, 3) for _ in range(B.p)]
        m1, m2 = lambda_mu(A, B, mu1), lambda_mu(A, B, mu2)
        assert in_M(m1 + m2) is not None and in_M(-m1) is not None
        d, e = random_box_diagram(rng, A, B), random_box_diagram(rng, B, C)
        f = random_box_diagram(rng, C, A)
        assert compose(compose(d, e), f) == compose(d, compose(e, f))
        pd, pe = positive_mod_M(d), positive_mod_M(e)
        if pd and pe:
            assert is_positive(pd[1] + pd[1])
            assert is_positive(compose(pd[1], pe[1]))
        table = {lambda_mu(A, B, mu) for mu in product(range(-6, 7), repeat=B.p)}
        for cand in (d, m1, m1 + m2, d + m1):
            w = in_M(cand)
            if cand in table:
                assert w is not None
            if w is not None:
                assert lambda_mu(A, B, w.mu) == cand


def _leaves(node, prefix=()):
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _leaves(v, prefix + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _leaves(v, prefix + (i,))
    else:
        yield prefix


def test_criterion_14_verify_paper_command():
    out = subprocess.run([sys.executable, "-m", "etkk", "verify-paper"], capture_output=True, text=True)
    assert out.returncode == 0
    for path in _leaves(reference_cases.REFERENCE_DATA):
        node = reference_cases.REFERENCE_DATA
        for key in path[:-1]:
            node = node[key]
        original = node[path[-1]]
        node[path[-1]] = original + 1
        try:
            assert cli.run(["verify-paper"]).exit_code == 1, path
        finally:
            node[path[-1]] = original
    assert cli.run(["verify-paper"]).exit_code == 0
