"""Hexagon tilings: LGV counting, column laws, MacMahon, plane partitions,
MCMC and corner statistics."""

import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss
from scipy.stats import chi2 as chi2_dist

from tilings import ope
from tilings.hexagon import (
    HexagonSpec,
    LozengeChain,
    arctic_boundary,
    column_bounds,
    column_law,
    corner_gue_exponent,
    corner_gue_statistics,
    count_tilings_dp,
    enumerate_walks,
    lgv_count,
    macmahon,
    plane_partition_height,
    sample_hexagon,
    walks_to_hole_columns,
)
from tilings.hexagon import hahn_normalization_exact, macmahon_closed_form


def test_macmahon_values():
    assert macmahon(1, 1, 1) == 2
    assert macmahon(2, 2, 2) == 20
    assert macmahon(3, 3, 3) == 980


def test_macmahon_symmetry_and_closed_form():
    for perm in itertools.permutations((2, 3, 4)):
        assert macmahon(*perm) == macmahon(2, 3, 4)
    for (a, b, c) in [(2, 2, 2), (4, 3, 5), (6, 6, 6)]:
        assert macmahon(a, b, c) == macmahon_closed_form(a, b, c)


def test_column_bounds_examples():
    spec = HexagonSpec(2, 2, 2)
    alpha, beta, gamma, L, delta = column_bounds(spec, 0)
    assert (alpha, beta, gamma, L, delta) == (0, 2, 1, 0, 0)
    assert column_bounds(spec, 2)[3] == 2  # middle branch: L = b
    for m in range(5):
        _, _, g, L, _ = column_bounds(spec, m)
        assert g - L == spec.c - 1
    with pytest.raises(ValueError):
        column_bounds(spec, 5)


def test_spec_requires_a_ge_b():
    with pytest.raises(ValueError):
        HexagonSpec(1, 2, 1)


def test_lgv_single_walk_is_binomial():
    spec = HexagonSpec(3, 2, 1)
    for m in range(6):
        _, _, gamma, _, delta = column_bounds(spec, m)
        for x in range(gamma + 1):
            expected = math.comb(m, delta + x) if 0 <= delta + x <= m else 0
            assert lgv_count(spec, m, (x,)) == expected


def test_lgv_matches_walk_prefix_enumeration():
    spec = HexagonSpec(2, 2, 2)
    fams = enumerate_walks(spec)
    for m in range(5):
        _, _, gamma, _, _ = column_bounds(spec, m)
        prefix_counts = Counter()
        seen = set()
        for f in fams:
            key = tuple(tuple(row[: m + 1]) for row in f.S)
            if key in seen:
                continue
            seen.add(key)
            prefix_counts[f.particles(m)] += 1
        for xs in itertools.combinations(range(gamma + 1), 2):
            assert lgv_count(spec, m, xs) == prefix_counts.get(xs, 0)


def test_lgv_product_totals():
    for (a, b, c) in [(2, 2, 2), (3, 2, 2), (3, 3, 3), (6, 6, 6), (6, 5, 4)]:
        spec = HexagonSpec(a, b, c)
        N = macmahon(a, b, c)
        for m in range(a + b + 1):
            _, _, gamma, _, _ = column_bounds(spec, m)
            total = 0
            for xs in itertools.combinations(range(gamma + 1), c):
                refl = tuple(sorted(gamma - v for v in xs))
                total += lgv_count(spec, m, xs) * lgv_count(spec, a + b - m, refl)
            assert total == N


def test_walk_dp_equals_macmahon():
    for (a, b, c) in [(1, 1, 1), (2, 1, 1), (2, 2, 2), (3, 2, 2), (3, 3, 3)]:
        assert count_tilings_dp(HexagonSpec(a, b, c)) == macmahon(a, b, c)


def test_enumeration_equals_macmahon():
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (3, 2, 2), (2, 2, 3), (3, 3, 3)]:
        assert len(enumerate_walks(HexagonSpec(a, b, c))) == macmahon(a, b, c)


@pytest.mark.parametrize("abc", [(2, 2, 2), (3, 3, 3), (3, 2, 2)])
def test_column_law_three_routes_agree_exactly(abc):
    a, b, c = abc
    spec = HexagonSpec(a, b, c)
    for m in range(a + b + 1):
        for kind in ("holes", "particles"):
            lgv = column_law(spec, m, kind=kind, method="lgv")
            hahn = column_law(spec, m, kind=kind, method="hahn")
            assert sum(lgv.values()) == 1
            for key in set(lgv) | set(hahn):
                assert lgv.get(key, Fraction(0)) == hahn.get(key, Fraction(0))


def test_column_law_matches_enumeration():
    spec = HexagonSpec(2, 2, 2)
    fams = enumerate_walks(spec)
    for m in (1, 2, 3):
        law = column_law(spec, m, kind="holes")
        emp = Counter(f.holes(m) for f in fams)
        for key, pr in law.items():
            assert pr == Fraction(emp.get(key, 0), len(fams))


def test_hahn_normalization_closed_form():
    for (N, m, alpha, beta) in [(5, 2, 1, 2), (8, 3, 0, 0), (12, 3, 2, 1)]:
        w = ope.DiscreteWeight.hahn(N, alpha, beta)
        direct = Fraction(0)
        for h in itertools.product(range(N + 1), repeat=m):
            d = 1
            for i in range(m):
                for j in range(i + 1, m):
                    d *= h[i] - h[j]
            if d == 0:
                continue
            term = Fraction(d * d)
            for x in h:
                term *= w.exact_weight(x)
            direct += term
        assert direct == hahn_normalization_exact(N, m, alpha, beta)


def test_column_prefactor_shape():
    # prefix counts factor through explicit xi-dependent branch factors;
    # check the proportionality (constant-free) on all three branches
    a, b, c = 4, 2, 2
    spec = HexagonSpec(a, b, c)
    for m in range(1, a + b):
        _, _, gamma, L, _ = column_bounds(spec, m)
        ratios = set()
        for xs in itertools.combinations(range(gamma + 1), c):
            cnt = lgv_count(spec, m, xs)
            if cnt == 0:
                continue
            holes = [v for v in range(gamma + 1) if v not in set(xs)]
            delta = 1
            for i in range(len(holes)):
                for j in range(i + 1, len(holes)):
                    delta *= holes[j] - holes[i]
            factor = Fraction(delta)
            for xi in holes:
                if b <= m <= a:
                    factor *= Fraction(
                        math.factorial(xi + m - b), math.factorial(xi)
                    )
                elif m > a:
                    factor *= Fraction(
                        math.factorial(xi + m - b) * math.factorial(b + c - 1 - xi),
                        math.factorial(xi) * math.factorial(a + b + c - m - 1 - xi),
                    )
            if factor:
                ratios.add(Fraction(cnt) / factor)
        assert len(ratios) == 1, (m, ratios)


def test_plane_partition_bijection_222():
    fams = enumerate_walks(HexagonSpec(2, 2, 2))
    images = {tuple(plane_partition_height(f).flatten()) for f in fams}
    oracle = set()
    for vals in itertools.product(range(3), repeat=4):
        H = np.array(vals).reshape(2, 2)
        if (np.diff(H, axis=0) <= 0).all() and (np.diff(H, axis=1) <= 0).all():
            oracle.add(tuple(H.flatten()))
    assert images == oracle and len(images) == 20


def test_plane_partition_extremes_and_monotonicity():
    spec = HexagonSpec(3, 2, 2)
    rng = np.random.default_rng(0)
    chain = LozengeChain(spec, rng)
    H = plane_partition_height(chain.family())
    assert (H == 0).all() or (H == spec.c).all()
    spec8 = HexagonSpec(8, 8, 8)
    chain8 = LozengeChain(spec8, rng)
    chain8.sweep(400)
    for _ in range(5):
        chain8.sweep(40)
        H = plane_partition_height(chain8.family())
        assert (np.diff(H, axis=0) <= 0).all() and (np.diff(H, axis=1) <= 0).all()
        assert H.min() >= 0 and H.max() <= 8


def test_exact_sampler_uniform_111():
    rng = np.random.default_rng(1)
    counts = Counter()
    for _ in range(4000):
        f = sample_hexagon(HexagonSpec(1, 1, 1), rng)
        counts[f.S] += 1
    assert len(counts) == 2
    for v in counts.values():
        assert abs(v - 2000) < 4 * math.sqrt(4000 * 0.25)


def test_exact_sampler_refuses_large():
    rng = np.random.default_rng(2)
    with pytest.raises(ValueError):
        sample_hexagon(HexagonSpec(40, 40, 40), rng)


def test_mcmc_uniform_222():
    rng = np.random.default_rng(3)
    spec = HexagonSpec(2, 2, 2)
    chain = LozengeChain(spec, rng)
    chain.sweep(300)
    R = 20000
    counts = Counter()
    for _ in range(R):
        chain.sweep(3)
        counts[chain.family().S] += 1
    assert len(counts) == 20
    chi = sum((o - R / 20) ** 2 / (R / 20) for o in counts.values())
    assert chi2_dist.sf(chi, 19) > 1e-3


def test_samples_are_valid_walks():
    rng = np.random.default_rng(4)
    fam = sample_hexagon(HexagonSpec(3, 2, 2), rng)
    fam.validate()
    cols = walks_to_hole_columns(fam)
    for m, holes in enumerate(cols):
        assert len(holes) == column_bounds(fam.spec, m)[3]


def test_corner_gue_m1_variance():
    rng = np.random.default_rng(5)
    lam, c = 1.0, 200
    xs = corner_gue_statistics(HexagonSpec(c, c, c), 1, 3000, rng)
    kappa = corner_gue_exponent(lam)
    assert abs(xs.mean()) < 0.05
    assert abs(xs.var() - 1 / (2 * kappa)) < 0.05


def test_corner_gue_exponent_matches_exact_law():
    # the m = 1 variance of the exact discrete law approaches 1/(2 kappa)
    from scipy.special import gammaln

    for lam in (0.5, 1.0, 2.0):
        c = 6000
        a = int(lam * c)
        gamma = c  # m = 1
        alpha = a - 1
        t = np.arange(gamma + 1.0)
        logw = (
            gammaln(gamma + alpha - t + 1)
            + gammaln(alpha + t + 1)
            - gammaln(t + 1)
            - gammaln(gamma - t + 1)
        )
        w = np.exp(logw - logw.max())
        w /= w.sum()
        mu = (w * t).sum()
        var = (w * (t - mu) ** 2).sum() / c
        assert abs(var - 1 / (2 * corner_gue_exponent(a / c))) < 0.01


def test_corner_gue_m2_gap_moments_vs_quadrature():
    rng = np.random.default_rng(6)
    lam, c = 1.0, 200
    xs = corner_gue_statistics(HexagonSpec(c, c, c), 2, 3000, rng)
    gaps = xs[:, 1] - xs[:, 0]
    kappa = corner_gue_exponent(lam)
    nodes, wts = hermgauss(80)
    U = nodes / math.sqrt(kappa)
    W2 = np.outer(wts, wts)
    X, Y = np.meshgrid(U, U, indexing="ij")
    base = (X - Y) ** 2
    Z = (base * W2).sum()
    g1 = (np.abs(X - Y) * base * W2).sum() / Z
    g2 = ((X - Y) ** 2 * base * W2).sum() / Z
    assert abs(gaps.mean() - g1) / g1 < 0.10
    assert abs((gaps**2).mean() - g2) / g2 < 0.10


def test_arctic_boundary_values():
    assert abs(arctic_boundary(1.0, 0.0) - math.sqrt(3) / 2) < 1e-14
    assert abs(arctic_boundary(1.0, -0.3) - math.sqrt(3) * math.sqrt(0.25 - 0.03)) < 1e-14
    with pytest.raises(ValueError):
        arctic_boundary(1.0, 2.0)
