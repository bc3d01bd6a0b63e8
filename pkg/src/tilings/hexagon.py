"""Rhombus tilings of the abc-hexagon as non-intersecting Bernoulli walks.

A tiling of the hexagon with sides a, b, c (a >= b; otherwise relabel) is
equivalent to c non-intersecting +-1 walks S^k(m), 0 <= m <= a+b, from
S^k(0) = 2(k-1) to S^k(a+b) = a - b + 2(k-1).  On the column x = m the walks
occupy particle positions x_k = (S^k(m) - alpha_m)/2 in {0, ..., gamma_m};
the L_m complementary sites are the holes, one per vertical rhombus.

Exact machinery: column prefix counts as determinants of binomial
coefficients (integer arithmetic), MacMahon's product formula, the exact
column laws (holes are a Hahn ensemble, particles an associated Hahn
ensemble), and a count-DP sampler that is exactly uniform.  For hexagons too
large to count, a checkerboard Glauber chain of single-lozenge flips mixes
towards the uniform measure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ope

__all__ = [
    "HexagonSpec",
    "WalkFamily",
    "column_bounds",
    "lgv_count",
    "macmahon",
    "column_law",
    "hahn_law_exact",
    "associated_hahn_law_exact",
    "count_tilings_dp",
    "enumerate_walks",
    "sample_hexagon",
    "plane_partition_height",
    "corner_gue_statistics",
    "arctic_boundary",
    "corner_gue_exponent",
    "walks_to_hole_columns",
    "LozengeChain",
]


@dataclass(frozen=True)
class HexagonSpec:
    """Hexagon sides; a >= b is required (relabel the other case)."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("sides must be positive")
        if self.a < self.b:
            raise ValueError("use a >= b (swap a and b: the tiling count and "
                             "column laws are symmetric)")

    @property
    def columns(self) -> int:
        return self.a + self.b


def column_bounds(spec: HexagonSpec, m: int) -> tuple[int, int, int, int, int]:
    """(alpha_m, beta_m, gamma_m, L_m, delta_m) for the column x = m."""
    a, b, c = spec.a, spec.b, spec.c
    if not 0 <= m <= a + b:
        raise ValueError(f"column {m} out of range 0..{a + b}")
    alpha = -m if m <= b else m - 2 * b
    beta = m + 2 * (c - 1) if m <= a else 2 * a - m + 2 * (c - 1)
    gamma = (beta - alpha) // 2
    L = gamma + 1 - c
    delta = (m + alpha) // 2
    return alpha, beta, gamma, L, delta


@dataclass(frozen=True)
class WalkFamily:
    """c non-intersecting walks stored as an array S[k, m]."""

    spec: HexagonSpec
    S: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        a, b, c = self.spec.a, self.spec.b, self.spec.c
        S = self.S
        if len(S) != c or any(len(row) != a + b + 1 for row in S):
            raise ValueError("wrong walk family shape")
        for k in range(c):
            if S[k][0] != 2 * k or S[k][a + b] != a - b + 2 * k:
                raise ValueError(f"walk {k + 1} has wrong endpoints")
            for m in range(a + b):
                if abs(S[k][m + 1] - S[k][m]) != 1:
                    raise ValueError(f"walk {k + 1} takes a non-unit step at {m}")
        for m in range(a + b + 1):
            alpha, beta, _, _, _ = column_bounds(self.spec, m)
            col = [S[k][m] for k in range(c)]
            if any(v < alpha or v > beta for v in col):
                raise ValueError(f"walk leaves the hexagon at column {m}")
            if any(u >= v for u, v in zip(col, col[1:])):
                raise ValueError(f"walks intersect at column {m}")

    def particles(self, m: int) -> tuple[int, ...]:
        alpha = column_bounds(self.spec, m)[0]
        return tuple((s[m] - alpha) // 2 for s in self.S)

    def holes(self, m: int) -> tuple[int, ...]:
        gamma = column_bounds(self.spec, m)[2]
        occ = set(self.particles(m))
        return tuple(x for x in range(gamma + 1) if x not in occ)


def walks_to_hole_columns(fam: WalkFamily) -> list[list[int]]:
    return [list(fam.holes(m)) for m in range(fam.spec.columns + 1)]


# ---------------------------------------------------------------------------
# Exact counting
# ---------------------------------------------------------------------------


def _int_det(M: list[list[int]]) -> int:
    """Bareiss integer-preserving determinant."""
    A = [row[:] for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def lgv_count(spec: HexagonSpec, m: int, x) -> int:
    """Number of non-intersecting walk prefixes from the fixed starts to the
    particle configuration x on column m: det(C(m, delta_m + x_k - j + 1)).
    """
    c = spec.c
    x = tuple(x)
    if len(x) != c or any(u >= v for u, v in zip(x, x[1:])):
        raise ValueError("x must be a strictly increasing c-tuple")
    _, _, gamma, _, delta = column_bounds(spec, m)
    if x and (x[0] < 0 or x[-1] > gamma):
        raise ValueError("particle outside the column window")

    def comb(n, k):
        return math.comb(n, k) if 0 <= k <= n else 0

    M = [[comb(m, delta + x[k] - (j + 1) + 1) for k in range(c)] for j in range(c)]
    return _int_det(M)


def macmahon(a: int, b: int, c: int) -> int:
    """MacMahon's boxed-plane-partition count, exact."""
    if min(a, b, c) < 1:
        raise ValueError("sides must be positive")
    out = Fraction(1)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                out *= Fraction(i + j + k - 1, i + j + k - 2)
    assert out.denominator == 1
    return out.numerator


def macmahon_closed_form(a: int, b: int, c: int) -> int:
    """Equivalent product over one index; used as a cross-check."""
    out = Fraction(1)
    for j in range(b):
        out *= Fraction(
            math.factorial(j) * math.factorial(a + c + j),
            math.factorial(a + j) * math.factorial(c + j),
        )
    assert out.denominator == 1
    return out.numerator


def _reflected(spec: HexagonSpec, m: int, x: tuple[int, ...]) -> tuple[int, ...]:
    gamma = column_bounds(spec, m)[2]
    return tuple(sorted(gamma - v for v in x))


def column_law(spec: HexagonSpec, m: int, kind: str = "holes",
               method: str = "lgv") -> dict[tuple[int, ...], Fraction]:
    """Exact law of the column-m configuration (sorted tuples -> Fraction).

    method 'lgv' multiplies prefix and suffix walk counts and divides by the
    tiling total; 'hahn' evaluates the Hahn (holes) or associated Hahn
    (particles) ensemble directly.  Both are exact and agree.
    """
    if kind not in ("holes", "particles"):
        raise ValueError("kind must be 'holes' or 'particles'")
    a, b, c = spec.a, spec.b, spec.c
    _, _, gamma, L, _ = column_bounds(spec, m)
    n_pts = L if kind == "holes" else c
    if math.comb(gamma + 1, n_pts) > 2_000_000:
        raise ValueError(
            f"column window C({gamma + 1},{n_pts}) too large for exact tabulation"
        )
    if method == "lgv":
        total = macmahon(a, b, c)
        mp = a + b - m
        law: dict[tuple[int, ...], Fraction] = {}
        for xs in itertools.combinations(range(gamma + 1), c):
            cnt = lgv_count(spec, m, xs) * lgv_count(spec, mp, _reflected(spec, m, xs))
            if cnt == 0:
                continue
            key = xs if kind == "particles" else tuple(
                v for v in range(gamma + 1) if v not in set(xs)
            )
            law[key] = Fraction(cnt, total)
        return law
    if method == "hahn":
        alpha, beta = abs(a - m), abs(b - m)
        if kind == "holes":
            return hahn_law_exact(gamma, L, alpha, beta)
        return associated_hahn_law_exact(gamma, c, alpha, beta)
    raise ValueError(f"unknown method {method!r}")


def _squared_vandermonde(h) -> int:
    d = 1
    for i in range(len(h)):
        for j in range(i + 1, len(h)):
            d *= (h[j] - h[i]) ** 2
    return d


def hahn_law_exact(N: int, m: int, alpha: int, beta: int) -> dict:
    """Hahn ensemble law over sorted m-tuples on {0..N}, exact rationals."""
    w = ope.DiscreteWeight.hahn(N, alpha, beta)
    masses = {}
    for h in itertools.combinations(range(N + 1), m):
        val = Fraction(_squared_vandermonde(h))
        for x in h:
            val *= w.exact_weight(x)
        masses[h] = val
    tot = sum(masses.values())
    return {h: v / tot for h, v in masses.items()}


def associated_hahn_law_exact(N: int, m: int, alpha: int, beta: int) -> dict:
    w = ope.DiscreteWeight.associated_hahn(N, alpha, beta)
    masses = {}
    for h in itertools.combinations(range(N + 1), m):
        val = Fraction(_squared_vandermonde(h))
        for x in h:
            val *= w.exact_weight(x)
        masses[h] = val
    tot = sum(masses.values())
    return {h: v / tot for h, v in masses.items()}


def hahn_normalization_exact(N: int, m: int, alpha: int, beta: int) -> Fraction:
    """Closed form for the Hahn normalization sum over ordered tuples."""
    z = Fraction(math.factorial(m))
    for j in range(m):
        z *= Fraction(
            math.factorial(j) * math.factorial(alpha + j) * math.factorial(beta + j)
            * math.factorial(alpha + beta + j + N + 1) * math.factorial(alpha + beta + j),
            math.factorial(alpha + beta + 2 * j) * math.factorial(alpha + beta + 2 * j + 1)
            * math.factorial(N - j),
        )
    return z


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _column_states(spec: HexagonSpec, m: int) -> list[tuple[int, ...]]:
    alpha, beta, _, _, _ = column_bounds(spec, m)
    c = spec.c
    heights = [alpha + 2 * i for i in range((beta - alpha) // 2 + 1)]
    return [tuple(s) for s in itertools.combinations(heights, c)]


def _transitions(spec: HexagonSpec, m: int, state: tuple[int, ...]):
    """All non-intersecting one-step moves from column m to m+1."""
    alpha1, beta1, _, _, _ = column_bounds(spec, m + 1)
    c = spec.c
    out = []
    for signs in itertools.product((-1, 1), repeat=c):
        nxt = tuple(s + d for s, d in zip(state, signs))
        if any(u >= v for u, v in zip(nxt, nxt[1:])):
            continue
        if nxt[0] < alpha1 or nxt[-1] > beta1:
            continue
        out.append(nxt)
    return out


def count_tilings_dp(spec: HexagonSpec) -> int:
    """Walk-family count by column DP; equals MacMahon's formula."""
    a, b, c = spec.a, spec.b, spec.c
    end = tuple(a - b + 2 * k for k in range(c))
    counts = {end: 1}
    for m in range(a + b - 1, -1, -1):
        prev: dict[tuple[int, ...], int] = {}
        for state in _column_states(spec, m):
            tot = 0
            for nxt in _transitions(spec, m, state):
                tot += counts.get(nxt, 0)
            if tot:
                prev[state] = tot
        counts = prev
    start = tuple(2 * k for k in range(c))
    return counts.get(start, 0)


class _DPSampler:
    """Exact uniform sampling by forward simulation against completion
    counts."""

    def __init__(self, spec: HexagonSpec):
        self.spec = spec
        a, b, c = spec.a, spec.b, spec.c
        total_estimate = macmahon(a, b, c)
        if total_estimate > 10_000_000:
            raise ValueError(
                f"N(a,b,c) = {total_estimate} exceeds the exact-sampling limit 1e7"
            )
        end = tuple(a - b + 2 * k for k in range(c))
        layers = [dict() for _ in range(a + b + 1)]
        layers[a + b][end] = 1
        for m in range(a + b - 1, -1, -1):
            for state in _column_states(spec, m):
                tot = 0
                for nxt in _transitions(spec, m, state):
                    tot += layers[m + 1].get(nxt, 0)
                if tot:
                    layers[m][state] = tot
        self.layers = layers
        start = tuple(2 * k for k in range(c))
        if layers[0].get(start, 0) != total_estimate:
            raise AssertionError("walk DP total disagrees with the product formula")

    def sample(self, rng: np.random.Generator) -> WalkFamily:
        spec = self.spec
        a, b, c = spec.a, spec.b, spec.c
        state = tuple(2 * k for k in range(c))
        rows = [[2 * k] for k in range(c)]
        for m in range(a + b):
            nxts = [s for s in _transitions(spec, m, state)
                    if s in self.layers[m + 1]]
            weights = np.array([self.layers[m + 1][s] for s in nxts], dtype=float)
            state = nxts[rng.choice(len(nxts), p=weights / weights.sum())]
            for k in range(c):
                rows[k].append(state[k])
        fam = WalkFamily(spec=spec, S=tuple(tuple(r) for r in rows))
        fam.validate()
        return fam


def enumerate_walks(spec: HexagonSpec) -> list[WalkFamily]:
    """All walk families; feasible only for small hexagons."""
    if macmahon(spec.a, spec.b, spec.c) > 200_000:
        raise ValueError("hexagon too large to enumerate")
    a, b, c = spec.a, spec.b, spec.c
    out = []

    def rec(m, state, rows):
        if m == a + b:
            fam = WalkFamily(spec=spec, S=tuple(tuple(r) for r in rows))
            fam.validate()
            out.append(fam)
            return
        for nxt in _transitions(spec, m, state):
            for k in range(c):
                rows[k].append(nxt[k])
            rec(m + 1, nxt, rows)
            for k in range(c):
                rows[k].pop()

    start = tuple(2 * k for k in range(c))
    rec(0, start, [[2 * k] for k in range(c)])
    return out


class LozengeChain:
    """Checkerboard Glauber dynamics on the walk representation.

    A flip toggles one walk at one interior column between a local valley
    and a local peak; proposals on the two (column+walk)-parity classes are
    independent, so each half-sweep is applied as a vectorized mask update.
    The stationary law is uniform over tilings.
    """

    def __init__(self, spec: HexagonSpec, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng
        a, b, c = spec.a, spec.b, spec.c
        # frozen start: every walk hugs the lower boundary, S[k, m] = alpha_m + 2k
        alphas = np.array([column_bounds(spec, m)[0] for m in range(a + b + 1)])
        self.S = alphas[None, :] + 2 * np.arange(c)[:, None]
        self.family().validate()

    def family(self) -> WalkFamily:
        return WalkFamily(spec=self.spec, S=tuple(tuple(int(v) for v in row)
                                                  for row in self.S))

    def sweep(self, nsweeps: int = 1) -> None:
        rng, S = self.rng, self.S
        c, cols = S.shape
        kk, mm = np.meshgrid(np.arange(c), np.arange(1, cols - 1), indexing="ij")
        parity_mask = [(kk + mm) % 2 == par for par in (0, 1)]
        for _ in range(nsweeps):
            for sel in parity_mask:
                flat = S[:, :-2] == S[:, 2:]
                # valleys may rise, peaks may drop; the hexagon boundary is
                # respected automatically, only the walk above/below matters
                can_up = flat & (S[:, 1:-1] == S[:, :-2] - 1)
                can_up[:-1] &= (S[1:, 1:-1] - S[:-1, 1:-1]) > 2
                can_dn = flat & (S[:, 1:-1] == S[:, :-2] + 1)
                can_dn[1:] &= (S[1:, 1:-1] - S[:-1, 1:-1]) > 2
                coin = rng.random(can_up.shape) < 0.5
                S[:, 1:-1][sel & coin & can_up] += 2
                S[:, 1:-1][sel & ~coin & can_dn] -= 2

    def run(self, burn_in: int, samples: int, thin: int) -> list[WalkFamily]:
        self.sweep(burn_in)
        out = []
        for _ in range(samples):
            self.sweep(thin)
            out.append(self.family())
        return out


def sample_hexagon(spec: HexagonSpec, rng: np.random.Generator,
                   method: str = "enumerate", sweeps: int | None = None,
                   chain: "LozengeChain | None" = None) -> WalkFamily:
    """One uniform (exact or MCMC) random tiling as a walk family."""
    if method == "enumerate":
        return _DPSampler(spec).sample(rng)
    if method == "mcmc":
        if chain is None:
            chain = LozengeChain(spec, rng)
            default_burn = 10 * spec.a * spec.b * spec.c // max(
                (spec.a + spec.b - 1) * spec.c, 1
            )
            chain.sweep(max(default_burn, 10))
        chain.sweep(sweeps if sweeps is not None else 10)
        return chain.family()
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Heights and limit statistics
# ---------------------------------------------------------------------------


def plane_partition_height(fam: WalkFamily) -> np.ndarray:
    """Boxed plane partition H on the a x b base grid (entries in 0..c),
    weakly decreasing along both axes: H(r_m - k, s_m - k) = X_m(k) - k + 1
    over the holes X_m(1) < X_m(2) < ... of every column m."""
    spec = fam.spec
    a, b, c = spec.a, spec.b, spec.c
    H = np.full((a, b), -1, dtype=np.int64)
    for m in range(a + b + 1):
        holes = fam.holes(m)
        r_m = a if m <= b else a + b - m
        s_m = m if m <= b else b
        for k, xk in enumerate(holes, start=1):
            i, j = r_m - k, s_m - k
            if 0 <= i < a and 0 <= j < b:
                H[i, j] = xk - k + 1
            elif not (i == -1 or j == -1):
                raise ValueError(f"hole ({m},{k}) maps outside the box grid")
    if (H < 0).any():
        raise ValueError("tiling columns did not cover the base grid")
    if (np.diff(H, axis=0) > 0).any() or (np.diff(H, axis=1) > 0).any():
        raise ValueError("height array is not weakly decreasing")
    return H


def corner_gue_statistics(spec: HexagonSpec, m: int, replicas: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Rescaled hole positions (xi - gamma_m/2)/sqrt(c) of column m, sampled
    exactly from the Hahn projection kernel (no MCMC)."""
    if spec.a != spec.b:
        raise ValueError("corner statistics are defined for a = b")
    if m > spec.b:
        raise ValueError("take a column in the left part, m <= b")
    _, _, gamma, L, _ = column_bounds(spec, m)
    weight = ope.DiscreteWeight.hahn(gamma, abs(spec.a - m), abs(spec.b - m))
    kernel = ope.cd_kernel(ope.build_orthonormal(weight, L))
    out = np.empty((replicas, L))
    for r in range(replicas):
        xs = ope.sample_dpp(kernel, rng)
        out[r] = (xs - gamma / 2.0) / math.sqrt(spec.c)
    return out


def corner_gue_exponent(lam: float) -> float:
    """Gaussian exponent kappa of the fixed-column hole limit law
    Delta(x)^2 prod exp(-kappa x_j^2): kappa = 4 lam / (2 lam + 1).

    Derived by a Stirling expansion of the exact column weight around
    gamma_m / 2 and confirmed against the exact discrete law (the m = 1
    variance converges to 1/(2 kappa) = (2 lam + 1) / (8 lam)).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    return 4.0 * lam / (2.0 * lam + 1.0)


def arctic_boundary(lam: float, tau: float) -> float:
    """Limit position of the inner polar-zone boundary at horizontal
    coordinate tau (hexagon rescaled by 1/c, a/c -> lam):
    sqrt(2 lam + 1) sqrt(1/4 - tau^2 / (3 lam^2))."""
    disc = 0.25 - tau * tau / (3.0 * lam * lam)
    if disc < 0:
        raise ValueError("tau outside the inscribed ellipse")
    return math.sqrt(2 * lam + 1) * math.sqrt(disc)
