"""Dimer model on the cylindrical brick lattice.

The graph has vertices v_{j,k} = (-1/2 + j, k) for 0 <= j <= 2M-1 (cyclic in
j) and 0 <= k <= 2N, vertical edges everywhere, and horizontal edges on the
brick pattern (even columns pair at even heights, odd columns at odd
heights).  A dimer cover is the same thing as a family of L non-intersecting
periodic +-1 walks, 0 <= L <= N: the walks traverse the vertical dimers, and
every vertex not visited by a walk carries a horizontal dimer.

With weight z per horizontal and w per vertical dimer, the model is solved
by the spectral data of the even-height restriction of the absorbing simple
walk on {0, ..., 2N}:

    phi_j(x)   = sqrt(2/(N+1)) sin(pi j (2x+1) / (2N+2)),  j = 1..N+1,
    lambda_j   = cos(pi j / (2N+2))^(2M)                    (j = N+1 gives 0),
    u_j        = (2w/z)^(2M) lambda_j / (1 + (2w/z)^(2M) lambda_j),

    Z = z^(M(2N+1)) prod_j (1 + (2w/z)^(2M) lambda_j),
    K(x, y) = sum_j phi_j(x) phi_j(y) u_j,

with determinantal starting-height correlations R_l = det K.  (The mode
functions are the sine eigenbasis of the absorbing walk; a cosine variant
sometimes quoted for this model fails the brute-force enumeration check,
which the tests here run at small sizes.)  Everything exponent-heavy is done
in log space so large M costs nothing in stability.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

__all__ = [
    "BrickLatticeSpec",
    "DimerCover",
    "CylindricPathFamily",
    "phi",
    "mode_weights",
    "kernel",
    "correlations",
    "partition_function",
    "log_partition_function",
    "partition_polynomial",
    "partition_function_exact",
    "free_energy",
    "free_energy_limit",
    "enumerate_dimers",
    "cover_to_paths",
    "paths_to_cover",
    "brick_edges",
]


@dataclass(frozen=True)
class BrickLatticeSpec:
    M: int
    N: int
    z: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M, N must be positive")
        if self.z <= 0 or self.w <= 0:
            raise ValueError("weights must be positive")

    @property
    def num_vertices(self) -> int:
        return 2 * self.M * (2 * self.N + 1)

    def log_activations(self) -> np.ndarray:
        """2M [log(2w/z) + log cos(pi j / (2N+2))] for modes j = 1..N+1.

        The top mode is exactly null (cos = 0), carried as -inf."""
        j = np.arange(1, self.N + 2)
        with np.errstate(divide="ignore"):
            logc = np.log(np.cos(np.pi * j / (2 * self.N + 2)).clip(min=0.0))
        return 2 * self.M * (math.log(2 * self.w / self.z) + logc)

    def mode_u(self) -> np.ndarray:
        """u_j in [0, 1), via a stable logistic of the log activation."""
        e = self.log_activations()
        out = np.empty_like(e)
        pos = e >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-e[pos]))
        out[~pos] = np.exp(e[~pos]) / (1.0 + np.exp(e[~pos]))
        return out


def phi(spec: BrickLatticeSpec, s: int, t: int) -> float:
    """Orthonormal mode basis phi(s, t); s is a height index and t a mode
    index, both in 0..N (mode t corresponds to frequency j = t + 1; the top
    mode carries an extra 1/sqrt(2), like the boundary weights of the
    analogous cosine transform)."""
    N = spec.N
    if not (0 <= s <= N and 0 <= t <= N):
        raise ValueError("indices must lie in 0..N")
    j = t + 1
    c = 0.5 if j == N + 1 else 1.0
    return math.sqrt(2.0 * c / (N + 1)) * math.sin(
        math.pi * j * (2 * s + 1) / (2 * N + 2)
    )


def _phi_matrix(spec: BrickLatticeSpec) -> np.ndarray:
    N = spec.N
    x = np.arange(N + 1)
    j = np.arange(1, N + 2)
    c = np.where(j == N + 1, 0.5, 1.0)
    return np.sqrt(2.0 * c / (N + 1)) * np.sin(
        np.pi * np.outer(2 * x + 1, j) / (2 * N + 2)
    )


def mode_weights(spec: BrickLatticeSpec) -> np.ndarray:
    """Eigenvalues lambda_j = cos(pi j/(2N+2))^(2M) of the 2M-step
    even-height walk, modes j = 1..N+1 (the last one vanishes)."""
    j = np.arange(1, spec.N + 2)
    return np.cos(np.pi * j / (2 * spec.N + 2)) ** (2 * spec.M)


def kernel(spec: BrickLatticeSpec) -> np.ndarray:
    """Starting-height correlation kernel on {0, ..., N}."""
    P = _phi_matrix(spec)
    return (P * spec.mode_u()) @ P.T


def correlations(spec: BrickLatticeSpec, points) -> float:
    """Probability that walks start at all the listed even heights 2x_i."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    if any(not 0 <= p <= spec.N for p in pts):
        raise ValueError("point outside 0..N")
    K = kernel(spec)
    return float(np.linalg.det(K[np.ix_(pts, pts)]))


def log_partition_function(spec: BrickLatticeSpec) -> float:
    e = spec.log_activations()
    return spec.M * (2 * spec.N + 1) * math.log(spec.z) + float(
        np.logaddexp(0.0, e).sum()
    )


def partition_function(spec: BrickLatticeSpec) -> float:
    return math.exp(log_partition_function(spec))


def free_energy(spec: BrickLatticeSpec) -> float:
    """Finite-size free energy per vertex, log Z / (2M(2N+1))."""
    return log_partition_function(spec) / spec.num_vertices


def free_energy_limit(z: float, w: float) -> float:
    """M, N -> infinity limit: (1/2) log z for w/z < 1/2, else
    (1/2) log z + (1/pi) * integral_0^{pi theta0 / 2} log((2w/z) cos s) ds
    with theta0 = (2/pi) arccos(z / 2w).

    The 1/pi prefactor follows from the mode Riemann sum of the finite-size
    product (a sometimes-quoted 1/(2 pi) variant misses the finite-size
    values by a factor of two on the activated branch)."""
    if z <= 0 or w <= 0:
        raise ValueError("weights must be positive")
    r = w / z
    if abs(r - 0.5) < 1e-12:
        raise ValueError("w/z = 1/2 is the critical point; the limit is not smooth there")
    if r < 0.5:
        return 0.5 * math.log(z)
    theta0 = (2.0 / math.pi) * math.acos(z / (2 * w))
    val, _err = quad(lambda s: math.log(2 * r * math.cos(s)), 0.0,
                     math.pi * theta0 / 2.0, limit=200)
    return 0.5 * math.log(z) + val / math.pi


# ---------------------------------------------------------------------------
# Exact polynomial via non-intersecting-walk transfer counting
# ---------------------------------------------------------------------------


def partition_polynomial(M: int, N: int) -> dict[int, int]:
    """Exact path counts {L: G_L}: number of families of L non-intersecting
    periodic walks.  Z = sum_L G_L z^(M(2N+1)-2ML) w^(2ML)."""
    if (N + 1) * 2 ** (N + 1) * 2 * M > 5_000_000:
        raise ValueError("transfer counting too large")
    heights = {0: [2 * k for k in range(N + 1)], 1: [2 * k + 1 for k in range(N)]}
    counts: dict[int, int] = {}
    for L in range(0, N + 1):
        starts = list(itertools.combinations(heights[0], L))
        total = 0
        for s0 in starts:
            # count closed evolutions returning to s0 after 2M steps
            layer = {s0: 1}
            for t in range(2 * M):
                par = (t + 1) % 2
                nxt: dict[tuple, int] = {}
                allowed = heights[par]
                lo, hi = (allowed[0], allowed[-1]) if allowed else (0, 0)
                for state, cnt in layer.items():
                    for signs in itertools.product((-1, 1), repeat=L):
                        cand = tuple(v + d for v, d in zip(state, signs))
                        if any(u >= v for u, v in zip(cand, cand[1:])):
                            continue
                        if cand and (cand[0] < lo or cand[-1] > hi):
                            continue
                        nxt[cand] = nxt.get(cand, 0) + cnt
                layer = nxt
            total += layer.get(s0, 0)
        counts[L] = total
    return counts


def partition_function_exact(M: int, N: int, z: Fraction, w: Fraction) -> Fraction:
    z, w = Fraction(z), Fraction(w)
    GL = partition_polynomial(M, N)
    return sum(
        Fraction(g) * z ** (M * (2 * N + 1) - 2 * M * L) * w ** (2 * M * L)
        for L, g in GL.items()
    )


# ---------------------------------------------------------------------------
# Brute-force enumeration and the path bijection
# ---------------------------------------------------------------------------

DimerCover = tuple  # sorted tuple of ((j1,k1),(j2,k2),kind) edges
CylindricPathFamily = tuple  # tuple of per-line sorted height tuples, length 2M


def brick_edges(M: int, N: int) -> list[tuple]:
    edges = set()
    for j in range(2 * M):
        for k in range(2 * N):
            edges.add(((j, k), (j, k + 1), "v"))
    for j in range(M):
        for k in range(N + 1):
            a, b = (2 * j, 2 * k), ((2 * j + 1) % (2 * M), 2 * k)
            edges.add((min(a, b), max(a, b), "h"))
        for k in range(N):
            a, b = ((2 * j + 1) % (2 * M), 2 * k + 1), ((2 * j + 2) % (2 * M), 2 * k + 1)
            edges.add((min(a, b), max(a, b), "h"))
    return sorted(edges)


def enumerate_dimers(spec: BrickLatticeSpec) -> list[tuple[DimerCover, float]]:
    """All perfect matchings with their weights; refuses past 24 vertices."""
    M, N = spec.M, spec.N
    if spec.num_vertices > 24:
        raise ValueError(
            f"{spec.num_vertices} vertices exceeds the enumeration limit of 24"
        )
    verts = [(j, k) for j in range(2 * M) for k in range(2 * N + 1)]
    adj: dict[tuple, list] = {v: [] for v in verts}
    for (a, b, kind) in brick_edges(M, N):
        adj[a].append((b, kind))
        adj[b].append((a, kind))
    out: list[tuple[DimerCover, float]] = []
    used: set = set()
    cover: list = []

    def bt(i: int) -> None:
        while i < len(verts) and verts[i] in used:
            i += 1
        if i == len(verts):
            nh = sum(1 for e in cover if e[2] == "h")
            nv = len(cover) - nh
            out.append((tuple(sorted(cover)), spec.z**nh * spec.w**nv))
            return
        v = verts[i]
        for (u, kind) in adj[v]:
            if u not in used:
                used.add(v)
                used.add(u)
                cover.append((min(v, u), max(v, u), kind))
                bt(i + 1)
                cover.pop()
                used.discard(v)
                used.discard(u)

    bt(0)
    return out


def cover_to_paths(cover: DimerCover, M: int, N: int) -> CylindricPathFamily:
    """Read the non-intersecting periodic walks off a cover.

    The vertical dimers in vertex column j form the walk steps between lines
    t = j-1 and t = j (mod 2M); on line t the walk heights have parity t, so
    the endpoint of each step lying on a given line is determined by parity.
    """
    lines: list[set[int]] = [set() for _ in range(2 * M)]
    for (a, b, kind) in cover:
        if kind != "v":
            continue
        (j, k), (_, k2) = a, b
        lo, hi = min(k, k2), max(k, k2)
        tprev = (j - 1) % (2 * M)
        hprev = lo if lo % 2 == tprev % 2 else hi
        hnext = hi if hprev == lo else lo
        lines[tprev].add(hprev)
        lines[j % (2 * M)].add(hnext)
    return tuple(tuple(sorted(s)) for s in lines)


def _paths_to_vertical_edges(lines: CylindricPathFamily, M: int) -> set[tuple]:
    """Vertical dimer set from a path family.  Non-intersecting walks keep
    their vertical order, so the i-th lowest occupied height on one line
    steps to the i-th lowest on the next."""
    edges: set[tuple] = set()
    for j in range(2 * M):
        tprev = (j - 1) % (2 * M)
        prev = sorted(lines[tprev])
        here = sorted(lines[j % (2 * M)])
        if len(prev) != len(here):
            raise ValueError("inconsistent line occupancies")
        for hp, hn in zip(prev, here):
            if abs(hp - hn) != 1:
                raise ValueError("path step is not +-1")
            lo = min(hp, hn)
            edges.add(((j, lo), (j, lo + 1), "v"))
    return edges


def paths_to_cover(lines: CylindricPathFamily, M: int, N: int) -> DimerCover:
    """Inverse of :func:`cover_to_paths`: vertical dimers from the steps,
    horizontal dimers on everything the walks do not visit."""
    vedges = _paths_to_vertical_edges(lines, M)
    covered_vertices: set[tuple] = set()
    for (a, b, _k) in vedges:
        covered_vertices.add(a)
        covered_vertices.add(b)
    cover = list(vedges)
    for (a, b, kind) in brick_edges(M, N):
        if kind != "h":
            continue
        if a not in covered_vertices and b not in covered_vertices:
            cover.append((a, b, "h"))
            covered_vertices.add(a)
            covered_vertices.add(b)
    if len(covered_vertices) != 2 * M * (2 * N + 1):
        raise ValueError("path family does not induce a perfect matching")
    return tuple(sorted(cover))
