"""Cascade of polynuclear-type growth levels equivalent to RSK.

An n x n nonnegative integer matrix drives n stacked height curves.  At time
t, w(i, j) labelled unit squares (left side a_i, right side b_j, where
i = (t+x+1)/2, j = (t-x+1)/2) drop onto level 1 at position x = i - j.  Each
time step, per level: every left vertical side moves one unit left and every
right side one unit right; where a right side crosses a left side the
overlapping label pairs annihilate and reappear as squares on the next level
down.   The distance between a left and a right side is always odd, so sides
never collide, and the level curves never touch.

After 2n-1 steps the curve heights at the origin give the partition
lambda_j = h_j(0) + j - 1; the left (right) vertical sides have migrated to
the fixed positions x = 2(j-n) - 1/2 (x = 2(n-k) + 1/2) carrying the a_j
(b_k) labels, i.e. the final state is a pair of non-intersecting labelled
up/right path families -- a pair of semistandard tableaux.  The growth is a
bijection: the reverse sweep (sides move back, width-one peaks pop their
squares up a level) reconstructs the matrix exactly.

Schur polynomials come from the Jacobi-Trudi determinant of complete
homogeneous symmetric polynomials, with an exact-rational mode.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .growth import lpp_value

__all__ = [
    "InvalidCascadeError",
    "Cascade",
    "CascadeResult",
    "cascade_grow",
    "cascade_invert",
    "complete_homogeneous",
    "schur_poly",
    "schur_measure_prob",
    "sample_schur_matrix",
    "height_equals_lpp",
    "hook_content_product",
]


class InvalidCascadeError(ValueError):
    """A labelled configuration that is not in the image of the growth map."""


@dataclass
class _Side:
    """A vertical run of labelled unit sides at half-integer position pos2/2.

    kind 'L' for up-steps (a-labels), 'R' for down-steps (b-labels); labels
    are stored bottom-up.
    """

    pos2: int
    kind: str
    labels: list[int] = field(default_factory=list)


class _Level:
    """One height curve: sparse list of sides, flat baseline at -(k-1)."""

    def __init__(self, base: int):
        self.base = base
        self.sides: dict[int, _Side] = {}

    def sorted_sides(self) -> list[_Side]:
        return [self.sides[p] for p in sorted(self.sides)]

    def height(self, x: int) -> int:
        """Height of the curve on the plateau containing site x."""
        h = self.base
        for s in self.sorted_sides():
            if s.pos2 > 2 * x:
                break
            h += len(s.labels) if s.kind == "L" else -len(s.labels)
        return h

    def check_alternation(self) -> None:
        sides = self.sorted_sides()
        for s, t in zip(sides, sides[1:]):
            if s.kind == t.kind:
                continue
            if (t.pos2 - s.pos2) % 4 != 2:
                raise AssertionError(
                    f"even gap between {s.kind}@{s.pos2/2} and {t.kind}@{t.pos2/2}"
                )
        up = sum(len(s.labels) for s in sides if s.kind == "L")
        dn = sum(len(s.labels) for s in sides if s.kind == "R")
        if up != dn:
            raise AssertionError("curve does not return to its baseline")

    def add_column(self, x: int, squares: list[tuple[int, int]]) -> None:
        """Stack labelled squares on top of the column at site x."""
        if not squares:
            return
        lf = self.sides.setdefault(2 * x - 1, _Side(2 * x - 1, "L"))
        rt = self.sides.setdefault(2 * x + 1, _Side(2 * x + 1, "R"))
        if lf.kind != "L" or rt.kind != "R":
            raise AssertionError(f"side type clash while stacking at x={x}")
        lf.labels.extend(a for (a, _b) in squares)
        rt.labels.extend(b for (_a, b) in squares)


@dataclass
class Cascade:
    """The full stack of labelled curves, evolvable forward and backward."""

    n: int
    levels: list[_Level]
    time: int = 0

    @classmethod
    def initial(cls, n: int) -> "Cascade":
        return cls(n=n, levels=[_Level(-(k - 1)) for k in range(1, n + 1)])

    # -- forward ----------------------------------------------------------

    def _h_move(self, level: _Level) -> dict[int, list[tuple[int, int]]]:
        """Move sides outward; crossings annihilate bottom labels pairwise
        and emit squares for the next level, keyed by site."""
        emitted: dict[int, list[tuple[int, int]]] = {}
        sides = level.sorted_sides()
        new: dict[int, _Side] = {}
        i = 0
        while i < len(sides):
            s = sides[i]
            nxt = sides[i + 1] if i + 1 < len(sides) else None
            if (
                s.kind == "R"
                and nxt is not None
                and nxt.kind == "L"
                and nxt.pos2 - s.pos2 == 2
            ):
                # the pair swaps order; overlapping bottom labels annihilate
                x = (s.pos2 + 1) // 2
                z = min(len(s.labels), len(nxt.labels))
                emitted[x] = [(nxt.labels[j], s.labels[j]) for j in range(z)]
                rest_r = s.labels[z:]
                rest_l = nxt.labels[z:]
                if rest_l:
                    new[s.pos2] = _Side(s.pos2, "L", rest_l)
                if rest_r:
                    new[nxt.pos2] = _Side(nxt.pos2, "R", rest_r)
                i += 2
                continue
            p = s.pos2 - 2 if s.kind == "L" else s.pos2 + 2
            if p in new:
                raise AssertionError("side collision during horizontal growth")
            new[p] = _Side(p, s.kind, s.labels)
            i += 1
        level.sides = new
        return emitted

    def forward_step(self, deposits: dict[int, list[tuple[int, int]]]) -> None:
        """One time step; ``deposits`` holds the level-1 squares keyed by
        site x, each square a pair (a-index, b-index)."""
        self.time += 1
        incoming = deposits
        for lev in self.levels:
            emitted = self._h_move(lev)
            for x, squares in incoming.items():
                lev.add_column(x, squares)
            incoming = emitted
        if incoming:
            raise AssertionError(
                f"level-{self.n} crossings emitted squares at t={self.time}"
            )

    # -- backward ---------------------------------------------------------

    def _h_unmove(self, level: _Level) -> dict[int, list[tuple[int, int]]]:
        """Reverse move: width-one peaks pop their top label pairs (the
        squares that vertical growth stacked), everything else slides back."""
        popped: dict[int, list[tuple[int, int]]] = {}
        sides = level.sorted_sides()
        new: dict[int, _Side] = {}
        i = 0
        while i < len(sides):
            s = sides[i]
            nxt = sides[i + 1] if i + 1 < len(sides) else None
            if (
                s.kind == "L"
                and nxt is not None
                and nxt.kind == "R"
                and nxt.pos2 - s.pos2 == 2
            ):
                x = (s.pos2 + 1) // 2
                z = min(len(s.labels), len(nxt.labels))
                popped[x] = [
                    (s.labels[len(s.labels) - z + j], nxt.labels[len(nxt.labels) - z + j])
                    for j in range(z)
                ]
                rest_l = s.labels[: len(s.labels) - z]
                rest_r = nxt.labels[: len(nxt.labels) - z]
                if rest_l:
                    new[nxt.pos2] = _Side(nxt.pos2, "L", rest_l)
                if rest_r:
                    new[s.pos2] = _Side(s.pos2, "R", rest_r)
                i += 2
                continue
            p = s.pos2 + 2 if s.kind == "L" else s.pos2 - 2
            if p in new:
                raise AssertionError("side collision during reverse growth")
            new[p] = _Side(p, s.kind, s.labels)
            i += 1
        level.sides = new
        return popped

    def _reinsert(self, level: _Level, x: int, squares: list[tuple[int, int]]) -> None:
        """Restore annihilated label pairs at the bottom of the sides around
        site x (undoing a forward crossing)."""
        rt = level.sides.setdefault(2 * x - 1, _Side(2 * x - 1, "R"))
        lf = level.sides.setdefault(2 * x + 1, _Side(2 * x + 1, "L"))
        if rt.kind != "R" or lf.kind != "L":
            raise InvalidCascadeError(f"cannot restore a crossing at x={x}")
        rt.labels[:0] = [b for (_a, b) in squares]
        lf.labels[:0] = [a for (a, _b) in squares]

    def backward_step(self) -> dict[int, list[tuple[int, int]]]:
        """One reverse time step; returns the level-1 squares taken out."""
        restore: dict[int, list[tuple[int, int]]] = {}
        out: dict[int, list[tuple[int, int]]] = {}
        for lev in reversed(self.levels):
            popped = self._h_unmove(lev)
            for x, squares in restore.items():
                self._reinsert(lev, x, squares)
            restore = popped
        out = restore
        self.time -= 1
        return out

    # -- invariants and extraction ----------------------------------------

    def check_invariants(self, span: int | None = None) -> None:
        for lev in self.levels:
            lev.check_alternation()
        span = span or (2 * self.n + 2)
        for upper, lower in zip(self.levels, self.levels[1:]):
            for x in range(-span, span + 1):
                if upper.height(x) < lower.height(x) + 1:
                    raise AssertionError(
                        f"levels touch at x={x}, t={self.time}"
                    )

    def heights_at_origin(self) -> list[int]:
        return [lev.height(0) for lev in self.levels]

    def partition(self) -> tuple[int, ...]:
        lam = tuple(h + j for j, h in enumerate(self.heights_at_origin()))
        if any(a < b for a, b in zip(lam, lam[1:])) or (lam and lam[-1] < 0):
            raise InvalidCascadeError(f"origin heights do not give a partition: {lam}")
        return lam


def _deposits_at(W: np.ndarray, t: int) -> dict[int, list[tuple[int, int]]]:
    n = W.shape[0]
    out: dict[int, list[tuple[int, int]]] = {}
    for i in range(1, n + 1):
        j = t + 1 - i
        if not 1 <= j <= n:
            continue
        m = int(W[i - 1, j - 1])
        if m:
            out[i - j] = [(i, j)] * m
    return out


@dataclass
class CascadeResult:
    cascade: Cascade
    partition: tuple[int, ...]
    left_tableau: list[Counter]   # row k -> multiplicity of each a-index
    right_tableau: list[Counter]
    level1_trace: dict[tuple[int, int], int]  # (x, t) -> level-1 height


def cascade_grow(W, check: bool = True) -> CascadeResult:
    """Run the growth to completion and read off the final configuration."""
    W = np.asarray(W, dtype=np.int64)
    n = W.shape[0]
    if W.ndim != 2 or W.shape != (n, n) or (W < 0).any():
        raise ValueError("W must be a square nonnegative integer matrix")
    c = Cascade.initial(n)
    trace: dict[tuple[int, int], int] = {}
    for t in range(1, 2 * n):
        c.forward_step(_deposits_at(W, t))
        if check:
            c.check_invariants()
        for x in range(-n, n + 1):
            trace[(x, t)] = c.levels[0].height(x)
    lam = c.partition()

    left, right = [], []
    for k, lev in enumerate(c.levels, start=1):
        lcount: Counter = Counter()
        rcount: Counter = Counter()
        for s in lev.sorted_sides():
            if s.kind == "L":
                j = (s.pos2 + 1 + 4 * n) // 4  # x = 2(j-n) - 1/2
                if s.pos2 != 4 * (j - n) - 1:
                    raise InvalidCascadeError(f"stray left side at {s.pos2 / 2}")
                for a in s.labels:
                    if a != j:
                        raise InvalidCascadeError("left label off its column")
                    lcount[a] += 1
            else:
                kk = n - (s.pos2 - 1) // 4
                if s.pos2 != 4 * (n - kk) + 1:
                    raise InvalidCascadeError(f"stray right side at {s.pos2 / 2}")
                for b in s.labels:
                    if b != kk:
                        raise InvalidCascadeError("right label off its column")
                    rcount[b] += 1
        left.append(lcount)
        right.append(rcount)
    return CascadeResult(cascade=c, partition=lam, left_tableau=left,
                         right_tableau=right, level1_trace=trace)


def cascade_invert(result_or_cascade, check: bool = True) -> np.ndarray:
    """Reconstruct the integer matrix from a final cascade state."""
    c = result_or_cascade.cascade if isinstance(result_or_cascade, CascadeResult) \
        else result_or_cascade
    n = c.n
    if c.time != 2 * n - 1:
        raise InvalidCascadeError(f"cascade is at time {c.time}, expected {2 * n - 1}")
    W = np.zeros((n, n), dtype=np.int64)
    for t in range(2 * n - 1, 0, -1):
        out = c.backward_step()
        if check:
            c.check_invariants()
        for x, squares in out.items():
            i2, r1 = divmod(t + x + 1, 2)
            j2, r2 = divmod(t - x + 1, 2)
            if r1 or r2 or not (1 <= i2 <= n and 1 <= j2 <= n):
                raise InvalidCascadeError(f"square extracted at invalid (x,t)=({x},{t})")
            for (a, b) in squares:
                if (a, b) != (i2, j2):
                    raise InvalidCascadeError(
                        f"labels ({a},{b}) inconsistent with position ({i2},{j2})"
                    )
            W[i2 - 1, j2 - 1] += len(squares)
    for lev in c.levels:
        if lev.sides:
            raise InvalidCascadeError("leftover sides after full reversal")
    return W


# ---------------------------------------------------------------------------
# Schur polynomials and the Schur measure
# ---------------------------------------------------------------------------


def complete_homogeneous(max_degree: int, a) -> list:
    """h_0, ..., h_max_degree of the given variables, by the one-variable-at-
    a-time prefix recurrence.  Exact when the variables are Fractions."""
    zero = Fraction(0) if any(isinstance(v, Fraction) for v in a) else 0.0
    h = [zero] * (max_degree + 1)
    h[0] = zero + 1
    for v in a:
        for m in range(1, max_degree + 1):
            h[m] = h[m] + v * h[m - 1]
    return h


def _det_exact(M: list[list[Fraction]]) -> Fraction:
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                for cc in range(col, n):
                    M[r][cc] -= f * M[col][cc]
    return det


def schur_poly(lam, a, exact: bool = False):
    """Jacobi-Trudi: s_lambda = det(h_{lambda_j - j + k}) over 1 <= j,k <= N,
    N = number of variables; h_m = 0 for m < 0."""
    lam = tuple(lam)
    if any(x < y for x, y in zip(lam, lam[1:])) or any(x < 0 for x in lam):
        raise ValueError("lambda must be a partition")
    N = len(a)
    if len([x for x in lam if x > 0]) > N:
        return Fraction(0) if exact else 0.0
    lam = lam + (0,) * (N - len(lam))
    if exact:
        a = [Fraction(v) for v in a]
    h = complete_homogeneous(lam[0] + N, a)
    zero = h[0] - h[0]

    def hh(m):
        return zero if m < 0 else h[m]

    M = [[hh(lam[j] - (j + 1) + (k + 1)) for k in range(N)] for j in range(N)]
    if exact:
        return _det_exact(M)
    return float(np.linalg.det(np.array(M, dtype=float)))


def hook_content_product(lam, m: int) -> Fraction:
    """s_lambda(1^m) as the ratio product over pairs i < j <= m of
    (mu_i - mu_j + j - i) / (j - i), mu = lambda padded to length m."""
    mu = tuple(lam) + (0,) * (m - len(lam))
    if len(mu) != m:
        raise ValueError("lambda longer than m")
    out = Fraction(1)
    for i in range(m):
        for j in range(i + 1, m):
            out *= Fraction(mu[i] - mu[j] + j - i, j - i)
    return out


def schur_measure_prob(lam, a, b, exact: bool = False):
    """P[lambda] = prod_{j,k} (1 - a_j b_k) * s_lambda(a) s_lambda(b)."""
    if len(a) != len(b):
        raise ValueError("a and b must have equal length")
    if any(v <= 0 for v in list(a) + list(b)):
        raise ValueError("parameters must be positive")
    if any(ai * bk >= 1 for ai in a for bk in b):
        raise ValueError("need a_i b_j < 1 for all pairs")
    if exact:
        a = [Fraction(v) for v in a]
        b = [Fraction(v) for v in b]
        pref = Fraction(1)
    else:
        pref = 1.0
    for ai in a:
        for bk in b:
            pref *= 1 - ai * bk
    return pref * schur_poly(lam, a, exact) * schur_poly(lam, b, exact)


def sample_schur_matrix(n: int, a, b, rng: np.random.Generator) -> np.ndarray:
    """W with independent geometric entries, P[w(j,k) = m] proportional to
    (a_j b_k)^m."""
    if len(a) != n or len(b) != n:
        raise ValueError("parameter vectors must have length n")
    W = np.empty((n, n), dtype=np.int64)
    u = rng.random((n, n))
    for j in range(n):
        for k in range(n):
            r = a[j] * b[k]
            if not 0 < r < 1:
                raise ValueError("need 0 < a_j b_k < 1")
            W[j, k] = int(math.floor(math.log(u[j, k]) / math.log(r)))
    return W


def height_equals_lpp(W) -> bool:
    """Check G(M,N) = h_1(M-N, M+N-1) at every position of the matrix."""
    W = np.asarray(W, dtype=np.int64)
    n = W.shape[0]
    res = cascade_grow(W, check=False)
    G = lpp_value(W)
    for M in range(1, n + 1):
        for N in range(1, n + 1):
            if res.level1_trace[(M - N, M + N - 1)] != G[M - 1, N - 1]:
                return False
    return True
