"""Aztec diamond geometry.

The Aztec diamond of order n is the union of the lattice unit squares lying
inside |x| + |y| <= n + 1.  This module provides the combinatorial layer on
which everything else is built:

* domino classification into the four compass kinds N/S/W/E,
* the bijection between tilings and families of n non-intersecting DR-paths
  (two complementary flavors, living in two sheared coordinate systems),
* zig-zag particle/hole configurations read off a tiling at level r,
* the domino height function and its particle-counting formula,
* the polar-region decomposition (frozen brick-wall corners vs. the
  temperate zone).

Squares are addressed by their lower-left corner.  The checkerboard colouring
is fixed so that the leftmost square of each row in the top half is white,
which works out to: square (x, y) is white iff x + y + n is even.

Coordinate systems for the path families:

* CS-I has origin (n+1, 1/2) and basis e = (-1,-1), f = (-1,1).
* CS-II has origin (-n-1, -1/2) and basis e = (1,1), f = (1,-1).

Path vertices sit at integer CS coordinates, i.e. at half-integer heights in
the original frame; we store doubled y-coordinates internally so everything
stays in exact integer arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "GeometryError",
    "TilingError",
    "Domino",
    "Tiling",
    "ParticleConfig",
    "HeightField",
    "DRPathFamily",
    "AztecDiamond",
    "square_in_diamond",
    "square_is_white",
    "diamond_squares",
    "classify_domino",
    "extract_dr_paths",
    "dr_paths_to_tiling",
    "zigzag_config",
    "zigzag_from_paths",
    "height_function",
    "height_from_particles",
    "polar_regions",
    "tiling_to_json",
    "tiling_from_json",
]


class GeometryError(ValueError):
    """A placement or index that does not fit the diamond."""


class TilingError(ValueError):
    """A set of dominoes that is not a valid tiling."""


def square_in_diamond(x: int, y: int, n: int) -> bool:
    """True iff the unit square with lower-left corner (x, y) lies in A_n."""
    return max(abs(x), abs(x + 1)) + max(abs(y), abs(y + 1)) <= n + 1


def square_is_white(x: int, y: int, n: int) -> bool:
    return (x + y + n) % 2 == 0


def diamond_squares(n: int) -> Iterator[tuple[int, int]]:
    """All squares of A_n, bottom-to-top then left-to-right."""
    for y in range(-n - 1, n + 1):
        for x in range(-n - 1, n + 1):
            if square_in_diamond(x, y, n):
                yield (x, y)


@dataclass(frozen=True)
class AztecDiamond:
    order: int

    def squares(self) -> list[tuple[int, int]]:
        return list(diamond_squares(self.order))

    def num_squares(self) -> int:
        n = self.order
        return 2 * n * (n + 1)


@dataclass(frozen=True, order=True)
class Domino:
    """A domino anchored at its lower-left corner."""

    x: int
    y: int
    horizontal: bool

    def squares(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if self.horizontal:
            return ((self.x, self.y), (self.x + 1, self.y))
        return ((self.x, self.y), (self.x, self.y + 1))


def classify_domino(d: Domino, n: int) -> str:
    """Compass kind of a domino placed in A_n.

    A horizontal domino is north-going (N) iff its leftmost square is white;
    a vertical domino is west-going (W) iff its upper square is white.
    """
    for (sx, sy) in d.squares():
        if not square_in_diamond(sx, sy, n):
            raise GeometryError(f"domino {d} does not fit inside A_{n}")
    if d.horizontal:
        return "N" if square_is_white(d.x, d.y, n) else "S"
    return "W" if square_is_white(d.x, d.y + 1, n) else "E"


@dataclass(frozen=True)
class Tiling:
    order: int
    dominoes: tuple[Domino, ...]

    def __post_init__(self):
        object.__setattr__(self, "dominoes", tuple(sorted(self.dominoes)))

    def validate(self) -> None:
        n = self.order
        seen: set[tuple[int, int]] = set()
        for d in self.dominoes:
            for sq in d.squares():
                if not square_in_diamond(sq[0], sq[1], n):
                    raise TilingError(f"square {sq} of {d} outside A_{n}")
                if sq in seen:
                    raise TilingError(f"square {sq} covered twice")
                seen.add(sq)
        if len(seen) != 2 * n * (n + 1):
            raise TilingError(
                f"covered {len(seen)} squares, A_{n} has {2 * n * (n + 1)}"
            )

    def vertical_count(self) -> int:
        return sum(1 for d in self.dominoes if not d.horizontal)

    def kinds(self) -> dict[Domino, str]:
        return {d: classify_domino(d, self.order) for d in self.dominoes}

    def square_map(self) -> dict[tuple[int, int], Domino]:
        m: dict[tuple[int, int], Domino] = {}
        for d in self.dominoes:
            for sq in d.squares():
                m[sq] = d
        return m

    def key(self) -> tuple:
        """Hashable canonical form, for frequency counting."""
        return (self.order, self.dominoes)


@dataclass(frozen=True)
class ParticleConfig:
    """Strictly increasing site positions on the window {0, ..., window}."""

    window: int
    positions: tuple[int, ...]

    def __post_init__(self):
        pos = tuple(self.positions)
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError(f"positions not strictly increasing: {pos}")
        if pos and (pos[0] < 0 or pos[-1] > self.window):
            raise ValueError(f"positions {pos} leave window [0,{self.window}]")
        object.__setattr__(self, "positions", pos)

    def __len__(self) -> int:
        return len(self.positions)


# ---------------------------------------------------------------------------
# DR-paths
# ---------------------------------------------------------------------------

# Marked segment on each domino kind, as ((dx1, 2*dy1), (dx2, 2*dy2)) offsets
# from the anchor, with doubled y so endpoints stay integral.
_SEGMENT_I = {"S": ((0, 1), (2, 1)), "W": ((0, 1), (1, 3)), "E": ((0, 3), (1, 1))}
# Type II: N gets the horizontal mid-segment, S is unmarked, and the W/E
# markings are interchanged relative to type I.  This is the convention under
# which particle and hole configurations are exact complements (see tests).
_SEGMENT_II = {"N": ((0, 1), (2, 1)), "W": ((0, 3), (1, 1)), "E": ((0, 1), (1, 3))}


@dataclass(frozen=True)
class DRPathFamily:
    """n non-intersecting lattice paths encoding a tiling.

    Paths are stored in their own coordinate system (CS-I or CS-II), where
    they take steps (1,0), (0,1) and (1,1).  Path k runs from (k, 0) to
    (n+1, n+1-k); path 1 is the topmost one in the original frame.
    """

    flavor: str  # "typeI" | "typeII"
    order: int
    paths: tuple[tuple[tuple[int, int], ...], ...]

    def validate(self) -> None:
        n = self.order
        if len(self.paths) != n:
            raise ValueError(f"expected {n} paths, got {len(self.paths)}")
        for k, path in enumerate(self.paths, start=1):
            if path[0] != (k, 0) or path[-1] != (n + 1, n + 1 - k):
                raise ValueError(f"path {k} has endpoints {path[0]}..{path[-1]}")
            for p, q in zip(path, path[1:]):
                step = (q[0] - p[0], q[1] - p[1])
                if step not in ((1, 0), (0, 1), (1, 1)):
                    raise ValueError(f"bad step {step} in path {k}")
        occupied: set[tuple[int, int]] = set()
        for path in self.paths:
            for p in path:
                if p in occupied:
                    raise ValueError(f"paths intersect at {p}")
                occupied.add(p)


def _to_cs(x: int, y2: int, n: int, flavor: str) -> tuple[int, int]:
    """Original point (x, y2/2) -> CS coordinates.  y2 must be odd."""
    if flavor == "typeI":
        # x = n+1 - xi - yi,  y = 1/2 - xi + yi
        s = 2 * (n + 1 - x)  # 2*(xi + yi)
        d = 1 - y2           # 2*(xi - yi)
        xi, rem1 = divmod(s + d, 4)
        yi, rem2 = divmod(s - d, 4)
    else:
        # x = -n-1 + xi + yi,  y = -1/2 + xi - yi
        s = 2 * (x + n + 1)
        d = y2 + 1
        xi, rem1 = divmod(s + d, 4)
        yi, rem2 = divmod(s - d, 4)
    if rem1 or rem2:
        raise GeometryError(f"point ({x}, {y2}/2) is not a CS lattice point")
    return (xi, yi)


def _from_cs(xi: int, yi: int, n: int, flavor: str) -> tuple[int, int]:
    """CS point -> (x, doubled y) in the original frame."""
    if flavor == "typeI":
        return (n + 1 - xi - yi, 1 - 2 * xi + 2 * yi)
    return (-n - 1 + xi + yi, -1 + 2 * xi - 2 * yi)


def extract_dr_paths(t: Tiling, flavor: str = "typeI") -> DRPathFamily:
    """Read the family of n non-intersecting DR-paths off a tiling."""
    if flavor not in ("typeI", "typeII"):
        raise ValueError(f"unknown flavor {flavor!r}")
    t.validate()
    n = t.order
    table = _SEGMENT_I if flavor == "typeI" else _SEGMENT_II
    kinds = t.kinds()

    # Segments keyed by their start point, oriented in the direction of
    # increasing CS x (rightward for type II, leftward for type I in the
    # original frame).
    nxt: dict[tuple[int, int], tuple[int, int]] = {}
    for d, kind in kinds.items():
        seg = table.get(kind)
        if seg is None:
            continue
        (dx1, dy1), (dx2, dy2) = seg
        p1 = (d.x + dx1, 2 * d.y + dy1)
        p2 = (d.x + dx2, 2 * d.y + dy2)
        if flavor == "typeI":
            p1, p2 = p2, p1  # traverse right-to-left
        nxt[p1] = p2

    paths = []
    for k in range(1, n + 1):
        cur = _from_cs(k, 0, n, flavor)
        goal = _from_cs(n + 1, n + 1 - k, n, flavor)
        pts = [cur]
        while cur != goal:
            if cur not in nxt:
                raise TilingError(f"path {k} ({flavor}) breaks at {cur}")
            cur = nxt.pop(cur)
            pts.append(cur)
        paths.append(tuple(_to_cs(x, y2, n, flavor) for (x, y2) in pts))
    if nxt:
        raise TilingError(f"{len(nxt)} marked segments not used by any path")
    fam = DRPathFamily(flavor=flavor, order=n, paths=tuple(paths))
    fam.validate()
    return fam


def dr_paths_to_tiling(family: DRPathFamily) -> Tiling:
    """Inverse of :func:`extract_dr_paths`: fill marked dominoes along the
    paths, then cover the rest with the unmarked kind."""
    family.validate()
    n = family.order
    flavor = family.flavor
    dominoes: list[Domino] = []

    for path in family.paths:
        for p, q in zip(path, path[1:]):
            step = (q[0] - p[0], q[1] - p[1])
            x1, y21 = _from_cs(p[0], p[1], n, flavor)
            x2, y22 = _from_cs(q[0], q[1], n, flavor)
            if flavor == "typeI":
                # traversal right-to-left in the original frame
                if step == (1, 1):    # S-domino, horizontal mid segment
                    dominoes.append(Domino(x2, (y22 - 1) // 2, True))
                elif step == (1, 0):  # W-domino
                    dominoes.append(Domino(x2, (y22 - 1) // 2, False))
                else:                 # E-domino
                    dominoes.append(Domino(x2, (y22 - 3) // 2, False))
            else:
                if step == (1, 1):    # N-domino
                    dominoes.append(Domino(x1, (y21 - 1) // 2, True))
                elif step == (1, 0):  # E-domino carries the rising mark
                    dominoes.append(Domino(x1, (y21 - 1) // 2, False))
                else:                 # W-domino carries the falling mark
                    dominoes.append(Domino(x1, (y21 - 3) // 2, False))

    covered: set[tuple[int, int]] = set()
    for d in dominoes:
        covered.update(d.squares())

    # Fill the complement: horizontal dominoes anchored on the square whose
    # colour makes them the unmarked kind (N for type I, S for type II).
    want_white_anchor = flavor == "typeI"
    for (x, y) in diamond_squares(n):
        if (x, y) in covered:
            continue
        if square_is_white(x, y, n) != want_white_anchor:
            continue
        partner = (x + 1, y)
        if partner in covered or not square_in_diamond(*partner, n):
            raise TilingError(f"cannot complete tiling at square ({x},{y})")
        dominoes.append(Domino(x, y, True))
        covered.add((x, y))
        covered.add(partner)

    t = Tiling(order=n, dominoes=tuple(dominoes))
    t.validate()
    return t


# ---------------------------------------------------------------------------
# Zig-zag configurations
# ---------------------------------------------------------------------------


def zigzag_config(t: Tiling, r: int) -> tuple[ParticleConfig, ParticleConfig]:
    """Particle and hole configuration at level r.

    Walk the chain of white squares with corners Q_k^r = (-r+k, n+1-k-r),
    k = 0..n+1.  The k-th white square contributes a particle at n-k when it
    is covered by an S- or W-domino, and a hole at n-k when covered by an
    N- or E-domino.  Particles and holes partition {0, ..., n}.
    """
    n = t.order
    if not 1 <= r <= n:
        raise GeometryError(f"level r={r} out of range 1..{n}")
    sq_map = t.square_map()
    particles, holes = [], []
    for k in range(n + 1):
        sq = (k - r, n - r - k)  # lower-left corner of the k-th white square
        d = sq_map[sq]
        kind = classify_domino(d, n)
        if kind in ("S", "W"):
            particles.append(n - k)
        else:
            holes.append(n - k)
    particles.reverse()
    holes.reverse()
    if len(particles) != r:
        raise TilingError(f"expected {r} particles, found {len(particles)}")
    return (
        ParticleConfig(window=n, positions=tuple(particles)),
        ParticleConfig(window=n, positions=tuple(holes)),
    )


def zigzag_from_paths(t: Tiling, r: int) -> tuple[ParticleConfig, ParticleConfig]:
    """Same configurations obtained as the last positions of the DR-paths on
    the cross-section column (particles from type I, holes from type II)."""
    n = t.order
    fam1 = extract_dr_paths(t, "typeI")
    particles = sorted(
        max(y for (x, y) in path if x == r)
        for path in fam1.paths[:r]  # paths starting at (k,0), k <= r
    )
    fam2 = extract_dr_paths(t, "typeII")
    holes = sorted(
        n - max(y for (x, y) in path if x == n + 1 - r)
        for path in fam2.paths[: n + 1 - r]  # paths starting at (k,0), k <= n+1-r
    )
    return (
        ParticleConfig(window=n, positions=tuple(particles)),
        ParticleConfig(window=n, positions=tuple(holes)),
    )


# ---------------------------------------------------------------------------
# Height function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeightField:
    order: int
    values: dict[tuple[int, int], int]

    def at(self, x: int, y: int) -> int:
        return self.values[(x, y)]

    def zigzag_corner(self, r: int, k: int) -> int:
        """Height at Q_k^r = (-r+k, n+1-k-r)."""
        return self.values[(-r + k, self.order + 1 - k - r)]


def _vertex_in_diamond(x: int, y: int, n: int) -> bool:
    return abs(x) + abs(y) <= n + 1


def height_function(t: Tiling) -> HeightField:
    """Integrate the local height rules over the vertex grid.

    Along an edge u -> v not covered by a domino the height changes by +1 if
    the square to the left of the edge is black, else -1; across a covered
    edge the change is -3 and +3 respectively.  Normalized by h(n, 0) = 0.
    A cycle-consistency sweep guards against broken tilings.
    """
    t.validate()
    n = t.order
    sq_map = t.square_map()

    def left_square(x, y, dx, dy):
        if (dx, dy) == (1, 0):
            return (x, y)
        if (dx, dy) == (0, 1):
            return (x - 1, y)
        if (dx, dy) == (-1, 0):
            return (x - 1, y - 1)
        return (x, y - 1)

    def right_square(x, y, dx, dy):
        return left_square(x + dx, y + dy, -dx, -dy)

    def delta(x, y, dx, dy):
        ls = left_square(x, y, dx, dy)
        rs = right_square(x, y, dx, dy)
        l_in = square_in_diamond(*ls, n)
        r_in = square_in_diamond(*rs, n)
        if not l_in and not r_in:
            return None
        if l_in:
            s = 1 if not square_is_white(*ls, n) else -1
        else:
            # boundary edge: infer colour from the inside square
            s = -1 if not square_is_white(*rs, n) else 1
        covered = l_in and r_in and sq_map[ls] is sq_map[rs]
        return -3 * s if covered else s

    values: dict[tuple[int, int], int] = {(n, 0): 0}
    stack = [(n, 0)]
    while stack:
        (x, y) = stack.pop()
        h = values[(x, y)]
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            nx, ny = x + dx, y + dy
            if not _vertex_in_diamond(nx, ny, n):
                continue
            d = delta(x, y, dx, dy)
            if d is None:
                continue
            if (nx, ny) in values:
                if values[(nx, ny)] != h + d:
                    raise TilingError(
                        f"inconsistent height at ({nx},{ny}): "
                        f"{values[(nx, ny)]} vs {h + d}"
                    )
            else:
                values[(nx, ny)] = h + d
                stack.append((nx, ny))
    return HeightField(order=n, values=values)


def height_from_particles(n: int, r: int, k: int, particles: ParticleConfig) -> int:
    """Height at the zig-zag corner Q_k^r from the particle configuration:
    2(n-k+r) + 1 - 4*nu[0, n-k], with the empty-prefix convention
    nu[0, m] = 0 for m < 0."""
    if not 0 <= k <= n + 1:
        raise GeometryError(f"k={k} out of range 0..{n + 1}")
    m = n - k
    nu = sum(1 for p in particles.positions if p <= m) if m >= 0 else 0
    return 2 * (n - k + r) + 1 - 4 * nu


# ---------------------------------------------------------------------------
# Polar regions
# ---------------------------------------------------------------------------


def polar_regions(t: Tiling) -> dict[Domino, str]:
    """Label every domino north/south/west/east/temperate.

    The north region is the set of N-dominoes connected to the boundary
    through chains of edge-adjacent N-dominoes; similarly for S/W/E.
    """
    t.validate()
    n = t.order
    kinds = t.kinds()
    sq_map = t.square_map()

    def neighbours(d: Domino) -> Iterable[Domino]:
        for (sx, sy) in d.squares():
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                other = sq_map.get((sx + dx, sy + dy))
                if other is not None and other is not d:
                    yield other

    def touches_boundary(d: Domino) -> bool:
        for (sx, sy) in d.squares():
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                if ((sx + dx, sy + dy)) not in sq_map and not square_in_diamond(
                    sx + dx, sy + dy, n
                ):
                    return True
        return False

    labels = {d: "temperate" for d in t.dominoes}
    for kind, label in (("N", "north"), ("S", "south"), ("W", "west"), ("E", "east")):
        frontier = [d for d in t.dominoes if kinds[d] == kind and touches_boundary(d)]
        seen = set(frontier)
        while frontier:
            d = frontier.pop()
            labels[d] = label
            for other in neighbours(d):
                if other not in seen and kinds[other] == kind:
                    seen.add(other)
                    frontier.append(other)
    return labels


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def tiling_to_json(t: Tiling) -> str:
    """JSON with order and anchored dominoes; kinds are derived, not stored."""
    return json.dumps(
        {
            "order": t.order,
            "dominoes": [
                {
                    "x": d.x,
                    "y": d.y,
                    "orientation": "horizontal" if d.horizontal else "vertical",
                }
                for d in t.dominoes
            ],
        },
        sort_keys=True,
    )


def tiling_from_json(s: str) -> Tiling:
    obj = json.loads(s)
    dominoes = tuple(
        Domino(d["x"], d["y"], d["orientation"] == "horizontal")
        for d in obj["dominoes"]
    )
    t = Tiling(order=obj["order"], dominoes=dominoes)
    t.validate()
    return t
