"""Grid networks, path vectors and majorization ranking of routes.

Vertices are labeled row-major from 1; the vertex at column ``x`` and row
``y`` (origin top-left, ``y`` growing downwards) is ``y * cols + x + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import accumulate, combinations
from math import comb
from typing import Sequence

from ghzroute.errors import GridError, MajorizationError
from ghzroute.graph import Graph, check_path
from ghzroute.protocols import x_protocol


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise GridError(f"grid dimensions must be positive, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def label(self, x: int, y: int) -> int:
        if not (0 <= x < self.cols and 0 <= y < self.rows):
            raise GridError(f"({x}, {y}) is outside the {self.rows}x{self.cols} grid")
        return y * self.cols + x + 1

    def coord(self, v: int) -> tuple[int, int]:
        if not 1 <= v <= self.size:
            raise GridError(f"vertex {v} is not in the {self.rows}x{self.cols} grid")
        return (v - 1) % self.cols, (v - 1) // self.cols

    def coords(self) -> dict[int, tuple[int, int]]:
        return {v: self.coord(v) for v in range(1, self.size + 1)}


def grid_edges(spec: GridSpec) -> list[tuple[int, int]]:
    edges = []
    for y in range(spec.rows):
        for x in range(spec.cols):
            v = spec.label(x, y)
            if x + 1 < spec.cols:
                edges.append((v, v + 1))
            if y + 1 < spec.rows:
                edges.append((v, v + spec.cols))
    return sorted(edges)


def make_grid(spec: GridSpec) -> Graph:
    return Graph(range(1, spec.size + 1), grid_edges(spec))


# -- path vectors ----------------------------------------------------------------


@dataclass(frozen=True)
class PathVector:
    """Run lengths of a monotone grid path, zero padded to the path length.

    Runs alternate between the two axes starting with ``first_axis``, the
    axis of the path's first edge.
    """

    entries: tuple[int, ...]
    dx: int
    dy: int
    first_axis: str = "x"

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.first_axis not in ("x", "y"):
            raise GridError(f"first_axis must be 'x' or 'y', got {self.first_axis!r}")
        if any(e < 0 for e in self.entries):
            raise GridError("path vector entries must be nonnegative")
        first = sum(self.entries[0::2])
        second = sum(self.entries[1::2])
        sx, sy = (first, second) if self.first_axis == "x" else (second, first)
        if (sx, sy) != (self.dx, self.dy):
            raise GridError(f"vector sums ({sx}, {sy}) do not match displacement ({self.dx}, {self.dy})")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _step_axis(spec: GridSpec, a: int, b: int) -> tuple[str, int]:
    (x0, y0), (x1, y1) = spec.coord(a), spec.coord(b)
    if abs(x1 - x0) + abs(y1 - y0) != 1:
        raise GridError(f"{a} and {b} are not lattice neighbors")
    return ("x", x1 - x0) if x1 != x0 else ("y", y1 - y0)


def path_vector(spec: GridSpec, p: Sequence[int]) -> PathVector:
    if not p:
        raise GridError("empty path")
    (xa, ya), (xb, yb) = spec.coord(p[0]), spec.coord(p[-1])
    dx, dy = abs(xb - xa), abs(yb - ya)
    if len(p) - 1 != dx + dy or len(set(p)) != len(p):
        raise GridError(f"path {list(p)} is not a shortest path")
    runs: list[int] = []
    signs: dict[str, int] = {}
    first_axis = "x"
    prev_axis = None
    for a, b in zip(p, p[1:]):
        axis, sign = _step_axis(spec, a, b)
        if signs.setdefault(axis, sign) != sign:
            raise GridError(f"path {list(p)} is not monotone")
        if axis == prev_axis:
            runs[-1] += 1
        else:
            if prev_axis is None:
                first_axis = axis
            runs.append(1)
            prev_axis = axis
    entries = tuple(runs) + (0,) * (dx + dy - len(runs))
    return PathVector(entries, dx, dy, first_axis)


def path_from_vector(spec: GridSpec, start: int, v: PathVector, x_sign: int = 1, y_sign: int = 1) -> tuple[int, ...]:
    if x_sign not in (1, -1) or y_sign not in (1, -1):
        raise GridError("signs must be +1 or -1")
    x, y = spec.coord(start)
    path = [start]
    other = {"x": "y", "y": "x"}
    axis = v.first_axis
    for run in v.entries:
        for _ in range(run):
            if axis == "x":
                x += x_sign
            else:
                y += y_sign
            path.append(spec.label(x, y))
        axis = other[axis]
    return tuple(path)


def enumerate_shortest_paths(spec: GridSpec, a: int, b: int) -> list[tuple[int, ...]]:
    """Every monotone lattice path from ``a`` to ``b``, lexicographically sorted."""
    (xa, ya), (xb, yb) = spec.coord(a), spec.coord(b)
    sx = 1 if xb >= xa else -1
    sy = 1 if yb >= ya else -1
    dx, dy = abs(xb - xa), abs(yb - ya)
    out = []
    for xsteps in combinations(range(dx + dy), dx):
        x, y = xa, ya
        path = [a]
        chosen = set(xsteps)
        for i in range(dx + dy):
            if i in chosen:
                x += sx
            else:
                y += sy
            path.append(spec.label(x, y))
        out.append(tuple(path))
    out.sort()
    assert len(out) == comb(dx + dy, dx)
    return out


# -- majorization ------------------------------------------------------------------


class MajorizationOrder(enum.Enum):
    LEFT_MAJORIZES = "left_majorizes"
    RIGHT_MAJORIZES = "right_majorizes"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def majorizes(s: Sequence[int] | PathVector, t: Sequence[int] | PathVector) -> MajorizationOrder:
    """Compare two equal-sum vectors by the prefix sums of their descending sorts."""
    s, t = list(s), list(t)
    if len(s) != len(t):
        raise MajorizationError(f"length mismatch: {len(s)} vs {len(t)}")
    if sum(s) != sum(t):
        raise MajorizationError(f"sum mismatch: {sum(s)} vs {sum(t)}")
    ps = list(accumulate(sorted(s, reverse=True)))
    pt = list(accumulate(sorted(t, reverse=True)))
    if ps == pt:
        return MajorizationOrder.EQUAL
    if all(a >= b for a, b in zip(ps, pt)):
        return MajorizationOrder.LEFT_MAJORIZES
    if all(a <= b for a, b in zip(ps, pt)):
        return MajorizationOrder.RIGHT_MAJORIZES
    return MajorizationOrder.INCOMPARABLE


@dataclass
class RankResult:
    """Outcome of :func:`rank_paths`.

    ``minimal`` holds indices into ``paths`` whose vectors majorize no other
    vector strictly, best first.  ``comparisons`` maps every index pair
    ``(i, j)`` with ``i < j`` to the order of ``vectors[i]`` versus ``vectors[j]``.
    """

    paths: list[tuple[int, ...]]
    vectors: list[PathVector]
    costs: list[int]
    comparisons: dict[tuple[int, int], MajorizationOrder] = field(default_factory=dict)
    minimal: list[int] = field(default_factory=list)

    @property
    def best(self) -> tuple[int, ...]:
        return self.paths[self.minimal[0]]


def rank_paths(spec: GridSpec, paths: Sequence[Sequence[int]], g: Graph | None = None) -> RankResult:
    """Rank shortest paths between a common pair of endpoints by majorization.

    Minimal elements are ordered by simulated X-protocol cost on ``g``
    (the full grid by default), then lexicographically largest first, the
    same tie-break :func:`~ghzroute.protocols.find_route` uses.
    """
    paths = [tuple(p) for p in paths]
    if not paths:
        raise GridError("no paths to rank")
    ends = {(p[0], p[-1]) for p in paths}
    if len(ends) != 1:
        raise GridError(f"paths do not share endpoints: {sorted(ends)}")
    g = make_grid(spec) if g is None else g
    vectors = [path_vector(spec, p) for p in paths]
    costs = [x_protocol(g, p).measurement_count for p in paths]
    result = RankResult(paths, vectors, costs)
    dominated = set()
    for i, j in combinations(range(len(paths)), 2):
        order = majorizes(vectors[i], vectors[j])
        result.comparisons[(i, j)] = order
        if order is MajorizationOrder.LEFT_MAJORIZES:
            dominated.add(i)
        elif order is MajorizationOrder.RIGHT_MAJORIZES:
            dominated.add(j)
    result.minimal = sorted((i for i in range(len(paths)) if i not in dominated),
                            key=lambda i: (costs[i], tuple(-v for v in paths[i])))
    return result


# -- closed-form Z cost ----------------------------------------------------------


def closed_form_z_cost(g: Graph, spec: GridSpec | None, p: Sequence[int]) -> int:
    """Z measurements the X protocol needs along ``p``, without simulating it.

    Off-path neighbors of the path, minus the off-path vertices shared by two
    path vertices two steps apart (the corners where the path turns).  With a
    ``spec`` the path must be a monotone shortest path of that grid.
    """
    check_path(g, p)
    if spec is not None:
        path_vector(spec, p)
    on_path = set(p)
    union: set[int] = set()
    for v in p:
        union |= g.neighbors(v)
    shared: set[int] = set()
    for a, c in zip(p, p[2:]):
        shared |= g.neighbors(a) & g.neighbors(c)
    return len(union - on_path) - len(shared - on_path)
