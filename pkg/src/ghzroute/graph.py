"""Simple undirected graphs and the graph-state rewrite rules.

Every rewrite returns a new :class:`Graph`; inputs are never mutated.  The
measurement rules act on the graph only (the post-measurement local Clifford
corrections are not tracked here, see :mod:`ghzroute.oracle`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Literal, Mapping, Sequence

from ghzroute.errors import GraphError, InvalidPathError, NotANeighborError, UnknownVertexError

Basis = Literal["X", "Y", "Z"]
Edge = tuple[int, int]


def _check_label(v: object) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise GraphError(f"vertex labels must be positive integers, got {v!r}")
    return v


class Graph:
    """Immutable simple graph on positive integer labels.

    Equality is label-sensitive: two graphs are equal when they have the same
    vertex set and the same edge set.
    """

    __slots__ = ("_adj",)

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Sequence[int]] = ()) -> None:
        adj: dict[int, set[int]] = {_check_label(v): set() for v in vertices}
        for edge in edges:
            a, b = edge
            if a == b:
                raise GraphError(f"self-loop on vertex {a}")
            for x in (a, b):
                _check_label(x)
                adj.setdefault(x, set())
            adj[a].add(b)
            adj[b].add(a)
        self._adj: dict[int, frozenset[int]] = {v: frozenset(n) for v, n in adj.items()}

    @classmethod
    def _from_adj(cls, adj: Mapping[int, frozenset[int]]) -> Graph:
        g = cls.__new__(cls)
        g._adj = dict(adj)
        return g

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    def edges(self) -> list[Edge]:
        """Sorted list of edges ``(a, b)`` with ``a < b``."""
        return sorted((a, b) for a, ns in self._adj.items() for b in ns if a < b)

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.neighbors(a)

    def require(self, *vs: int) -> None:
        for v in vs:
            if v not in self._adj:
                raise UnknownVertexError(v)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._adj))

    def __len__(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(vertices={sorted(self._adj)}, edges={self.edges()})"

    def to_dict(self) -> dict:
        return {"vertices": sorted(self._adj), "edges": [list(e) for e in self.edges()]}

    def check_invariants(self) -> None:
        """Raise :class:`GraphError` if adjacency is asymmetric, looped or dangling."""
        for v, ns in self._adj.items():
            if v in ns:
                raise GraphError(f"self-loop on {v}")
            for u in ns:
                if u not in self._adj:
                    raise GraphError(f"dangling neighbor {u} of {v}")
                if v not in self._adj[u]:
                    raise GraphError(f"asymmetric edge {v}-{u}")


@dataclass(frozen=True)
class MeasurementRecord:
    """A single-qubit Pauli measurement; ``special_neighbor`` is the ``w`` of an X measurement."""

    vertex: int
    basis: Basis
    special_neighbor: int | None = None

    def __post_init__(self) -> None:
        if self.basis not in ("X", "Y", "Z"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.special_neighbor is not None and self.basis != "X":
            raise ValueError("only X measurements carry a special neighbor")


@dataclass(frozen=True)
class LocalComplement:
    vertex: int


Step = MeasurementRecord | LocalComplement


# -- primitive rewrites -------------------------------------------------------


def delete_vertex(g: Graph, v: int) -> Graph:
    ns = g.neighbors(v)
    adj = dict(g._adj)
    del adj[v]
    for u in ns:
        adj[u] = adj[u] - {v}
    return Graph._from_adj(adj)


def local_complement(g: Graph, v: int) -> Graph:
    """Toggle every edge between two neighbors of ``v``."""
    ns = g.neighbors(v)
    if len(ns) < 2:
        return g
    adj = dict(g._adj)
    for u in ns:
        adj[u] = adj[u] ^ (ns - {u})
    return Graph._from_adj(adj)


def measure_z(g: Graph, v: int) -> Graph:
    return delete_vertex(g, v)


def measure_y(g: Graph, v: int) -> Graph:
    return delete_vertex(local_complement(g, v), v)


def measure_x(g: Graph, v: int, w: int | None = None) -> tuple[Graph, MeasurementRecord]:
    """X-measure ``v``: ``LC_w . Z_v . LC_v . LC_w`` applied to ``g``.

    ``w`` must be a neighbor of ``v``; it defaults to the smallest-labeled one.
    An isolated ``v`` is simply deleted.
    """
    ns = g.neighbors(v)
    if not ns:
        if w is not None:
            raise NotANeighborError(f"{w} is not a neighbor of isolated vertex {v}")
        return delete_vertex(g, v), MeasurementRecord(v, "X", None)
    if w is None:
        w = min(ns)
    elif w not in ns:
        raise NotANeighborError(f"{w} is not a neighbor of {v}")
    h = local_complement(g, w)
    h = local_complement(h, v)
    h = delete_vertex(h, v)
    h = local_complement(h, w)
    return h, MeasurementRecord(v, "X", w)


def apply_step(g: Graph, step: Step) -> tuple[Graph, Step]:
    """Apply one transcript step, returning the new graph and the executed record."""
    if isinstance(step, LocalComplement):
        return local_complement(g, step.vertex), step
    if step.basis == "Z":
        return measure_z(g, step.vertex), step
    if step.basis == "Y":
        return measure_y(g, step.vertex), step
    return measure_x(g, step.vertex, step.special_neighbor)


# -- queries ---------------------------------------------------------------------


def neighborhood(g: Graph, v: int) -> frozenset[int]:
    return g.neighbors(v)


def combined_neighborhood(g: Graph, vs: Iterable[int]) -> frozenset[int]:
    """Union of the neighborhoods of ``vs``; may contain members of ``vs``."""
    out: set[int] = set()
    for v in vs:
        out |= g.neighbors(v)
    return frozenset(out)


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Graph:
    keep = frozenset(vs)
    g.require(*keep)
    return Graph._from_adj({v: g._adj[v] & keep for v in keep})


def is_complete_on(g: Graph, vs: Iterable[int]) -> bool:
    vs = list(vs)
    g.require(*vs)
    return all(g.has_edge(a, b) for a, b in combinations(vs, 2))


def is_star_on(g: Graph, vs: Iterable[int], center: int) -> bool:
    """True when the induced graph on ``vs`` is exactly the star centered at ``center``."""
    vs = set(vs)
    g.require(*vs)
    if center not in vs:
        return False
    for a, b in combinations(sorted(vs), 2):
        if g.has_edge(a, b) != (center in (a, b)):
            return False
    return True


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Components sorted by their smallest vertex."""
    seen: set[int] = set()
    comps = []
    for start in sorted(g._adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for u in g._adj[stack.pop()]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def component_of(g: Graph, v: int) -> frozenset[int]:
    g.require(v)
    for comp in connected_components(g):
        if v in comp:
            return comp
    raise AssertionError("unreachable")


def check_path(g: Graph, path: Sequence[int]) -> None:
    """Raise :class:`InvalidPathError` unless ``path`` is a simple path in ``g``."""
    if not path:
        raise InvalidPathError("empty path")
    if len(set(path)) != len(path):
        raise InvalidPathError(f"path repeats a vertex: {list(path)}")
    for v in path:
        if v not in g:
            raise InvalidPathError(f"path vertex {v} not in graph")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise InvalidPathError(f"{a} and {b} are not adjacent")


def is_induced_path(g: Graph, path: Sequence[int]) -> bool:
    """True when ``path`` is a path whose only internal edges are the consecutive ones."""
    try:
        check_path(g, path)
    except InvalidPathError:
        return False
    index = {v: i for i, v in enumerate(path)}
    for i, v in enumerate(path):
        for u in g.neighbors(v):
            j = index.get(u)
            if j is not None and abs(i - j) != 1:
                return False
    return True


def path_graph(vertices: Sequence[int]) -> Graph:
    return Graph(vertices, zip(vertices, vertices[1:]))


def complete_graph(vertices: Sequence[int]) -> Graph:
    return Graph(vertices, combinations(vertices, 2))


def star_graph(center: int, leaves: Sequence[int]) -> Graph:
    return Graph([center, *leaves], ((center, leaf) for leaf in leaves))
