"""Entanglement routing protocols built from the graph rewrite rules.

Bell pairs are routed with the repeater protocol (isolate, then X-measure the
path interior) or the X protocol (X-measure first, then Z-measure whatever is
still attached to the endpoints).  GHZ states on ``n`` targets are extracted
from a repeater line with the layout

    t1 t2 e t3 e t4 ... e t(n-1) tn

i.e. ``2n - 3`` vertices with one extra vertex ``e`` between consecutive
intermediate targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from ghzroute.errors import (
    GraphError,
    InvalidLineError,
    InvalidPathError,
    LineNotFoundError,
    NoPathError,
    StaleVertexError,
)
from ghzroute.graph import (
    Graph,
    LocalComplement,
    MeasurementRecord,
    Step,
    apply_step,
    check_path,
    combined_neighborhood,
    component_of,
    is_complete_on,
    is_induced_path,
    is_star_on,
    measure_z,
)

MAX_ORDERING_TARGETS = 8


@dataclass
class ProtocolReport:
    """Executed transcript of a protocol run.

    ``neighborhood_snapshots[(t, v)]`` is the neighborhood of tracked vertex
    ``v`` after the ``t``-th measurement (``t = 0`` is the input graph).
    """

    protocol: str
    initial_graph: Graph
    final_graph: Graph
    transcript: list[Step] = field(default_factory=list)
    targets: tuple[int, ...] = ()
    neighborhood_snapshots: dict[tuple[int, int], frozenset[int]] = field(default_factory=dict)

    def _count(self, basis: str) -> int:
        return sum(1 for s in self.transcript if isinstance(s, MeasurementRecord) and s.basis == basis)

    @property
    def x_count(self) -> int:
        return self._count("X")

    @property
    def y_count(self) -> int:
        return self._count("Y")

    @property
    def z_count(self) -> int:
        return self._count("Z")

    @property
    def lc_count(self) -> int:
        return sum(1 for s in self.transcript if isinstance(s, LocalComplement))

    @property
    def measurement_count(self) -> int:
        return self.x_count + self.y_count + self.z_count

    @property
    def measured(self) -> list[int]:
        return [s.vertex for s in self.transcript if isinstance(s, MeasurementRecord)]

    def steps(self, basis: str) -> list[int]:
        """Vertices measured in ``basis`` (or ``"LC"``), in transcript order."""
        if basis == "LC":
            return [s.vertex for s in self.transcript if isinstance(s, LocalComplement)]
        return [s.vertex for s in self.transcript if isinstance(s, MeasurementRecord) and s.basis == basis]

    def snapshot(self, t: int, v: int) -> frozenset[int]:
        return self.neighborhood_snapshots[(t, v)]


class _Executor:
    """Applies steps to a graph while recording the transcript."""

    def __init__(self, g: Graph, protocol: str, tracked: Iterable[int] = (), targets: Sequence[int] = ()) -> None:
        self.initial = g
        self.g = g
        self.report = ProtocolReport(protocol, g, g, targets=tuple(targets))
        self.tracked = [v for v in tracked if v in g]
        self.t = 0
        self._snapshot()

    def _snapshot(self) -> None:
        for v in self.tracked:
            if v in self.g:
                self.report.neighborhood_snapshots[(self.t, v)] = self.g.neighbors(v)

    def run(self, step: Step) -> None:
        index = len(self.report.transcript)
        if step.vertex not in self.g:
            raise StaleVertexError(index, step.vertex)
        if isinstance(step, MeasurementRecord) and step.special_neighbor is not None:
            if step.special_neighbor not in self.g:
                raise StaleVertexError(index, step.special_neighbor,
                                       f"step {index}: special neighbor {step.special_neighbor} is not live")
        self.g, done = apply_step(self.g, step)
        self.report.transcript.append(done)
        if isinstance(done, MeasurementRecord):
            self.t += 1
            self._snapshot()

    def z(self, v: int) -> None:
        self.run(MeasurementRecord(v, "Z"))

    def x(self, v: int, w: int | None) -> None:
        self.run(MeasurementRecord(v, "X", w))

    def lc(self, v: int) -> None:
        self.run(LocalComplement(v))

    def finish(self) -> ProtocolReport:
        self.report.final_graph = self.g
        return self.report


# -- paths ---------------------------------------------------------------------


def _bfs_dist(g: Graph, source: int, allowed: frozenset[int] | None = None) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(g.neighbors(v)):
                if u not in dist and (allowed is None or u in allowed):
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def shortest_paths(g: Graph, a: int, b: int, limit: int | None = None,
                   allowed: frozenset[int] | None = None) -> list[tuple[int, ...]]:
    """All shortest ``a``-``b`` paths in lexicographic order (optionally capped at ``limit``)."""
    g.require(a, b)
    dist_b = _bfs_dist(g, b, allowed)
    if a not in dist_b:
        raise NoPathError(f"no path between {a} and {b}")
    out: list[tuple[int, ...]] = []

    def extend(path: list[int]) -> bool:
        v = path[-1]
        if v == b:
            out.append(tuple(path))
            return limit is not None and len(out) >= limit
        for u in sorted(g.neighbors(v)):
            if dist_b.get(u) == dist_b[v] - 1:
                path.append(u)
                if extend(path):
                    return True
                path.pop()
        return False

    extend([a])
    return out


def x_protocol_cost(g: Graph, p: Sequence[int]) -> int:
    """Total measurement count of :func:`x_protocol` along ``p``."""
    return x_protocol(g, p).measurement_count


def find_route(g: Graph, a: int, b: int, max_paths: int = 20000) -> tuple[int, ...]:
    """Shortest path with the smallest combined neighborhood.

    Remaining ties go to the lowest simulated X-protocol cost, then to the
    lexicographically largest vertex sequence.
    """
    if a == b:
        raise InvalidPathError("route endpoints must differ")
    paths = shortest_paths(g, a, b, limit=max_paths)
    sizes = {p: len(combined_neighborhood(g, p)) for p in paths}
    best = min(sizes.values())
    candidates = [p for p in paths if sizes[p] == best]
    if len(candidates) == 1:
        return candidates[0]
    costs = {p: x_protocol_cost(g, p) for p in candidates}
    low = min(costs.values())
    return max(p for p in candidates if costs[p] == low)


def isolate_path(g: Graph, p: Sequence[int]) -> tuple[Graph, frozenset[int]]:
    """Z-measure every off-path neighbor of ``p``."""
    check_path(g, p)
    z_set = combined_neighborhood(g, p) - set(p)
    for v in sorted(z_set):
        g = measure_z(g, v)
    return g, z_set


def _isolate(ex: _Executor, p: Sequence[int]) -> frozenset[int]:
    z_set = combined_neighborhood(ex.g, p) - set(p)
    for v in sorted(z_set):
        ex.z(v)
    return z_set


def _splice_interior(ex: _Executor, p: Sequence[int]) -> None:
    # The live predecessor of each interior vertex is p[0] once earlier ones are gone.
    for v in p[1:-1]:
        ex.x(v, p[0])


def repeater_protocol(g: Graph, p: Sequence[int]) -> ProtocolReport:
    check_path(g, p)
    if len(p) < 2:
        raise InvalidPathError("a route needs two endpoints")
    ex = _Executor(g, "repeater", tracked=p, targets=(p[0], p[-1]))
    _isolate(ex, p)
    _splice_interior(ex, p)
    return ex.finish()


def x_protocol(g: Graph, p: Sequence[int]) -> ProtocolReport:
    check_path(g, p)
    if len(p) < 2:
        raise InvalidPathError("a route needs two endpoints")
    a, b = p[0], p[-1]
    ex = _Executor(g, "x", tracked=p, targets=(a, b))
    _splice_interior(ex, p)
    for v in sorted((ex.g.neighbors(a) | ex.g.neighbors(b)) - {a, b}):
        ex.z(v)
    return ex.finish()


def bell_ok(g: Graph, a: int, b: int) -> bool:
    """True when ``a``-``b`` is an isolated edge of ``g``."""
    return a in g and b in g and g.neighbors(a) == {b} and g.neighbors(b) == {a}


# -- repeater lines ------------------------------------------------------------


def canonical_length(n: int) -> int:
    return 2 if n == 2 else 2 * n - 3


def canonical_positions(n: int) -> frozenset[int]:
    """1-based target positions of the canonical ``n``-target line."""
    if n < 2:
        raise InvalidLineError("a repeater line needs at least two targets")
    if n == 2:
        return frozenset({1, 2})
    return frozenset({1, 2 * n - 3} | set(range(2, 2 * n - 3, 2)))


@dataclass(frozen=True)
class RepeaterLine:
    """A path through all targets; ``target_positions`` are 1-based indices into ``line``.

    Lines may be longer than canonical.  Superfluous non-targets are removed by
    :meth:`removal_plan` before the protocol proper runs.
    """

    line: tuple[int, ...]
    target_positions: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "line", tuple(self.line))
        object.__setattr__(self, "target_positions", frozenset(self.target_positions))
        self.validate_layout()

    @classmethod
    def from_targets(cls, line: Sequence[int], targets: Iterable[int]) -> RepeaterLine:
        ts = set(targets)
        missing = ts - set(line)
        if missing:
            raise InvalidLineError(f"targets {sorted(missing)} are not on the line")
        return cls(tuple(line), frozenset(i + 1 for i, v in enumerate(line) if v in ts))

    @classmethod
    def canonical_for(cls, line: Sequence[int]) -> RepeaterLine:
        """Canonical line whose length fixes the target count."""
        n = 2 if len(line) == 2 else (len(line) + 3) // 2
        if canonical_length(n) != len(line):
            raise InvalidLineError(f"no canonical layout has length {len(line)}")
        return cls(tuple(line), canonical_positions(n))

    @property
    def n(self) -> int:
        return len(self.target_positions)

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(self.line[i - 1] for i in sorted(self.target_positions))

    def validate_layout(self) -> None:
        L = len(self.line)
        pos = sorted(self.target_positions)
        if len(set(self.line)) != L:
            raise InvalidLineError("line repeats a vertex")
        if len(pos) < 2:
            raise InvalidLineError("a repeater line needs at least two targets")
        if pos[0] != 1 or pos[-1] != L or any(not 1 <= p <= L for p in pos):
            raise InvalidLineError("both ends of the line must be targets")
        # consecutive intermediate targets need at least one vertex between them
        inner = pos[1:-1]
        for a, b in zip(inner, inner[1:]):
            if b - a < 2:
                raise InvalidLineError(
                    f"targets {self.line[a - 1]} and {self.line[b - 1]} need an extra vertex between them")

    @property
    def is_canonical(self) -> bool:
        return len(self.line) == canonical_length(self.n) and self.target_positions == canonical_positions(self.n)

    def removal_plan(self) -> list[MeasurementRecord]:
        """Measurements that shrink the line to canonical form.

        Superfluous vertices next to an end of the line are X-measured with
        the end target as special neighbor, which splices the line cleanly.
        Surplus extras between intermediate targets cannot be spliced by an X
        measurement without breaking the line, so they are Y-measured.
        """
        pos = sorted(self.target_positions)
        n = len(pos)
        line = self.line
        plan: list[MeasurementRecord] = []
        first, last = line[0], line[-1]
        if n == 2:
            return [MeasurementRecord(v, "X", first) for v in line[1:-1]]
        # segment after the first endpoint, nearest to it first
        for v in line[1:pos[1] - 1]:
            plan.append(MeasurementRecord(v, "X", first))
        # surplus extras between intermediate targets; keep the last one of each gap
        for a, b in zip(pos[1:-1], pos[2:-1]):
            for v in line[a:b - 2]:
                plan.append(MeasurementRecord(v, "Y"))
        # segment before the last endpoint, nearest to it first
        for v in reversed(line[pos[-2]:-1]):
            plan.append(MeasurementRecord(v, "X", last))
        return plan

    def canonical(self) -> RepeaterLine:
        """The canonical line left after :meth:`removal_plan` has run."""
        gone = {r.vertex for r in self.removal_plan()}
        kept = [v for v in self.line if v not in gone]
        return RepeaterLine.from_targets(kept, self.targets)


def check_line(g: Graph, rl: RepeaterLine) -> None:
    """Raise :class:`InvalidLineError` unless ``rl`` is an induced path of ``g``."""
    if not is_induced_path(g, rl.line):
        raise InvalidLineError(f"line {list(rl.line)} is not an induced path of the graph")


def _line_candidate(g: Graph, order: Sequence[int]) -> tuple[int, ...] | None:
    """Concatenate shortest segments through ``order``; None if no induced line results."""
    n = len(order)
    targets = set(order)
    line = [order[0]]
    used = {order[0]}
    for i, (a, b) in enumerate(zip(order, order[1:])):
        need_extra = 1 <= i < n - 2  # segment between two intermediate targets
        blocked = used | (targets - {b}) | combined_neighborhood(g, used - {a})
        allowed = frozenset(g.vertices - blocked) | {a, b}
        if b in combined_neighborhood(g, used - {a}):
            return None
        if need_extra:
            if g.has_edge(a, b):
                return None
        try:
            seg = shortest_paths(g, a, b, limit=1, allowed=allowed)[0]
        except NoPathError:
            return None
        line.extend(seg[1:])
        used.update(seg)
    return tuple(line) if is_induced_path(g, line) else None


def build_repeater_line(g: Graph, targets: Iterable[int]) -> RepeaterLine:
    """Heuristic search for a repeater line through ``targets``.

    All target orderings are tried (up to reversal) for at most eight targets;
    segments are shortest paths avoiding the rest of the line and its
    neighbors.  Candidates are scored by the with-isolation measurement count,
    then by how many surplus vertices need Y removal, then lexicographically.
    """
    ts = sorted(set(targets))
    if len(ts) < 2:
        raise InvalidLineError("need at least two targets")
    g.require(*ts)
    if len(ts) == 2:
        return RepeaterLine.from_targets(find_route(g, ts[0], ts[1]), ts)
    if len(ts) > MAX_ORDERING_TARGETS:
        raise LineNotFoundError(f"ordering search is limited to {MAX_ORDERING_TARGETS} targets")
    best = None
    for order in permutations(ts):
        if order[0] > order[-1]:
            continue
        line = _line_candidate(g, order)
        if line is None:
            continue
        rl = RepeaterLine.from_targets(line, ts)
        ys = sum(1 for r in rl.removal_plan() if r.basis == "Y")
        key = (len(_line_union(g, line)), ys, line)
        if best is None or key < best[0]:
            best = (key, rl)
    if best is None:
        raise LineNotFoundError(f"no repeater line found through {ts}")
    return best[1]


def _prepare_line(ex: _Executor, rl: RepeaterLine, isolate_first: bool) -> RepeaterLine:
    if isolate_first:
        _isolate(ex, rl.line)
    for step in rl.removal_plan():
        ex.run(step)
    return rl.canonical()


def _clear_target_neighbors(ex: _Executor, targets: Sequence[int]) -> None:
    ts = set(targets)
    for v in sorted(combined_neighborhood(ex.g, ts) - ts):
        ex.z(v)


def ghz_center(rl: RepeaterLine) -> int:
    """Star center produced by the X variant: the second-to-last line vertex."""
    line = rl.canonical().line if not rl.is_canonical else rl.line
    return line[0] if rl.n == 2 else line[-2]


def ghz_extract_lc_variant(g: Graph, rl: RepeaterLine, isolate_first: bool = True) -> ProtocolReport:
    """LC every line vertex except the two ends, then Z-measure the extras."""
    check_line(g, rl)
    ex = _Executor(g, "ghz-lc", tracked=rl.line, targets=rl.targets)
    can = _prepare_line(ex, rl, isolate_first)
    n = can.n
    for v in can.line[1:-1]:
        ex.lc(v)
    for i in range(3, 2 * n - 4, 2):
        ex.z(can.line[i - 1])
    _clear_target_neighbors(ex, can.targets)
    return ex.finish()


def ghz_extract_x_variant(g: Graph, rl: RepeaterLine, isolate_first: bool = True,
                          final_lc: bool = False) -> ProtocolReport:
    """X-measure the extras right to left, then Z-measure leftover neighbors of the targets.

    The result is a star centered at the second-to-last line vertex;
    ``final_lc`` turns it into the complete graph.
    """
    check_line(g, rl)
    ex = _Executor(g, "ghz-x", tracked=rl.line, targets=rl.targets)
    can = _prepare_line(ex, rl, isolate_first)
    n = can.n
    v = can.line
    for i in range(2 * n - 5, 2, -2):
        ex.x(v[i - 1], v[i - 2])
    _clear_target_neighbors(ex, can.targets)
    if final_lc and n >= 3:
        ex.lc(v[-2])
    return ex.finish()


def ghz_ok(g: Graph, targets: Sequence[int], center: int | None = None) -> bool:
    """True when ``targets`` form an isolated component that is complete or a star."""
    if any(t not in g for t in targets) or component_of(g, targets[0]) != set(targets):
        return False
    if is_complete_on(g, targets):
        return True
    centers = [center] if center is not None else list(targets)
    return any(is_star_on(g, targets, c) for c in centers)


# -- costs -----------------------------------------------------------------------


def _line_union(g: Graph, line: Sequence[int]) -> frozenset[int]:
    return combined_neighborhood(g, line) | set(line)


def cost_with_isolation_formula(g: Graph, rl: RepeaterLine) -> int:
    """Isolation Z's plus line X's: ``|union of N(line)| - n``."""
    check_line(g, rl)
    return len(_line_union(g, rl.line)) - rl.n


def cost_without_isolation_formula(g: Graph, rl: RepeaterLine) -> int:
    """Line X's plus the Z's that isolate the targets afterwards.

    Computed from the neighborhoods recorded after the last line measurement.
    """
    check_line(g, rl)
    report = ghz_extract_x_variant(g, rl, isolate_first=False)
    line_steps = len(rl.line) - rl.n
    ts = rl.targets
    union = set(ts)
    for v in ts:
        union |= report.snapshot(line_steps, v)
    return line_steps + len(union) - rl.n


def cost_with_isolation(g: Graph, rl: RepeaterLine) -> int:
    return ghz_extract_x_variant(g, rl, isolate_first=True).measurement_count


def cost_without_isolation(g: Graph, rl: RepeaterLine) -> int:
    return ghz_extract_x_variant(g, rl, isolate_first=False).measurement_count


# -- scripts ---------------------------------------------------------------------


def run_script(g: Graph, plan: Iterable[Step], targets: Sequence[int] = ()) -> ProtocolReport:
    """Replay ``plan`` step by step; a step naming a dead vertex raises :class:`StaleVertexError`."""
    plan = list(plan)
    ex = _Executor(g, "script", tracked=sorted(g.vertices), targets=targets)
    for step in plan:
        try:
            ex.run(step)
        except GraphError as exc:
            raise StaleVertexError(len(ex.report.transcript), step.vertex, f"step {len(ex.report.transcript)}: {exc}") from exc
    return ex.finish()


__all__ = [
    "ProtocolReport",
    "RepeaterLine",
    "bell_ok",
    "build_repeater_line",
    "canonical_length",
    "canonical_positions",
    "check_line",
    "cost_with_isolation",
    "cost_with_isolation_formula",
    "cost_without_isolation",
    "cost_without_isolation_formula",
    "find_route",
    "ghz_center",
    "ghz_extract_lc_variant",
    "ghz_extract_x_variant",
    "ghz_ok",
    "isolate_path",
    "repeater_protocol",
    "run_script",
    "shortest_paths",
    "x_protocol",
    "x_protocol_cost",
]
