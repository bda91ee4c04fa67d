"""JSON network documents, report serialization and DOT export."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ghzroute.errors import GhzRouteError, GraphError, NetworkFormatError
from ghzroute.graph import Graph, LocalComplement, MeasurementRecord, Step
from ghzroute.grid import GridSpec, grid_edges
from ghzroute.protocols import ProtocolReport

TASKS = ("bell", "ghz", "rank", "cost", "oracle", "script")


@dataclass
class NetworkDocument:
    vertices: list[int]
    edges: list[tuple[int, int]]
    grid: GridSpec | None = None
    coords: dict[int, tuple[int, int]] | None = None

    def to_graph(self) -> Graph:
        return Graph(self.vertices, self.edges)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}
        if self.grid is not None:
            out["grid"] = {"rows": self.grid.rows, "cols": self.grid.cols}
        if self.coords is not None:
            out["coords"] = {str(v): list(c) for v, c in sorted(self.coords.items())}
        return out


def _label(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise NetworkFormatError(f"{what}: vertex labels must be positive integers, got {value!r}")
    return value


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def parse_network(text: str) -> NetworkDocument:
    """Parse and validate a JSON network description.

    Either ``grid`` or ``vertices``/``edges`` (or both, in which case they
    must agree with the lattice) must be given.
    """
    data = _loads(text)
    if not isinstance(data, dict):
        raise NetworkFormatError("network document must be a JSON object")
    grid = None
    if "grid" in data:
        g = data["grid"]
        if not isinstance(g, dict) or not isinstance(g.get("rows"), int) or not isinstance(g.get("cols"), int):
            raise NetworkFormatError("grid must be an object with integer rows and cols")
        try:
            grid = GridSpec(g["rows"], g["cols"])
        except GhzRouteError as exc:
            raise NetworkFormatError(str(exc)) from None

    if "vertices" in data or "edges" in data:
        raw_vertices = data.get("vertices")
        if raw_vertices is None:
            raw_vertices = sorted({v for e in data.get("edges", []) for v in e}) if isinstance(data.get("edges"), list) else []
        if not isinstance(raw_vertices, list):
            raise NetworkFormatError("vertices must be a list")
        vertices = [_label(v, f"vertices[{i}]") for i, v in enumerate(raw_vertices)]
        seen: set[int] = set()
        for v in vertices:
            if v in seen:
                raise NetworkFormatError(f"duplicate vertex {v}")
            seen.add(v)
        raw_edges = data.get("edges", [])
        if not isinstance(raw_edges, list):
            raise NetworkFormatError("edges must be a list")
        edges: list[tuple[int, int]] = []
        edge_set: set[frozenset[int]] = set()
        for i, e in enumerate(raw_edges):
            if not isinstance(e, list) or len(e) != 2:
                raise NetworkFormatError(f"edges[{i}] must be a pair of labels")
            a, b = (_label(x, f"edges[{i}]") for x in e)
            for x in (a, b):
                if x not in seen:
                    raise NetworkFormatError(f"edges[{i}] references undeclared vertex {x} (dangling edge)")
            if a == b:
                raise NetworkFormatError(f"edges[{i}] is a self-loop on {a}")
            key = frozenset((a, b))
            if key in edge_set:
                raise NetworkFormatError(f"edges[{i}] duplicates edge {a}-{b}")
            edge_set.add(key)
            edges.append((min(a, b), max(a, b)))
        if grid is not None:
            lattice = {frozenset(e) for e in grid_edges(grid)}
            if seen != set(range(1, grid.size + 1)) or edge_set != lattice:
                raise NetworkFormatError(f"edges do not match the {grid.rows}x{grid.cols} lattice")
    elif grid is not None:
        vertices = list(range(1, grid.size + 1))
        edges = grid_edges(grid)
    else:
        raise NetworkFormatError("network needs either a grid or vertices/edges")

    coords = None
    if "coords" in data:
        if not isinstance(data["coords"], dict):
            raise NetworkFormatError("coords must be an object")
        coords = {}
        for k, c in data["coords"].items():
            try:
                v = int(k)
            except ValueError:
                raise NetworkFormatError(f"coords key {k!r} is not a vertex label") from None
            if v not in set(vertices):
                raise NetworkFormatError(f"coords for undeclared vertex {v}")
            if not isinstance(c, list) or len(c) != 2:
                raise NetworkFormatError(f"coords[{k}] must be an [x, y] pair")
            coords[v] = (c[0], c[1])
    elif grid is not None:
        coords = grid.coords()
    return NetworkDocument(sorted(vertices), sorted(edges), grid, coords)


def load_graph(text: str) -> Graph:
    return parse_network(text).to_graph()


def network_json(g: Graph, grid: GridSpec | None = None) -> str:
    doc = NetworkDocument(sorted(g.vertices), [tuple(e) for e in g.edges()], grid,
                          grid.coords() if grid is not None else None)
    return json.dumps(doc.to_dict(), indent=2)


# -- transcripts and reports --------------------------------------------------------


def step_to_dict(step: Step) -> dict:
    if isinstance(step, LocalComplement):
        return {"op": "LC", "vertex": step.vertex}
    out: dict[str, Any] = {"op": step.basis, "vertex": step.vertex}
    if step.special_neighbor is not None:
        out["w"] = step.special_neighbor
    return out


def step_from_dict(d: Mapping[str, Any], index: int = 0) -> Step:
    if not isinstance(d, Mapping):
        raise NetworkFormatError(f"step {index} must be an object")
    op = d.get("op")
    vertex = _label(d.get("vertex"), f"step {index}")
    if op == "LC":
        return LocalComplement(vertex)
    if op not in ("X", "Y", "Z"):
        raise NetworkFormatError(f"step {index}: unknown op {op!r}")
    w = d.get("w")
    if w is not None:
        if op != "X":
            raise NetworkFormatError(f"step {index}: only X steps take a special neighbor")
        w = _label(w, f"step {index}")
    return MeasurementRecord(vertex, op, w)


def parse_plan(text: str) -> tuple[list[Step], list[int]]:
    """A plan is a JSON list of steps, or ``{"steps": [...], "targets": [...]}``."""
    data = _loads(text)
    targets: list[int] = []
    if isinstance(data, dict):
        targets = [_label(t, "targets") for t in data.get("targets", [])]
        data = data.get("steps")
    if not isinstance(data, list):
        raise NetworkFormatError("plan must be a list of steps")
    return [step_from_dict(d, i) for i, d in enumerate(data)], targets


def report_to_dict(report: ProtocolReport) -> dict:
    return {
        "protocol": report.protocol,
        "targets": list(report.targets),
        "counts": {
            "x": report.x_count,
            "y": report.y_count,
            "z": report.z_count,
            "lc": report.lc_count,
            "measurements": report.measurement_count,
        },
        "transcript": [step_to_dict(s) for s in report.transcript],
        "initial_graph": report.initial_graph.to_dict(),
        "final_graph": report.final_graph.to_dict(),
        "neighborhood_snapshots": [
            {"t": t, "vertex": v, "neighbors": sorted(ns)}
            for (t, v), ns in sorted(report.neighborhood_snapshots.items())
        ],
    }


def _graph_from_dict(d: Mapping[str, Any]) -> Graph:
    try:
        return Graph(d["vertices"], [tuple(e) for e in d["edges"]])
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise NetworkFormatError(f"bad graph in report: {exc}") from None


def report_from_dict(d: Mapping[str, Any]) -> ProtocolReport:
    try:
        report = ProtocolReport(
            protocol=d["protocol"],
            initial_graph=_graph_from_dict(d["initial_graph"]),
            final_graph=_graph_from_dict(d["final_graph"]),
            transcript=[step_from_dict(s, i) for i, s in enumerate(d["transcript"])],
            targets=tuple(d.get("targets", ())),
            neighborhood_snapshots={
                (s["t"], s["vertex"]): frozenset(s["neighbors"]) for s in d.get("neighborhood_snapshots", [])
            },
        )
    except (KeyError, TypeError) as exc:
        raise NetworkFormatError(f"malformed report: {exc}") from None
    counts = d.get("counts")
    if counts is not None and counts.get("measurements") != report.measurement_count:
        raise NetworkFormatError("report counts disagree with its transcript")
    return report


def export_json(report: ProtocolReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True)


def parse_report(text: str) -> ProtocolReport:
    return report_from_dict(_loads(text))


# -- DOT ----------------------------------------------------------------------------


def export_dot(g: Graph, highlights: Mapping[str, Iterable[int]] | None = None, name: str = "network") -> str:
    """Graphviz rendering of ``g``.

    ``highlights`` may name ``targets`` (drawn as filled double circles) and
    ``measured`` vertices (drawn dashed and unattached, since they are no
    longer in ``g``).  Edges among targets are drawn bold as the final state.
    """
    highlights = highlights or {}
    targets = set(highlights.get("targets", ()))
    measured = set(highlights.get("measured", ())) - set(g.vertices)
    lines = [f'graph "{name}" {{', "  node [shape=circle];"]
    for v in sorted(g.vertices | measured):
        if v in measured:
            attrs = ' [class="measured", style=dashed, color=gray]'
        elif v in targets:
            attrs = ' [class="target", shape=doublecircle, style=filled, fillcolor=lightblue]'
        else:
            attrs = ""
        lines.append(f"  {v}{attrs};")
    for a, b in g.edges():
        attrs = ' [class="final", penwidth=2.5]' if a in targets and b in targets else ""
        lines.append(f"  {a} -- {b}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- run requests -------------------------------------------------------------------


@dataclass
class RunRequest:
    task: str
    targets: list[int] = field(default_factory=list)
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise NetworkFormatError(f"unknown task {self.task!r}; expected one of {', '.join(TASKS)}")
        if len(set(self.targets)) != len(self.targets):
            raise NetworkFormatError("targets must be distinct")
        if self.task in ("bell", "rank") and len(self.targets) != 2:
            raise NetworkFormatError(f"{self.task} needs exactly two targets")
        if self.task == "ghz" and len(self.targets) < 2:
            raise NetworkFormatError("ghz needs at least two targets")
