"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class GhzRouteError(Exception):
    """Base class for every error raised by this package."""


class GraphError(GhzRouteError):
    """Malformed graph or an operation referencing a bad vertex."""


class UnknownVertexError(GraphError, KeyError):
    def __init__(self, vertex: object) -> None:
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex!r}"


class NotANeighborError(GraphError):
    """The special neighbor of an X measurement is not adjacent to the measured vertex."""


class InvalidPathError(GraphError):
    pass


class NoPathError(GhzRouteError):
    pass


class InvalidLineError(GhzRouteError):
    """A repeater line violates the required target layout."""


class LineNotFoundError(GhzRouteError):
    """The bounded repeater-line search gave up."""


class StaleVertexError(GhzRouteError):
    def __init__(self, step: int, vertex: int, message: str | None = None) -> None:
        self.step = step
        self.vertex = vertex
        super().__init__(message or f"step {step}: vertex {vertex} is not live")


class GridError(GhzRouteError):
    """Bad grid dimensions, non-monotone path or malformed path vector."""


class MajorizationError(GhzRouteError):
    pass


class OracleError(GhzRouteError):
    """Resource cap exceeded or oracle precondition violated."""


class NetworkFormatError(GhzRouteError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
