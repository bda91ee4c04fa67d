from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import strategies as st

from ghzroute.graph import Graph
from ghzroute.grid import GridSpec, make_grid


@pytest.fixture
def grid3() -> Graph:
    return make_grid(GridSpec(3, 3))


@pytest.fixture
def grid43() -> Graph:
    """4 rows x 3 columns, the network of the GHZ5 example."""
    return make_grid(GridSpec(4, 3))


@pytest.fixture
def grid4() -> Graph:
    return make_grid(GridSpec(4, 4))


@st.composite
def graphs(draw, min_vertices: int = 1, max_vertices: int = 8) -> Graph:
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = list(combinations(range(1, n + 1), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(1, n + 1), [e for e, keep in zip(pairs, mask) if keep])


def edge_set(g: Graph) -> set[frozenset[int]]:
    return {frozenset(e) for e in g.edges()}


def toggle_neighborhood(g: Graph, v: int) -> set[frozenset[int]]:
    """Reference local complementation: symmetric difference with the clique on N_v."""
    clique = {frozenset(p) for p in combinations(sorted(g.neighbors(v)), 2)}
    return edge_set(g) ^ clique


def random_line_network(rng, n: int, max_vertices: int = 40):
    """Random connected graph with an embedded canonical repeater line for ``n`` targets.

    Returns ``(graph, line)``.  Only off-line vertices gain edges, so the line
    stays an induced path.
    """
    from ghzroute.protocols import canonical_length

    L = canonical_length(n)
    total = int(rng.integers(L, max_vertices + 1))
    labels = [int(x) + 1 for x in rng.permutation(total)]
    line = labels[:L]
    edges = set(zip(line, line[1:]))
    p = float(rng.uniform(0.05, 0.3))
    for i in range(L, total):
        v = labels[i]
        anchor = labels[int(rng.integers(i))]
        edges.add((anchor, v))
        for u in labels[:i]:
            if rng.random() < p:
                edges.add((u, v))
    return Graph(labels, edges), tuple(line)


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
