from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzroute.errors import GraphError, NotANeighborError, UnknownVertexError
from ghzroute.graph import (
    Graph,
    LocalComplement,
    MeasurementRecord,
    apply_step,
    combined_neighborhood,
    complete_graph,
    connected_components,
    delete_vertex,
    induced_subgraph,
    is_complete_on,
    is_induced_path,
    is_star_on,
    local_complement,
    measure_x,
    measure_y,
    measure_z,
    neighborhood,
    path_graph,
    star_graph,
)

from conftest import edge_set, graphs, toggle_neighborhood


def test_graph_rejects_bad_labels_and_loops():
    with pytest.raises(GraphError):
        Graph([0])
    with pytest.raises(GraphError):
        Graph([1, 2], [(1, 1)])
    with pytest.raises(GraphError):
        Graph(["a"])


def test_equality_is_label_sensitive():
    assert path_graph([1, 2, 3]) == Graph([3, 2, 1], [(2, 1), (3, 2)])
    assert path_graph([1, 2, 3]) != path_graph([2, 1, 3])


# -- delete_vertex -----------------------------------------------------------------


def test_delete_middle_of_path():
    g = delete_vertex(path_graph([1, 2, 3]), 2)
    assert g.vertices == {1, 3}
    assert g.edges() == []


def test_delete_isolated_vertex_keeps_edges():
    g = Graph([1, 2, 3, 4], [(1, 2), (2, 3)])
    h = delete_vertex(g, 4)
    assert h.vertices == {1, 2, 3}
    assert h.edges() == g.edges()


def test_delete_grid_center_drops_neighbor_degrees(grid3):
    h = delete_vertex(grid3, 5)
    for v in (2, 4, 6, 8):
        assert h.degree(v) == grid3.degree(v) - 1
    for v in (1, 3, 7, 9):
        assert h.degree(v) == grid3.degree(v)


def test_unknown_vertex_errors(grid3):
    for op in (delete_vertex, local_complement, measure_z, measure_y, neighborhood):
        with pytest.raises(UnknownVertexError):
            op(grid3, 42)
    with pytest.raises(UnknownVertexError):
        measure_x(grid3, 42)
    with pytest.raises(UnknownVertexError):
        combined_neighborhood(grid3, [1, 42])


# -- local_complement --------------------------------------------------------------


def test_lc_path_center_gives_triangle():
    assert local_complement(path_graph([1, 2, 3]), 2) == complete_graph([1, 2, 3])


@pytest.mark.parametrize("v", [1, 4])
def test_lc_low_degree_is_identity(v):
    g = Graph([1, 2, 3, 4], [(1, 2), (2, 3)])
    assert local_complement(g, v) == g


@pytest.mark.parametrize("c", [1, 3, 5])
def test_lc_complete_graph_gives_star(c):
    k5 = complete_graph([1, 2, 3, 4, 5])
    expected = toggle_neighborhood(k5, c)
    h = local_complement(k5, c)
    assert edge_set(h) == expected
    assert h == star_graph(c, [v for v in range(1, 6) if v != c])


@given(graphs())
def test_lc_matches_reference_toggle(g):
    for v in g:
        assert edge_set(local_complement(g, v)) == toggle_neighborhood(g, v)


@given(graphs())
def test_lc_is_an_involution(g):
    for v in g:
        assert local_complement(local_complement(g, v), v) == g


@given(graphs(min_vertices=2))
def test_z_commutes_with_lc_elsewhere(g):
    for i, j in combinations(sorted(g.vertices), 2):
        for a, b in ((i, j), (j, i)):
            assert delete_vertex(local_complement(g, b), a) == local_complement(delete_vertex(g, a), b)


@given(graphs(), st.data())
def test_rewrites_preserve_invariants(g, data):
    v = data.draw(st.sampled_from(sorted(g.vertices)))
    for h in (delete_vertex(g, v), local_complement(g, v), measure_y(g, v), measure_x(g, v)[0]):
        h.check_invariants()


# -- measurement rules -------------------------------------------------------------


def test_z_on_grid_isolates_repeater_line(grid3):
    g = grid3
    for v in (7, 2, 6):
        g = measure_z(g, v)
    comps = connected_components(g)
    assert frozenset({1, 4, 5, 8, 9}) in comps
    assert frozenset({3}) in comps
    assert is_induced_path(g, [1, 4, 5, 8, 9])


def test_z_on_isolated_vertex_and_triangle():
    g = Graph([1, 2, 3, 4], [(1, 2)])
    assert measure_z(g, 4) == Graph([1, 2, 3], [(1, 2)])
    assert measure_z(complete_graph([1, 2, 3]), 3) == path_graph([1, 2])


def test_y_examples(grid3):
    assert measure_y(path_graph([1, 2, 3]), 2) == path_graph([1, 3])
    g = Graph([1, 2, 3], [(1, 2), (2, 3)])
    assert measure_y(g, 1) == measure_z(g, 1)
    expected = toggle_neighborhood(grid3, 5) - {e for e in edge_set(grid3) if 5 in e}
    h = measure_y(grid3, 5)
    assert 5 not in h
    assert edge_set(h) == expected
    assert is_complete_on(h, [2, 4, 6, 8])


@given(graphs())
def test_y_is_lc_then_delete(g):
    for v in g:
        assert measure_y(g, v) == delete_vertex(local_complement(g, v), v)


@given(graphs(min_vertices=2), st.data())
def test_x_is_the_four_step_composition(g, data):
    v = data.draw(st.sampled_from(sorted(g.vertices)))
    ns = sorted(g.neighbors(v))
    if not ns:
        h, rec = measure_x(g, v)
        assert h == delete_vertex(g, v) and rec.special_neighbor is None
        return
    w = data.draw(st.sampled_from(ns))
    h, rec = measure_x(g, v, w)
    expected = local_complement(delete_vertex(local_complement(local_complement(g, w), v), v), w)
    assert h == expected
    assert rec == MeasurementRecord(v, "X", w)


def test_x_splices_a_line():
    h, rec = measure_x(path_graph([1, 2, 3]), 2, 1)
    assert h == path_graph([1, 3])
    assert rec.special_neighbor == 1


def test_x_default_special_neighbor_is_smallest():
    g = Graph([1, 2, 3, 4], [(4, 2), (4, 3)])
    _, rec = measure_x(g, 4)
    assert rec.special_neighbor == 2


def test_x_on_grid_line_needs_no_z(grid3):
    g = grid3
    for v in (4, 5, 8):
        g, _ = measure_x(g, v, 1)
    assert g.has_edge(1, 9)
    assert g.neighbors(1) == {9} and g.neighbors(9) == {1}


def test_x_on_leaf_detaches_its_neighbor():
    # Hand composition for leaf v on w, A = N_w - {v}: LC_w joins v to A and
    # toggles A; LC_v cuts every w-a edge and toggles A back; LC_w is then
    # trivial.  So v is gone, w is isolated, everything else is untouched.
    g = Graph([1, 2, 3, 4, 5], [(1, 2), (2, 3), (2, 4), (3, 4), (4, 5)])
    h, _ = measure_x(g, 1, 2)
    assert h == Graph([2, 3, 4, 5], [(3, 4), (4, 5)])


def test_x_on_leaf_of_leaf():
    h, _ = measure_x(Graph([1, 2, 3], [(1, 2)]), 1, 2)
    assert h == Graph([2, 3])


def test_x_rejects_non_neighbor():
    with pytest.raises(NotANeighborError):
        measure_x(path_graph([1, 2, 3]), 1, 3)
    with pytest.raises(NotANeighborError):
        measure_x(Graph([1, 2]), 1, 2)


def test_measurement_record_validation():
    with pytest.raises(ValueError):
        MeasurementRecord(1, "Q")
    with pytest.raises(ValueError):
        MeasurementRecord(1, "Z", 2)


def test_apply_step_is_deterministic(grid3):
    for step in (LocalComplement(5), MeasurementRecord(5, "Y"), MeasurementRecord(5, "X")):
        assert apply_step(grid3, step) == apply_step(grid3, step)


def test_rewrites_do_not_mutate_input(grid3):
    before = grid3.edges()
    local_complement(grid3, 5)
    measure_x(grid3, 5)
    delete_vertex(grid3, 5)
    assert grid3.edges() == before and 5 in grid3


# -- neighborhoods and helpers -------------------------------------------------------


def test_combined_neighborhoods(grid3, grid43):
    assert combined_neighborhood(grid3, [1, 4, 5, 8, 9]) - {1, 4, 5, 8, 9} == {2, 6, 7}
    path = [1, 4, 5, 6, 9, 12, 11, 10]
    assert combined_neighborhood(grid43, path) - set(path) == {2, 3, 7, 8}
    assert neighborhood(Graph([1]), 1) == frozenset()


def test_complete_and_star_predicates():
    k3 = complete_graph([1, 2, 3])
    assert is_complete_on(k3, [1, 2, 3])
    star = star_graph(1, [2, 3, 4])
    assert not is_complete_on(star, [1, 2, 3, 4])
    assert is_star_on(star, [1, 2, 3, 4], 1)
    assert not is_star_on(star, [1, 2, 3, 4], 2)


def test_induced_subgraph_and_components():
    g = Graph([1, 2, 3, 4, 5], [(1, 2), (2, 3), (4, 5)])
    assert induced_subgraph(g, [1, 2, 4]) == Graph([1, 2, 4], [(1, 2)])
    assert connected_components(g) == [frozenset({1, 2, 3}), frozenset({4, 5})]
    with pytest.raises(UnknownVertexError):
        induced_subgraph(g, [9])


@settings(max_examples=50)
@given(graphs())
def test_components_partition_vertices(g):
    comps = connected_components(g)
    assert set().union(*comps) == g.vertices
    assert sum(len(c) for c in comps) == len(g)
