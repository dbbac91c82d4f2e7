"""Catalog evaluation: rooted motif counts from edge-step matrices."""

import numpy as np
import pytest

from conftest import complete_graph, cycle_graph, er_graph, wheel_graph
from nbcensus import catalog
from nbcensus.connection import RootedGraph
from nbcensus.edge_matrix import EdgeSpace
from nbcensus.graphs import Graph
from nbcensus.motifs import (MotifId, eval_k6_edge, eval_order3, eval_order4,
                             eval_order5, eval_order6_edge, evaluate_catalog,
                             pair_connection_matrix)
from nbcensus.oracle import edge_rooted_vector, vertex_rooted_vector


def by_key(results):
    return {(r.motif.tag, r.motif.rooting): r for r in results}


def catalog_id(result) -> str:
    if result.motif.rooting == "edge":
        return result.motif.tag
    return result.motif.tag + "v"


def assert_against_oracle(results, g):
    space_index = None
    for res in results:
        mid = catalog_id(res)
        pattern, root = catalog.pattern_for(mid)
        if res.motif.rooting == "edge":
            want = edge_rooted_vector(pattern, (root[0], root[1]), g)
        else:
            want = vertex_rooted_vector(pattern, root[0], g)
        assert list(res.values) == list(want), mid


def test_motif_id_validates_rooting():
    with pytest.raises(ValueError):
        MotifId(3, "C3", "face")


def test_order3_on_triangle():
    res = by_key(eval_order3(EdgeSpace(complete_graph(3))))
    assert list(res[("C3", "edge")].values) == [1] * 6
    assert list(res[("P3", "edge")].values) == [1] * 6
    assert list(res[("P3r", "edge")].values) == [1] * 6
    assert list(res[("P3", "vertex")].values) == [2, 2, 2]
    assert list(res[("P3r", "vertex")].values) == [1, 1, 1]
    assert list(res[("C3", "vertex")].values) == [1, 1, 1]


def test_order3_on_k4():
    res = by_key(eval_order3(EdgeSpace(complete_graph(4))))
    for tag in ("P3", "P3r", "C3"):
        assert set(res[(tag, "edge")].values) == {2}
    assert res[("P3", "vertex")].total == 4 * 6
    assert res[("P3r", "vertex")].total == 4 * 3
    assert res[("C3", "vertex")].total == 4 * 3


def test_catalog_band_sizes():
    for order, (ne, nv) in {3: (3, 3), 4: (15, 11), 5: (90, 55)}.items():
        edge, vertex = catalog.entries_for_order(order)
        assert (len(edge), len(vertex)) == (ne, nv)
    assert len(catalog.all_ids()) == 3 + 3 + 15 + 11 + 90 + 55


def test_entries_for_unknown_order():
    with pytest.raises(ValueError):
        catalog.entries_for_order(6)


def test_every_id_has_a_coherent_frozen_pattern():
    for order in (3, 4, 5):
        edge, vertex = catalog.entries_for_order(order)
        for mid in edge:
            g, root = catalog.pattern_for(mid)
            assert g.n == order
            assert len(root) == 2 and g.has_edge(*root), mid
        for mid in vertex:
            g, root = catalog.pattern_for(mid)
            assert g.n == order
            assert len(root) == 1 and 0 <= root[0] < g.n, mid


@pytest.mark.parametrize("g", [
    complete_graph(4),
    cycle_graph(6),
    er_graph(7, 0.5, 91),
    er_graph(8, 0.4, 92),
])
def test_order3_and_4_match_oracle(g):
    space = EdgeSpace(g)
    assert_against_oracle(eval_order3(space), g)
    assert_against_oracle(eval_order4(space), g)


def test_order5_matches_oracle_on_wheel():
    g = wheel_graph(5)
    assert_against_oracle(eval_order5(EdgeSpace(g)), g)


def test_evaluate_catalog_collects_bad_divisions():
    entries = {
        "base": {"kind": "expr", "expr": ("rowsum", "B")},
        "broken": {"kind": "gamma_of", "of": "base", "num": 1, "den": 7},
    }
    errors = {}
    values = evaluate_catalog(EdgeSpace(complete_graph(3)), entries, errors)
    assert list(values["base"]) == [1] * 6
    assert "broken" not in values
    assert "broken" in errors and "divisible" in errors["broken"]


def test_pair_connection_matrix_path_pairs():
    # 4-vertex path, all four vertices rooted: every entry pins one copy
    g = cycle_graph(4)
    pattern = Graph(4, [(0, 1), (1, 2), (2, 3)])
    M = pair_connection_matrix(g, pattern, (0, 1), (2, 3))
    total = int(M.sum())
    # 4-cycle holds 4 paths on 4 vertices, 2 directed orientations each
    assert total == 8


def test_k6_fixtures():
    assert list(eval_k6_edge(EdgeSpace(complete_graph(6))).values) == [1] * 30
    assert list(eval_k6_edge(EdgeSpace(complete_graph(7))).values) == [5] * 42
    sparse = er_graph(9, 0.5, 93)
    assert eval_k6_edge(EdgeSpace(sparse)).total >= 0


@pytest.mark.parametrize("pattern,root", [
    (cycle_graph(6), (0, 1)),
    (Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]),
     (0, 3)),
])
def test_order6_matches_oracle(pattern, root):
    g = er_graph(8, 0.55, 94)
    res = eval_order6_edge(EdgeSpace(g), RootedGraph(pattern, root, ()))
    assert list(res.values) == edge_rooted_vector(pattern, root, g)


def test_order6_input_validation():
    space = EdgeSpace(complete_graph(6))
    with pytest.raises(ValueError, match="order 6"):
        eval_order6_edge(space, RootedGraph(complete_graph(5), (0, 1), ()))
    hexagon = cycle_graph(6)
    with pytest.raises(ValueError, match="root"):
        eval_order6_edge(space, RootedGraph(hexagon, (0, 2), ()))
    with pytest.raises(ValueError, match="edge-rooted"):
        eval_order6_edge(space, RootedGraph(hexagon, (0, 1), (3,)))


def test_k6_against_order6_evaluator():
    g = er_graph(8, 0.75, 95)
    space = EdgeSpace(g)
    via_steps = eval_k6_edge(space)
    via_pairs = eval_order6_edge(space, RootedGraph(complete_graph(6),
                                                   (0, 1), ()))
    assert list(via_steps.values) == list(via_pairs.values)
