"""Rooted connection matrices: direct enumeration, formula evaluation,
and the composition rules that build formulas for arbitrary patterns.

The direct enumerator is the semantic anchor; every composition rule is
tested by comparing its output formula against a fresh enumeration of
the pattern it claims to represent.
"""

import numpy as np
import pytest

from conftest import complete_graph, cycle_graph, er_graph
from nbcensus.connection import (MAX_PATTERN_ORDER, CompositionError,
                                 RootedFormula, RootedGraph, ScaleGuardError,
                                 TupleMatrix, build_formula, eval_formula,
                                 formula_arity, kappa_direct, lemma1_project,
                                 lemma1_transpose, lemma1_vectorize,
                                 prop1_chain, prop1_restrict,
                                 prop1_union_same_roots)
from nbcensus.edge_matrix import EdgeSpace, IntegrityError
from nbcensus.graphs import Graph

P2 = Graph(2, [(0, 1)])
P3 = Graph(3, [(0, 1), (1, 2)])
P4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
TRIANGLE = complete_graph(3)
DIAMOND = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])


def rooted_formula(graph, r, s=()):
    F = RootedGraph(graph, r, s)
    return RootedFormula(F, build_formula(F))


def test_rooted_graph_validates_vertices():
    with pytest.raises(ValueError):
        RootedGraph(TRIANGLE, (3,), ())
    assert RootedGraph(TRIANGLE, (0, 0), (0,)).fully_rooted is False
    assert RootedGraph(TRIANGLE, (0, 1), (2,)).fully_rooted is True


def test_tuple_matrix_linearization():
    data = np.arange(27, dtype=np.int64).reshape(9, 3)
    M = TupleMatrix(3, 2, 1, data)
    assert M.entry((1, 2), (0,)) == 15
    assert M.entry((0, 0), (2,)) == 2
    with pytest.raises(ValueError):
        M.entry((1,), (0,))


def test_kappa_of_rooted_edge_is_adjacency():
    g = er_graph(6, 0.5, 71)
    M = kappa_direct(RootedGraph(P2, (0,), (1,)), g)
    adj = np.zeros((6, 6), dtype=np.int64)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = 1
    assert np.array_equal(M.data, adj)


def test_kappa_of_path_pairs_is_nonbacktracking_step(k4):
    M = kappa_direct(RootedGraph(P3, (0, 1), (1, 2)), k4)
    space = EdgeSpace(k4)
    B = space.B.toarray()
    for e in range(space.size):
        for f in range(space.size):
            i = (space.index.tail[e], space.index.head[e])
            j = (space.index.tail[f], space.index.head[f])
            assert M.entry(i, j) == B[e, f]


def test_kappa_triangle_fixtures(k4):
    full = kappa_direct(RootedGraph(TRIANGLE, (0,), (1, 2)), k4)
    assert int(full.data.sum()) == 24
    assert set(np.unique(full.data)) == {0, 1}
    per_vertex = kappa_direct(RootedGraph(TRIANGLE, (0,), ()), k4)
    assert list(per_vertex.data.ravel()) == [3, 3, 3, 3]


def test_kappa_guards():
    with pytest.raises(ScaleGuardError):
        kappa_direct(RootedGraph(cycle_graph(MAX_PATTERN_ORDER + 1),
                                 (0,), ()), complete_graph(4))
    with pytest.raises(ScaleGuardError):
        kappa_direct(RootedGraph(TRIANGLE, (0, 1), (2,)),
                     complete_graph(5), max_cells=20)


def test_eval_formula_atoms():
    g = cycle_graph(5)
    adj = eval_formula(("adj",), g)
    assert adj.row_arity == adj.col_arity == 1
    assert int(adj.data.sum()) == 2 * g.m
    off = eval_formula(("sel", 1, 1, (), ((0, 0),)), g)
    assert np.array_equal(off.data, 1 - np.eye(5, dtype=np.int64))


def test_eval_formula_guards():
    expr = ("kron", ("adj",), ("adj",))
    with pytest.raises(ScaleGuardError):
        eval_formula(expr, complete_graph(4), max_cells=10)
    with pytest.raises(IntegrityError, match="not exact"):
        eval_formula(("scale", ("adj",), 1, 2), complete_graph(3))


def test_formula_arity_checks_composition():
    assert formula_arity(("adj",)) == (1, 1)
    assert formula_arity(("vec", ("adj",))) == (2, 0)
    assert formula_arity(("kron", ("adj",), ("adj",))) == (2, 2)
    with pytest.raises(CompositionError):
        formula_arity(("had", ("adj",), ("vec", ("adj",))))
    with pytest.raises(CompositionError):
        formula_arity(("mm", ("vec", ("adj",)), ("adj",)))


def test_transpose_round_trip():
    g = er_graph(5, 0.6, 72)
    rf = rooted_formula(TRIANGLE, (0,), (1,))
    back = lemma1_transpose(lemma1_transpose(rf))
    assert eval_formula(back.expr, g).equal(eval_formula(rf.expr, g))
    once = lemma1_transpose(rf)
    assert eval_formula(once.expr, g).equal(
        kappa_direct(RootedGraph(TRIANGLE, (1,), (0,)), g))


def test_vectorize_stacks_columns():
    g = er_graph(5, 0.6, 73)
    rf = rooted_formula(TRIANGLE, (0,), (1,))
    flat = lemma1_vectorize(rf)
    assert eval_formula(flat.expr, g).equal(
        kappa_direct(RootedGraph(TRIANGLE, (0, 1), ()), g))


def test_projection_divides_by_stabiliser_index():
    """Dropping both path ends from the root set halves the tally.

    The path's end-swap fixes the centre, so each centre-rooted copy is
    seen twice while summing over dropped coordinates; the emitted
    formula must carry the exact factor 1/2.
    """
    rf = rooted_formula(P3, (1, 0, 2))
    projected = lemma1_project(rf, (0,))
    assert projected.pattern.r == (1,)
    head = projected.expr
    assert head[0] == "scale" and (head[2], head[3]) == (1, 2)
    g = er_graph(6, 0.5, 74)
    assert eval_formula(projected.expr, g).equal(
        kappa_direct(RootedGraph(P3, (1,), ()), g))


def test_projection_with_identity_keep_is_lossless():
    g = er_graph(5, 0.5, 75)
    rf = rooted_formula(P3, (0, 1, 2))
    same = lemma1_project(rf, (0, 1, 2))
    assert eval_formula(same.expr, g).equal(eval_formula(rf.expr, g))


def test_restrict_reroots_patterns():
    g = er_graph(6, 0.5, 76)
    rf = rooted_formula(TRIANGLE, (0, 1, 2))
    for new_r, new_s in [((0,), (1,)), ((0, 1), ()), ((), (2,)),
                         ((2,), (0, 1))]:
        out = prop1_restrict(rf, new_r, new_s)
        assert eval_formula(out.expr, g).equal(
            kappa_direct(RootedGraph(TRIANGLE, new_r, new_s), g))


def test_restrict_rejects_uncovered_roots():
    rf = rooted_formula(P3, (0,), (1,))
    with pytest.raises(CompositionError, match="not covered"):
        prop1_restrict(rf, (0, 2), ())


def test_union_overlays_edge_sets():
    g = er_graph(6, 0.55, 77)
    rf1 = rooted_formula(P3, (0, 1, 2))
    rf2 = rooted_formula(Graph(3, [(0, 2)]), (0, 1, 2))
    out = prop1_union_same_roots(rf1, rf2)
    assert set(out.pattern.graph.edges) == set(TRIANGLE.edges)
    assert eval_formula(out.expr, g).equal(
        kappa_direct(RootedGraph(TRIANGLE, (0, 1, 2), ()), g))


def test_union_requires_matching_fully_rooted_operands():
    rf1 = rooted_formula(P3, (0, 1, 2))
    with pytest.raises(CompositionError):
        prop1_union_same_roots(rf1, rooted_formula(P2, (0, 1)))
    partial = rooted_formula(P3, (0,), (1,))
    with pytest.raises(CompositionError):
        prop1_union_same_roots(partial, partial)


def test_chain_gates_the_collided_diagonal():
    """Gluing edge to edge gives two-step adjacency minus the diagonal.

    The raw matrix product counts closed a-b-a walks on the diagonal,
    but those place both path ends on one host vertex, which the glued
    path forbids; the gate has to remove them.
    """
    rf = RootedFormula(RootedGraph(P2, (0,), (1,)), ("adj",))
    out = prop1_chain(rf, rf)
    assert out.pattern.graph.n == 3
    g = er_graph(6, 0.6, 78)
    got = eval_formula(out.expr, g)
    assert got.equal(kappa_direct(RootedGraph(out.pattern.graph, (0,),
                                              (2,)), g))
    adj = eval_formula(("adj",), g).data
    two_step = adj @ adj
    assert np.array_equal(np.diag(got.data), np.zeros(6, dtype=np.int64))
    off = ~np.eye(6, dtype=bool)
    assert np.array_equal(got.data[off], two_step[off])


def test_chain_divides_by_split_count():
    """Gluing two paths end-to-end closes a square; each square splits
    back into its halves twice, so the formula carries 1/2."""
    rf1 = rooted_formula(P3, (1,), (0, 2))
    rf2 = rooted_formula(P3, (0, 2), (1,))
    out = prop1_chain(rf1, rf2)
    assert sorted(map(tuple, out.pattern.graph.edges)) == [
        (0, 1), (0, 3), (1, 2), (2, 3)]
    head = out.expr
    assert head[0] == "scale" and (head[2], head[3]) == (1, 2)
    g = er_graph(6, 0.6, 79)
    assert eval_formula(out.expr, g).equal(
        kappa_direct(out.pattern, g))


def test_chain_requires_fully_rooted_operands():
    rf = RootedFormula(RootedGraph(P3, (0,), (1,)),
                       build_formula(RootedGraph(P3, (0,), (1,))))
    with pytest.raises(CompositionError):
        prop1_chain(rf, rf)


@pytest.mark.parametrize("pattern,r,s", [
    (TRIANGLE, (0,), (1,)),
    (TRIANGLE, (0, 1), ()),
    (P4, (0,), (3,)),
    (cycle_graph(4), (0, 1), (2, 3)),
    (DIAMOND, (0,), ()),
    (complete_graph(4), (0,), (1, 2)),
])
@pytest.mark.parametrize("host", [
    complete_graph(4), cycle_graph(5), er_graph(6, 0.5, 301),
])
def test_built_formulas_match_direct_enumeration(pattern, r, s, host):
    F = RootedGraph(pattern, r, s)
    expr = build_formula(F)
    assert formula_arity(expr) == (len(r), len(s))
    assert eval_formula(expr, host).equal(kappa_direct(F, host))


def test_empty_host_and_undersized_host_give_zeros():
    F = RootedGraph(TRIANGLE, (0,), ())
    expr = build_formula(F)
    bare = Graph(3, [])
    assert not eval_formula(expr, bare).data.any()
    assert not kappa_direct(F, bare).data.any()
    big = RootedGraph(cycle_graph(5), (0,), (1,))
    small_host = complete_graph(3)
    assert not eval_formula(build_formula(big), small_host).data.any()
