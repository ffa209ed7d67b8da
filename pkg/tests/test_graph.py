"""Core graph types, queries, validators, and their invariants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipcover import (BLUE, RED, BipartiteGraph, MonoPartition, MonoTree,
                      TreeCover, TwoColouring, Vertex, degree,
                      edge_count_between, monochromatic_components,
                      sample_bipartite, sample_colouring, spanning_tree_of,
                      validate_cover, validate_partition)
from bipcover.errors import InvalidArgumentError, NotConnectedError
from bipcover.models import ModelParams
from conftest import (graph_from_coloured_edges, matching_graph,
                      naive_validate_cover, naive_validate_partition)


def v1(i):
    return Vertex(1, i)


def v2(j):
    return Vertex(2, j)


class TestConstruction:
    def test_adjacency_is_symmetric(self):
        g = BipartiteGraph.from_edges(3, 4, [(0, 1), (2, 3), (1, 0)])
        for i, j in g.edges():
            assert g.row(2, j) >> i & 1

    def test_rejects_out_of_range_edges(self):
        with pytest.raises(InvalidArgumentError):
            BipartiteGraph.from_edges(2, 2, [(0, 5)])

    def test_rejects_bad_rows(self):
        with pytest.raises(InvalidArgumentError):
            BipartiteGraph.from_rows(2, 2, [0b100, 0])

    def test_colouring_must_stay_on_edges(self):
        g = BipartiteGraph.from_edges(2, 2, [(0, 0)])
        with pytest.raises(InvalidArgumentError):
            TwoColouring.from_red_rows(g, [0b10, 0])

    def test_colouring_must_be_total(self):
        g = BipartiteGraph.complete(2, 2)
        with pytest.raises(InvalidArgumentError):
            TwoColouring.from_edge_map(g, {(0, 0): RED})


class TestDegree:
    def test_complete_graph_degree(self):
        g = BipartiteGraph.complete(2, 2)
        assert degree(g, v1(0)) == 2

    def test_empty_graph_degree(self):
        g = BipartiteGraph.from_edges(3, 3, [])
        assert degree(g, v1(1)) == 0
        assert degree(g, v2(2)) == 0

    def test_matching_restricted_degree(self):
        g, _ = matching_graph()
        assert degree(g, v1(0), within=[v2(1), v2(2)]) == 0

    def test_coloured_degree(self):
        g, col = matching_graph()
        assert degree(g, v2(0), colouring=col, colour=RED) == 1
        assert degree(g, v2(0), colouring=col, colour=BLUE) == 0

    def test_within_same_part_rejected(self):
        g, _ = matching_graph()
        with pytest.raises(InvalidArgumentError):
            degree(g, v1(0), within=[v1(1)])

    def test_colour_without_colouring_rejected(self):
        g, _ = matching_graph()
        with pytest.raises(InvalidArgumentError):
            degree(g, v1(0), colour=RED)


class TestEdgeCount:
    def test_complete(self):
        g = BipartiteGraph.complete(3, 3)
        assert edge_count_between(g, [v1(i) for i in range(3)],
                                  [v2(j) for j in range(3)]) == 9

    def test_empty_set(self):
        g = BipartiteGraph.complete(3, 3)
        assert edge_count_between(g, [], [v2(0)]) == 0

    def test_matching_pairs(self):
        g, _ = matching_graph()
        assert edge_count_between(g, [v1(0), v1(1)], [v2(0), v2(1)]) == 2

    def test_same_side_rejected(self):
        g, _ = matching_graph()
        with pytest.raises(InvalidArgumentError):
            edge_count_between(g, [v1(0)], [v1(1)])

    def test_mixed_set_rejected(self):
        g, _ = matching_graph()
        with pytest.raises(InvalidArgumentError):
            edge_count_between(g, [v1(0), v2(1)], [v2(0)])

    def test_uncoloured_equals_colour_sum(self):
        g = sample_bipartite(ModelParams(6, 6, Fraction(1, 2)), 11)
        col = sample_colouring(g, Fraction(1, 3), 11)
        a = [v1(i) for i in (0, 2, 4)]
        b = [v2(j) for j in (1, 3, 5)]
        total = edge_count_between(g, a, b)
        red = edge_count_between(g, a, b, colouring=col, colour=RED)
        blue = edge_count_between(g, a, b, colouring=col, colour=BLUE)
        assert total == red + blue


class TestComponents:
    def test_monochromatic_connected_graph(self):
        g = BipartiteGraph.complete(3, 3)
        col = TwoColouring.monochromatic(g, RED)
        red = monochromatic_components(g, col, RED)
        blue = monochromatic_components(g, col, BLUE)
        assert len(red) == 1 and len(red[0]) == 6
        assert len(blue) == 6 and all(len(c) == 1 for c in blue)

    def test_matching_components(self):
        g, col = matching_graph()
        red = monochromatic_components(g, col, RED)
        blue = monochromatic_components(g, col, BLUE)
        assert frozenset([v1(0), v2(0)]) in red
        assert sum(1 for c in red if len(c) == 1) == 4
        assert frozenset([v1(1), v2(1)]) in blue
        assert frozenset([v1(2), v2(2)]) in blue
        assert sum(1 for c in blue if len(c) == 1) == 2

    def test_empty_graph_all_singletons(self):
        g = BipartiteGraph.from_edges(2, 3, [])
        col = TwoColouring.monochromatic(g, RED)
        for colour in (RED, BLUE):
            comps = monochromatic_components(g, col, colour)
            assert len(comps) == 5
            assert all(len(c) == 1 for c in comps)

    @settings(deadline=None, max_examples=40)
    @given(st.integers(0, 2 ** 32), st.integers(2, 7))
    def test_components_partition_vertices(self, seed, n):
        g = sample_bipartite(ModelParams(n, n, Fraction(1, 2)), seed)
        col = sample_colouring(g, Fraction(1, 2), seed)
        for colour in (RED, BLUE):
            comps = monochromatic_components(g, col, colour)
            everything = [v for c in comps for v in c]
            assert len(everything) == 2 * n
            assert set(everything) == set(g.vertices())


class TestValidators:
    def test_valid_spanning_tree_cover(self):
        g = BipartiteGraph.complete(3, 3)
        col = TwoColouring.monochromatic(g, RED)
        tree = spanning_tree_of(g, col, RED, g.vertices())
        report = validate_cover(g, col, TreeCover((tree,), frozenset()))
        assert report.ok

    def test_shared_vertex_detected(self):
        g = BipartiteGraph.complete(2, 2)
        col = TwoColouring.monochromatic(g, RED)
        t1 = MonoTree(RED, frozenset([v1(0), v2(0)]), ((v1(0), v2(0)),))
        t2 = MonoTree(RED, frozenset([v1(1), v2(0)]), ((v1(1), v2(0)),))
        report = validate_cover(g, col, TreeCover((t1, t2), frozenset([v2(1)])))
        assert any("share" in v for v in report.violations)

    def test_bad_edge_count_detected(self):
        g = BipartiteGraph.complete(2, 2)
        col = TwoColouring.monochromatic(g, RED)
        bad = MonoTree(RED, frozenset([v1(0), v2(0), v2(1)]), ((v1(0), v2(0)),))
        report = validate_cover(
            g, col, TreeCover((bad,), frozenset([v1(1)])))
        assert any("edges for" in v for v in report.violations)

    def test_wrong_colour_edge_detected(self):
        g, col = matching_graph()
        bad = MonoTree(RED, frozenset([v1(1), v2(1)]), ((v1(1), v2(1)),))
        cover = TreeCover((bad,), frozenset(set(g.vertices()) - {v1(1), v2(1)}))
        assert not validate_cover(g, col, cover).ok

    def test_coverage_gap_detected(self):
        g, col = matching_graph()
        t = MonoTree(RED, frozenset([v1(0), v2(0)]), ((v1(0), v2(0)),))
        report = validate_cover(g, col, TreeCover((t,), frozenset([v1(1)])))
        assert any("coverage" in v for v in report.violations)

    def test_partition_of_components_is_valid(self):
        g = BipartiteGraph.complete(3, 3)
        col = TwoColouring.monochromatic(g, BLUE)
        part = MonoPartition(((BLUE, frozenset(g.vertices())),))
        assert validate_partition(g, col, part).ok

    def test_partition_missing_vertex(self):
        g = BipartiteGraph.complete(2, 2)
        col = TwoColouring.monochromatic(g, BLUE)
        part = MonoPartition(((BLUE, frozenset([v1(0), v1(1), v2(0)])),))
        report = validate_partition(g, col, part)
        assert any("coverage" in v for v in report.violations)

    def test_partition_disconnected_part(self):
        # a2b2 and a3b3 are separate blue edges, so one blue part holding
        # all four vertices is disconnected in blue.
        g, col = matching_graph()
        part = MonoPartition((
            (BLUE, frozenset([v1(1), v2(1), v1(2), v2(2)])),
            (RED, frozenset([v1(0), v2(0)])),
        ))
        report = validate_partition(g, col, part)
        assert any("components" in v for v in report.violations)

    @settings(deadline=None, max_examples=30)
    @given(st.integers(0, 2 ** 32))
    def test_agrees_with_naive_validator(self, seed):
        g = sample_bipartite(ModelParams(6, 6, Fraction(2, 3)), seed)
        col = sample_colouring(g, Fraction(1, 2), seed)
        comps = monochromatic_components(g, col, RED)
        trees = []
        covered = set()
        for comp in comps:
            if len(comp) > 1:
                trees.append(spanning_tree_of(g, col, RED, comp))
                covered |= comp
        cover = TreeCover(tuple(trees), frozenset(set(g.vertices()) - covered))
        report = validate_cover(g, col, cover)
        assert report.ok == naive_validate_cover(g, col, cover)
        assert report.ok
        if trees:  # mutate: drop a vertex from the uncovered set
            broken = TreeCover(tuple(trees),
                               frozenset(list(cover.uncovered)[:-1])
                               if cover.uncovered else frozenset([v1(0)]))
            assert validate_cover(g, col, broken).ok \
                == naive_validate_cover(g, col, broken)


class TestSpanningTree:
    def test_single_vertex(self):
        g, col = matching_graph()
        tree = spanning_tree_of(g, col, RED, [v1(0)])
        assert tree.vertices == frozenset([v1(0)])
        assert tree.edges == ()

    def test_path(self):
        g, col = graph_from_coloured_edges(2, 1, [(0, 0, RED), (1, 0, RED)])
        tree = spanning_tree_of(g, col, RED, [v1(0), v1(1), v2(0)])
        assert len(tree.edges) == 2

    def test_cycle_spanning_tree(self):
        g, col = graph_from_coloured_edges(
            2, 2, [(0, 0, RED), (0, 1, RED), (1, 0, RED), (1, 1, RED)])
        tree = spanning_tree_of(g, col, RED, g.vertices())
        assert len(tree.vertices) == 4
        assert len(tree.edges) == 3
        assert validate_cover(g, col, TreeCover((tree,), frozenset())).ok

    def test_disconnected_raises(self):
        g, col = matching_graph()
        with pytest.raises(NotConnectedError):
            spanning_tree_of(g, col, RED, [v1(0), v2(0), v1(1), v2(1)])

    def test_wrong_colour_rejected(self):
        g, col = matching_graph()
        with pytest.raises(NotConnectedError):
            spanning_tree_of(g, col, BLUE, [v1(0), v2(0)])


def test_broken_covers_agree_with_naive():
    # mutate a valid cover three ways; both validators must reject each
    g = BipartiteGraph.complete(3, 3)
    col = TwoColouring.monochromatic(g, RED)
    tree = spanning_tree_of(g, col, RED, g.vertices())
    good = TreeCover((tree,), frozenset())
    assert validate_cover(g, col, good).ok and naive_validate_cover(g, col, good)

    recoloured = TreeCover((MonoTree(BLUE, tree.vertices, tree.edges),), frozenset())
    missing_edge = TreeCover((MonoTree(RED, tree.vertices, tree.edges[:-1]),),
                             frozenset())
    double_booked = TreeCover((tree,), frozenset([v1(0)]))
    for broken in (recoloured, missing_edge, double_booked):
        assert not validate_cover(g, col, broken).ok
        assert not naive_validate_cover(g, col, broken)


def test_partition_validator_agrees_with_naive():
    g, col = matching_graph()
    good = MonoPartition((
        (RED, frozenset([v1(0), v2(0)])),
        (BLUE, frozenset([v1(1), v2(1)])),
        (BLUE, frozenset([v1(2), v2(2)])),
    ))
    assert validate_partition(g, col, good).ok
    assert naive_validate_partition(g, col, good)
    bad = MonoPartition((
        (RED, frozenset([v1(0), v2(0), v1(1), v2(1)])),
        (BLUE, frozenset([v1(2), v2(2)])),
    ))
    assert not validate_partition(g, col, bad).ok
    assert not naive_validate_partition(g, col, bad)
