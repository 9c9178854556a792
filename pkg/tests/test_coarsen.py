"""Matching, contraction, and hierarchy construction."""

import numpy as np

from conftest import graph_from_edges, path_graph, random_graph, star_graph
from jetpart.coarsen import build_hierarchy, contract, match_vertices
from jetpart.graph import cutsize


class TestMatching:
    def test_single_edge_pairs_up(self):
        partner = match_vertices(graph_from_edges([(0, 1)], 2))
        assert partner.tolist() == [1, 0]

    def test_path_of_three_leaves_singleton(self):
        partner = match_vertices(path_graph(3))
        assert partner.tolist() == [1, 0, 2]

    def test_star_uses_two_hop_pairs(self):
        partner = match_vertices(star_graph(4))
        assert partner[0] == 1 and partner[1] == 0
        assert partner[2] == 3 and partner[3] == 2
        assert partner[4] == 4

    def test_heaviest_edge_preferred(self):
        graph = graph_from_edges([(0, 1, 1), (0, 2, 5), (1, 3, 1)], 4)
        partner = match_vertices(graph)
        assert partner[0] == 2 and partner[2] == 0
        assert partner[1] == 3 and partner[3] == 1

    def test_involution_property(self, rng):
        for _ in range(30):
            graph = random_graph(rng, max_weight=6)
            partner = match_vertices(graph)
            assert np.array_equal(partner[partner], np.arange(graph.n))


class TestContraction:
    def test_single_edge_collapses(self):
        graph = graph_from_edges([(0, 1, 3)], 2, vertex_weights=[2, 5])
        coarse, vmap = contract(graph, np.array([1, 0]))
        assert coarse.n == 1
        assert coarse.m == 0
        assert coarse.vertex_weights.tolist() == [7]
        assert vmap.tolist() == [0, 0]

    def test_square_aggregates_parallel_edges(self):
        graph = graph_from_edges([(0, 1), (1, 2), (2, 3), (3, 0)], 4)
        coarse, vmap = contract(graph, np.array([1, 0, 3, 2]))
        assert coarse.n == 2
        assert coarse.m == 1
        assert coarse.edge_weights.tolist() == [2, 2]
        assert vmap.tolist() == [0, 0, 1, 1]

    def test_triangle_with_singleton(self):
        graph = graph_from_edges([(0, 1, 1), (0, 2, 4), (1, 2, 2)], 3)
        coarse, vmap = contract(graph, np.array([1, 0, 2]))
        assert coarse.n == 2
        assert coarse.edge_weights.tolist() == [6, 6]
        assert vmap.tolist() == [0, 0, 1]

    def test_cut_preserved_under_projection(self, rng):
        for _ in range(25):
            graph = random_graph(rng, max_weight=5)
            partner = match_vertices(graph)
            coarse, vmap = contract(graph, partner)
            k = int(rng.integers(2, 5))
            coarse_parts = rng.integers(0, k, size=coarse.n)
            assert cutsize(coarse, coarse_parts) == cutsize(graph, coarse_parts[vmap])

    def test_weight_conserved(self, rng):
        graph = random_graph(rng, max_vertex_weight=4)
        coarse, _ = contract(graph, match_vertices(graph))
        assert coarse.total_vertex_weight == graph.total_vertex_weight
        coarse.validate()


class TestHierarchy:
    def test_small_graph_single_level(self):
        graph = path_graph(10)
        hierarchy = build_hierarchy(graph, target=50)
        assert len(hierarchy.levels) == 1
        assert hierarchy.maps == []

    def test_long_path_coarsens_to_target(self):
        graph = path_graph(2**12)
        hierarchy = build_hierarchy(graph, target=200)
        assert len(hierarchy.levels) >= 4
        assert hierarchy.levels[-1].n <= 200
        hierarchy.validate()

    def test_stagnation_exit_on_edgeless_level(self):
        # three disjoint edges contract to isolated vertices; the next
        # matching makes no progress and the loop must stop
        graph = graph_from_edges([(0, 1), (2, 3), (4, 5)], 6)
        hierarchy = build_hierarchy(graph, target=2)
        assert hierarchy.levels[-1].n == 3
        assert hierarchy.levels[-1].m == 0
        hierarchy.validate()

    def test_maps_compose_to_surjection(self, rng):
        graph = random_graph(rng, n_lo=40, n_hi=90)
        hierarchy = build_hierarchy(graph, target=8)
        hierarchy.validate()
        composed = np.arange(graph.n)
        for vmap in hierarchy.maps:
            composed = vmap[composed]
        assert len(np.unique(composed)) == hierarchy.levels[-1].n

    def test_projection_cut_invariance_through_levels(self, rng):
        graph = random_graph(rng, n_lo=60, n_hi=120, max_weight=3)
        hierarchy = build_hierarchy(graph, target=10)
        coarsest = hierarchy.levels[-1]
        parts = rng.integers(0, 3, size=coarsest.n)
        expected = cutsize(coarsest, parts)
        for level in range(len(hierarchy.levels) - 2, -1, -1):
            parts = parts[hierarchy.maps[level]]
            assert cutsize(hierarchy.levels[level], parts) == expected
