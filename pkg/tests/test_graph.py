"""Graph container, preprocessing, and partition metrics."""

import numpy as np
import pytest

from conftest import (
    brute_cutsize,
    graph_from_edges,
    path_graph,
    random_graph,
    random_partition,
    triangle_graph,
)
from jetpart.errors import PreprocessError
from jetpart.graph import (
    PartitionState,
    cutsize,
    imbalance_of,
    is_balanced,
    part_weight_limit,
    preprocess,
)


class TestPreprocess:
    def test_self_loop_and_duplicate_removed(self):
        graph, mapping = preprocess([(0, 1), (1, 0), (1, 1)], 2)
        assert graph.n == 2
        assert graph.m == 1
        assert np.array_equal(mapping, [0, 1])
        graph.validate()

    def test_largest_component_kept(self):
        graph, mapping = preprocess([(0, 1), (2, 3), (3, 4)], 5)
        assert graph.n == 3
        assert graph.m == 2
        assert np.array_equal(mapping, [-1, -1, 0, 1, 2])

    def test_duplicate_weights_keep_maximum(self):
        graph, _ = preprocess([(0, 1, 2), (0, 1, 5)], 2)
        assert graph.m == 1
        assert graph.edge_weights.tolist() == [5, 5]

    def test_component_tie_keeps_smallest_vertex_id(self):
        graph, mapping = preprocess([(2, 3), (0, 1)], 4)
        assert graph.n == 2
        assert mapping.tolist() == [0, 1, -1, -1]

    def test_empty_after_cleaning_rejected(self):
        with pytest.raises(PreprocessError):
            preprocess([(1, 1)], 3)

    def test_out_of_range_rejected(self):
        with pytest.raises(PreprocessError):
            preprocess([(0, 9)], 3)

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(PreprocessError):
            preprocess([(0, 1, 0)], 2)

    def test_vertex_weights_subset_to_component(self):
        graph, _ = preprocess([(1, 2), (2, 3)], 5, vertex_weights=[9, 4, 5, 6, 9])
        assert graph.vertex_weights.tolist() == [4, 5, 6]

    def test_random_multisets_yield_valid_graphs(self, rng):
        for _ in range(60):
            n = int(rng.integers(2, 25))
            count = int(rng.integers(1, 60))
            edges = np.stack(
                [
                    rng.integers(0, n, size=count),
                    rng.integers(0, n, size=count),
                    rng.integers(1, 9, size=count),
                ],
                axis=1,
            )
            try:
                graph, mapping = preprocess(edges, n)
            except PreprocessError:
                assert all(u == v for u, v, _ in edges)
                continue
            graph.validate()
            kept = mapping[mapping >= 0]
            assert len(np.unique(kept)) == graph.n


class TestCutsize:
    def test_triangle_single_part(self):
        assert cutsize(triangle_graph(), [0, 0, 0]) == 0

    def test_path_two_blocks(self):
        assert cutsize(path_graph(4), [0, 0, 1, 1]) == 1

    def test_single_weighted_edge(self):
        graph = graph_from_edges([(0, 1, 7)], 2)
        assert cutsize(graph, [0, 1]) == 7

    def test_matches_brute_force(self, rng):
        for _ in range(25):
            graph = random_graph(rng, max_weight=5)
            k = int(rng.integers(1, 5))
            parts = rng.integers(0, k, size=graph.n)
            assert cutsize(graph, parts) == brute_cutsize(graph, parts)

    def test_partition_state_caches_agree(self, rng):
        graph = random_graph(rng, max_weight=4, max_vertex_weight=3)
        state = random_partition(rng, graph, 3)
        state.check(graph)


class TestBalance:
    def test_even_split_within_limit(self):
        graph = path_graph(8)
        state = PartitionState.from_parts(graph, [0] * 4 + [1] * 4, 2)
        assert part_weight_limit(8, 2, 0.03) == 4
        assert is_balanced(state, 0.03)

    def test_uneven_split_violates(self):
        graph = path_graph(8)
        state = PartitionState.from_parts(graph, [0] * 5 + [1] * 3, 2)
        assert not is_balanced(state, 0.03)

    def test_zero_imbalance_even_split(self):
        graph = path_graph(8)
        state = PartitionState.from_parts(graph, [0] * 4 + [1] * 4, 2)
        assert is_balanced(state, 0.0)

    def test_limit_uses_exact_rationals(self):
        # 1.3 * 10 floors to 13 even though the float product is 12.999...
        assert part_weight_limit(20, 2, 0.3) == 13

    def test_imbalance_even(self):
        graph = path_graph(8)
        state = PartitionState.from_parts(graph, [0] * 4 + [1] * 4, 2)
        assert imbalance_of(state) == 1.0

    def test_imbalance_uneven(self):
        graph = path_graph(8)
        state = PartitionState.from_parts(graph, [0] * 6 + [1] * 2, 2)
        assert imbalance_of(state) == 1.5

    def test_single_part_trivial(self):
        graph = path_graph(5)
        state = PartitionState.from_parts(graph, [0] * 5, 1)
        assert imbalance_of(state) == 1.0
        assert is_balanced(state, 0.0)
        assert state.cutsize == 0

    def test_part_id_out_of_range(self):
        graph = path_graph(3)
        with pytest.raises(ValueError):
            PartitionState.from_parts(graph, [0, 1, 2], 2)
