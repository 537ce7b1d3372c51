import random

import pytest
from hypothesis import given

from conftest import complete, cycle, graphs, path
from wsmkernel.exceptions import BelowThresholdError, ContractViolation
from wsmkernel.generators import PETERSEN, random_wide_graph
from wsmkernel.graph import Graph, from_mask, to_mask
from wsmkernel.oracles import brute_sim_c_partition, brute_split_modules
from wsmkernel.splits import (
    frontier,
    is_split_module,
    rank_width_of_set,
    sim_c_classes,
    split_decomposition,
    split_module,
)


def p4():
    return path(4)


class TestSplitModules:
    def test_p4_examples(self):
        # a-b-c-d
        assert not is_split_module(p4(), {1, 2})
        assert is_split_module(p4(), {0, 1})

    def test_trivial_sets(self):
        g = cycle(5)
        assert is_split_module(g, set())
        assert is_split_module(g, set(range(5)))
        assert is_split_module(g, {3})

    def test_whole_component_has_empty_frontier(self):
        g = Graph(5, [(0, 1), (2, 3), (3, 4)])
        assert frontier(g, {2, 3, 4}) == frozenset()
        m = split_module(g, {0, 1})
        assert m.frontier == frozenset() and len(m) == 2

    def test_frontier_of_pair(self):
        assert frontier(p4(), {0, 1}) == frozenset({1})

    def test_non_module_rejected(self):
        with pytest.raises(ContractViolation):
            frontier(p4(), {1, 2})

    def test_across_components_rejected(self):
        g = Graph(4, [(0, 1), (2, 3)])
        assert not is_split_module(g, {1, 2})

    @given(graphs(max_n=7))
    def test_matches_definition(self, g):
        expected = set(brute_split_modules(g))
        for mask in range(1 << g.n):
            assert is_split_module(g, mask) == (from_mask(mask) in expected)


class TestSplitDecomposition:
    def test_c5_prime(self):
        (tree,) = split_decomposition(cycle(5))
        assert [b.kind for b in tree.bags] == ["prime"]

    def test_clique_and_star_degenerate(self):
        (tree,) = split_decomposition(complete(5))
        assert [b.kind for b in tree.bags] == ["clique"]
        (tree,) = split_decomposition(Graph(4, [(0, 1), (0, 2), (0, 3)]))
        assert [b.kind for b in tree.bags] == ["star"]

    @given(graphs(max_n=9))
    def test_recomposes_to_input(self, g):
        for tree in split_decomposition(g):
            rebuilt = tree.recompose(g.n)
            mask = to_mask(tree.vertices)
            for v in tree.vertices:
                assert rebuilt.adj[v] == g.adj[v] & mask

    @given(graphs(max_n=8))
    def test_markers_pair_up(self, g):
        for tree in split_decomposition(g):
            for a, b in tree.links.values():
                assert a != b


class TestSimClasses:
    def test_below_threshold_whole_graph(self):
        part = sim_c_classes(path(6), 1)
        assert part.whole_graph and part.classes == [frozenset(range(6))]

    def test_at_threshold_raises(self):
        with pytest.raises(BelowThresholdError) as exc:
            sim_c_classes(cycle(5), 1)
        assert exc.value.width == 2

    def test_negative_c(self):
        with pytest.raises(ContractViolation):
            sim_c_classes(cycle(5), -1)

    def test_petersen_singletons(self):
        part = sim_c_classes(PETERSEN, 1)
        assert sorted(len(c) for c in part) == [1] * 10

    def test_class_of(self):
        part = sim_c_classes(PETERSEN, 1)
        assert part.class_of(4) == [i for i, c in enumerate(part) if 4 in c][0]

    def test_matches_brute_force_on_wide_graphs(self):
        rng = random.Random(2)
        for _ in range(4):
            g = random_wide_graph(rng, 8, 3, p=0.55)
            ours = sorted(sorted(c) for c in sim_c_classes(g, 1))
            assert ours == sorted(sorted(c) for c in brute_sim_c_partition(g, 1))

    def test_rank_width_of_set(self):
        assert rank_width_of_set(PETERSEN, 0b11111) == 2
