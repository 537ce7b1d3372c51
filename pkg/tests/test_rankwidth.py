import random

import pytest
from hypothesis import given

from conftest import complete, cycle, graphs, path
from wsmkernel.exceptions import CapacityError, ContractViolation
from wsmkernel.generators import PETERSEN, random_graph
from wsmkernel.graph import Graph
from wsmkernel.oracles import rank_width_by_trees
from wsmkernel.rankwidth import ExceedsCap, cut_rank, rank_width_at_most, rank_width_exact
from wsmkernel.splits import rank_width


class TestCutRank:
    def test_c5_pairs(self):
        # adjacent pair versus non-adjacent pair on the five-cycle
        assert cut_rank(cycle(5), {0, 1}) == 2
        assert cut_rank(cycle(5), {0, 2}) == 2

    def test_star_centre(self):
        star = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert cut_rank(star, {0}) == 1
        assert cut_rank(star, {1, 2}) == 1

    def test_outside_vertex_rejected(self):
        with pytest.raises(ContractViolation):
            cut_rank(cycle(4), {7})

    @given(graphs(max_n=8))
    def test_symmetric(self, g):
        a = {v for v in range(g.n) if v % 2 == 0}
        assert cut_rank(g, a) == cut_rank(g, set(range(g.n)) - a)

    @given(graphs(max_n=8))
    def test_bounded_by_side_sizes(self, g):
        a = set(range(g.n // 2))
        assert cut_rank(g, a) <= min(len(a), g.n - len(a))


class TestExact:
    def test_c5_width_two_with_witness(self):
        width, dec = rank_width_exact(cycle(5))
        assert width == 2
        dec.check(cycle(5))
        assert max(dec.edge_widths(cycle(5)).values()) == 2

    @pytest.mark.parametrize(
        "g, expected",
        [(Graph(0), 0), (Graph(1), 0), (path(2), 1), (path(6), 1), (complete(5), 1), (cycle(4), 1), (cycle(6), 2)],
    )
    def test_small_families(self, g, expected):
        width, dec = rank_width_exact(g)
        assert width == expected
        dec.check(g)

    def test_petersen(self):
        # value from the tree-enumeration oracle would need 10 leaves; use the split route cross-check
        width, _ = rank_width_exact(PETERSEN)
        assert width == rank_width(PETERSEN) == 3

    def test_cap_mode(self):
        width, dec = rank_width_exact(cycle(6), cap=1)
        assert isinstance(width, ExceedsCap) and dec is None
        assert not width
        assert rank_width_at_most(cycle(6), 2)
        assert not rank_width_at_most(cycle(6), 1)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            rank_width_exact(path(17))

    def test_bad_witness_detected(self):
        width, dec = rank_width_exact(cycle(5))
        dec.width = 1
        with pytest.raises(ContractViolation):
            dec.check(cycle(5))

    @given(graphs(max_n=7))
    def test_dp_matches_tree_enumeration(self, g):
        width, dec = rank_width_exact(g)
        assert width == rank_width_by_trees(g)
        dec.check(g)

    @given(graphs(max_n=8))
    def test_split_route_matches_dp(self, g):
        assert rank_width(g) == rank_width_exact(g)[0]

    def test_split_route_on_larger_random(self):
        rng = random.Random(7)
        for _ in range(30):
            g = random_graph(rng, 11, rng.uniform(0.2, 0.6))
            assert rank_width(g) == rank_width_exact(g)[0]

    @given(graphs(max_n=8))
    def test_induced_subgraph_monotone(self, g):
        if g.n < 2:
            return
        sub = Graph(g.n - 1, [(u, v) for u, v in g.edges() if v < g.n - 1])
        assert rank_width_exact(sub)[0] <= rank_width_exact(g)[0]
