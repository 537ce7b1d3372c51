import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsmkernel.exceptions import ContractViolation
from wsmkernel.generators import (
    PETERSEN,
    cycles_with_pendant_trees,
    gen_planted,
    gen_vc_gap_family,
    random_cograph,
    random_tree,
    random_wide_graph,
)
from wsmkernel.graph import component_masks
from wsmkernel.modulators import verify_wsm
from wsmkernel.oracles import exact_vertex_cover, exact_wsn, in_class
from wsmkernel.rankwidth import rank_width_exact
from wsmkernel.splits import rank_width


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@given(st.integers(1, 30), st.integers(0, 10_000))
def test_random_tree_is_tree(n, seed):
    assert nx.is_tree(nxg(random_tree(random.Random(seed), n)))


@given(st.integers(1, 12), st.integers(0, 10_000))
def test_cograph_width(n, seed):
    g = random_cograph(random.Random(seed), n)
    assert g.n == n
    assert rank_width(g) <= 1
    # cographs contain no induced P4
    for quad in __import__("itertools").combinations(range(n), 4):
        sub = nxg(g).subgraph(quad)
        assert not (nx.is_connected(sub) and nx.is_isomorphic(sub, nx.path_graph(4)))


def test_petersen_width():
    assert rank_width_exact(PETERSEN)[0] == 3


def test_wide_graph():
    rng = random.Random(5)
    g = random_wide_graph(rng, 8, 3, p=0.55)
    assert rank_width_exact(g)[0] >= 3
    assert nx.is_connected(nxg(g))


def test_wide_graph_gives_up():
    with pytest.raises(ContractViolation):
        random_wide_graph(random.Random(0), 5, 3, max_tries=50)


@pytest.mark.parametrize("target", ["forest", "edgeless", "empty"])
@pytest.mark.parametrize("seed", range(4))
def test_planted_modulator_valid(seed, target):
    inst = gen_planted(seed, 2, 1, 3, target, max_vertices=12)
    assert verify_wsm(inst.graph, inst.modulator)
    assert inst.modulator.target == target


def test_planted_is_reproducible():
    a = gen_planted(7, 2, 1, 3, "forest")
    b = gen_planted(7, 2, 1, 3, "forest")
    assert a.graph == b.graph and a.modulator == b.modulator


@pytest.mark.parametrize("seed", range(3))
def test_petersen_plant_optimal_modulator(seed):
    inst = gen_planted(seed, 0, 1, 3, "forest", core="petersen", max_vertices=12)
    wsn = exact_wsn(inst.graph, 1, "forest")
    assert wsn <= inst.modulator.k
    assert not in_class(inst.graph, inst.graph.full_mask, "forest")


@pytest.mark.parametrize("i", [1, 2, 3, 5])
def test_vc_gap(i):
    g = gen_vc_gap_family(i)
    assert g.n == 2 * i + 1
    assert exact_vertex_cover(g) == i
    assert rank_width(g) <= 1


def test_vc_gap_rejects_zero():
    with pytest.raises(ContractViolation):
        gen_vc_gap_family(0)


@given(st.integers(0, 1000), st.integers(1, 3), st.integers(3, 6), st.integers(0, 15))
def test_pendant_shape(seed, cycles, cycle_len, tree_size):
    g = cycles_with_pendant_trees(seed, cycles, cycle_len, tree_size)
    assert g.n == cycles * (cycle_len + tree_size)
    assert g.max_degree() <= 4
    assert len(component_masks(g)) == 1
    # one independent cycle per ring, trees add none
    assert g.m - g.n + 1 == cycles
