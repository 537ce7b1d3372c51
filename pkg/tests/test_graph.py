import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cycle, graphs, path
from wsmkernel.exceptions import ContractViolation, GraphParseError
from wsmkernel.graph import (
    Gf2Matrix,
    Graph,
    component_masks,
    disjoint_union,
    from_mask,
    gf2_rank,
    induced_subgraph,
    is_acyclic,
    parse_gr,
    parse_gr_collection,
    remove_vertices,
    to_mask,
    write_gr,
)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def gf2_rank_numpy(matrix):
    """Gaussian elimination over GF(2) on a dense array, written independently."""
    a = np.array(matrix, dtype=np.uint8) % 2
    if a.size == 0:
        return 0
    rank = 0
    rows, cols = a.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, col]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, col]:
                a[r] ^= a[rank]
        rank += 1
    return rank


class TestGraphBasics:
    def test_edges_are_normalised(self):
        g = Graph(3, [(1, 0), (0, 1), (2, 1)])
        assert g.edges() == [(0, 1), (1, 2)]
        assert g.m == 2

    def test_self_loop_rejected(self):
        with pytest.raises(ContractViolation):
            Graph(2, [(1, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ContractViolation):
            Graph(2, [(0, 2)])

    def test_immutable_and_hashable(self):
        g = cycle(4)
        with pytest.raises(AttributeError):
            g.n = 5
        assert {g: 1}[cycle(4)] == 1

    def test_relabel(self):
        g = path(3).relabel([2, 1, 0])
        assert g.edges() == [(0, 1), (1, 2)]

    def test_induced_subgraph_mapping(self):
        g = cycle(5)
        sub, index = induced_subgraph(g, {0, 1, 3})
        assert sub.n == 3 and sub.edges() == [(0, 1)]
        assert index == {0: 0, 1: 1, 3: 2}

    def test_remove_vertices(self):
        rest, _ = remove_vertices(cycle(4), {0})
        assert rest.edges() == [(0, 1), (1, 2)]

    def test_disjoint_union_offsets(self):
        g, offsets = disjoint_union(path(2), path(3))
        assert g.n == 5 and offsets == [0, 2]
        assert g.edges() == [(0, 1), (2, 3), (3, 4)]

    def test_masks_round_trip(self):
        assert from_mask(to_mask([0, 3, 5])) == frozenset({0, 3, 5})


class TestGrFormat:
    def test_parse_c5(self):
        g = parse_gr("c five cycle\np graph 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n")
        assert g.n == 5 and g.m == 5

    def test_write_then_parse(self):
        g = cycle(6)
        text = write_gr(g, ["hello"])
        assert text.startswith("c hello\np graph 6 6\n")
        assert parse_gr(text) == g

    @pytest.mark.parametrize(
        "text, line",
        [
            ("1 2\n", 1),
            ("p graph 3 1\n1 4\n", 2),
            ("p graph 3 1\n1 1\n", 2),
            ("p graph 3 2\n1 2\n", None),
            ("p graph x 1\n", 1),
            ("p graph 2 0\np graph 2 0\n", 2),
            ("p graph 3 1\n1 2 3\n", 2),
        ],
    )
    def test_errors_carry_line(self, text, line):
        with pytest.raises(GraphParseError) as exc:
            parse_gr(text)
        assert exc.value.line == line

    def test_missing_header(self):
        with pytest.raises(GraphParseError):
            parse_gr("c only a comment\n")

    def test_bad_utf8(self):
        with pytest.raises(GraphParseError):
            parse_gr(b"\xff\xfe")

    def test_collection_names(self):
        text = "c name K2\np graph 2 1\n1 2\nc name P3\np graph 3 2\n1 2\n2 3\n"
        gs = parse_gr_collection(text)
        assert [g.name for g in gs] == ["K2", "P3"]

    @given(graphs(max_n=9))
    def test_round_trip_property(self, g):
        assert parse_gr(write_gr(g)) == g


class TestStructure:
    @given(graphs(max_n=9))
    def test_components_match_networkx(self, g):
        ours = sorted(sorted(from_mask(m)) for m in component_masks(g))
        theirs = sorted(sorted(c) for c in nx.connected_components(to_nx(g)))
        assert ours == theirs

    @given(graphs(min_n=1, max_n=9))
    def test_acyclic_matches_networkx(self, g):
        assert is_acyclic(g) == nx.is_forest(to_nx(g))

    def test_acyclic_within(self):
        assert not is_acyclic(cycle(4))
        assert is_acyclic(cycle(4), within=0b0111)


class TestGf2:
    def test_identity(self):
        assert gf2_rank([1, 2, 4]) == 3

    def test_dependent_rows(self):
        assert gf2_rank([0b011, 0b110, 0b101]) == 2

    def test_matrix_transpose(self):
        m = Gf2Matrix([[1, 0, 1], [0, 1, 1]])
        assert m.shape == (2, 3)
        assert m.transpose().shape == (3, 2)
        assert m.rank() == m.transpose().rank() == 2

    @given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), max_size=6))
    def test_rank_matches_dense_elimination(self, rows):
        ours = Gf2Matrix(rows, ncols=5).rank() if rows else 0
        assert ours == gf2_rank_numpy(rows)
