import networkx as nx
import numpy as np
import pytest

from conftest import cycle
from wsmkernel.corpus import corpus, corpus_formula, corpus_names
from wsmkernel.exceptions import ContractViolation, FormulaSyntaxError, GraphParseError
from wsmkernel.graph import write_gr
from wsmkernel.mso import MsoFormula
from wsmkernel.validation import check_formula, check_graph, check_nonnegative_int, check_positive_int, check_target


def test_graph_inputs_agree():
    g = cycle(5)
    h = nx.cycle_graph(5)
    a = nx.to_numpy_array(h, dtype=int)
    assert check_graph(g) is g
    assert check_graph(h) == g
    assert check_graph(a) == g
    assert check_graph(write_gr(g)) == g


def test_networkx_relabels_sorted():
    h = nx.Graph([("b", "c"), ("a", "b")])
    assert sorted(check_graph(h).edges()) == [(0, 1), (1, 2)]


@pytest.mark.parametrize(
    "bad",
    [np.zeros((2, 3)), np.array([[0, 1], [0, 0]]), np.eye(2, dtype=int), np.array([[0, 2], [2, 0]])],
)
def test_bad_matrices(bad):
    with pytest.raises(ContractViolation):
        check_graph(bad)


def test_directed_rejected():
    with pytest.raises(ContractViolation):
        check_graph(nx.DiGraph([(0, 1)]))


def test_bad_gr_text():
    with pytest.raises(GraphParseError):
        check_graph("p graph 2 1\n1 3\n")


@pytest.mark.parametrize("v", [-1, 1.5, True, "3", None])
def test_int_checks(v):
    with pytest.raises(ContractViolation):
        check_nonnegative_int(v, "x")


def test_positive():
    assert check_nonnegative_int(0, "x") == 0
    assert check_positive_int(np.int64(4), "x") == 4
    with pytest.raises(ContractViolation):
        check_positive_int(0, "x")


def test_formula_sources(tmp_path):
    text = "ex x. all y. (x = y | E(x, y))"
    path = tmp_path / "f.mso"
    path.write_text(text)
    a = check_formula(text)
    assert isinstance(a, MsoFormula)
    assert check_formula(path).quantifier_rank == a.quantifier_rank == 2
    assert check_formula(str(path)).is_sentence
    assert check_formula(a) is a
    assert check_formula("vertex_cover") == corpus_formula("vertex_cover")
    with pytest.raises(ContractViolation):
        check_formula(3)
    with pytest.raises(FormulaSyntaxError):
        check_formula("ex x.")


def test_targets():
    assert check_target("forest") == "forest"
    with pytest.raises(ContractViolation):
        check_target("bogus")


def test_corpus():
    names = corpus_names()
    assert {"3col", "vertex_cover", "isolated", "triangle"} <= set(names)
    assert all(phi.quantifier_rank <= 2 for phi in corpus(max_rank=2).values())
    assert all(phi.is_sentence for phi in corpus(sentences_only=True).values())
    assert not corpus_formula("vertex_cover").is_sentence
    with pytest.raises(KeyError):
        corpus_formula("nope")
