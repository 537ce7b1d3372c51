import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complete, cycle, graphs, path
from wsmkernel.corpus import corpus, corpus_formula, corpus_names
from wsmkernel.exceptions import CapacityError, ContractViolation, FormulaSyntaxError
from wsmkernel.graph import Graph
from wsmkernel.mso import (
    And,
    Edge,
    Eq,
    Implies,
    Mem,
    Not,
    Or,
    Quant,
    Structure,
    _free,
    evaluate,
    format_formula,
    load_formula,
    parse_formula,
    quantifier_rank,
)

CONNECTED = "allS X. (((ex x. X(x)) & (ex y. ~X(y))) -> ex u. ex v. ((X(u) & ~X(v)) & E(u,v)))"


def naive(g, node, pts, sets):
    """Textbook recursive semantics with full enumeration, no pruning."""
    if isinstance(node, Edge):
        return g.has_edge(pts[node.x], pts[node.y])
    if isinstance(node, Eq):
        return pts[node.x] == pts[node.y]
    if isinstance(node, Mem):
        return pts[node.x] in sets[node.var]
    if isinstance(node, Not):
        return not naive(g, node.arg, pts, sets)
    if isinstance(node, And):
        return naive(g, node.left, pts, sets) and naive(g, node.right, pts, sets)
    if isinstance(node, Or):
        return naive(g, node.left, pts, sets) or naive(g, node.right, pts, sets)
    if isinstance(node, Implies):
        return (not naive(g, node.left, pts, sets)) or naive(g, node.right, pts, sets)
    if node.is_set:
        domain = [
            frozenset(c) for k in range(g.n + 1) for c in itertools.combinations(range(g.n), k)
        ]
        results = (naive(g, node.body, pts, {**sets, node.var: s}) for s in domain)
    else:
        results = (naive(g, node.body, {**pts, node.var: v}, sets) for v in range(g.n))
    return any(results) if node.is_exists else all(results)


def three_colourable(g):
    return any(
        all(c[u] != c[v] for u, v in g.edges()) for c in itertools.product(range(3), repeat=g.n)
    )


POINTS = ["x", "y", "z"]
SETS = ["X", "Y"]

atoms = st.one_of(
    st.builds(Edge, st.sampled_from(POINTS), st.sampled_from(POINTS)),
    st.builds(Eq, st.sampled_from(POINTS), st.sampled_from(POINTS)),
    st.builds(Mem, st.sampled_from(SETS), st.sampled_from(POINTS)),
)


def _extend(children):
    return st.one_of(
        st.builds(Not, children),
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Implies, children, children),
        st.builds(Quant, st.sampled_from(["ex", "all"]), st.sampled_from(POINTS), children),
        st.builds(Quant, st.sampled_from(["exS", "allS"]), st.sampled_from(SETS), children),
    )


bodies = st.recursive(atoms, _extend, max_leaves=6)


def close(ast):
    """Bind every free variable so the result is a sentence."""
    points, sets = _free(ast)
    for p in sorted(points):
        ast = Quant("all", p, ast)
    for s in sorted(sets):
        ast = Quant("exS", s, ast)
    return ast


class TestParser:
    def test_precedence(self):
        phi = parse_formula("ex x. ex y. E(x,y) & x = y | ~E(y,x) -> E(x,x)")
        body = phi.ast.body.body
        assert isinstance(body, Implies)
        assert isinstance(body.left, Or) and isinstance(body.left.left, And)

    def test_quantifier_scope_is_maximal(self):
        phi = parse_formula("all x. ex y. E(x,y) | x = y")
        assert isinstance(phi.ast.body.body, Or)

    def test_free_sets_in_first_occurrence_order(self):
        phi = parse_formula("all x. (B(x) | A(x))")
        assert phi.free_set_vars == ("B", "A")

    def test_declared_free_sets(self):
        phi = parse_formula("all x. S(x)", free_sets=["S", "T"])
        assert phi.free_set_vars == ("S", "T")

    def test_free_points(self):
        phi = parse_formula("E(u,v)", free_points=["u", "v"])
        assert phi.free_point_vars == ("u", "v")
        assert evaluate(Structure(path(2), point_interp=[0, 1]), phi)

    @pytest.mark.parametrize(
        "text, pos",
        [
            ("", 0),
            ("ex x.", 5),
            ("ex x. E(x,", 10),
            ("ex x. E(x,x) )", 13),
            ("ex x. $", 6),
            ("ex X. E(X,X)", 3),
            ("exS x. x(x)", 4),
        ],
    )
    def test_syntax_errors_report_position(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula(text)
        assert exc.value.position == pos

    def test_unbound_point_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("E(x,y)")

    def test_comments_in_files(self, tmp_path):
        f = tmp_path / "phi.mso"
        f.write_text("# comment\nex x. # trailing\n all y. ~E(x,y)\n")
        assert load_formula(f).quantifier_rank == 2

    @given(bodies)
    def test_format_parse_round_trip(self, body):
        ast = close(body)
        assert parse_formula(format_formula(ast)).ast == ast


class TestRank:
    def test_three_colouring_rank(self):
        assert corpus_formula("3col").quantifier_rank == 5

    def test_rank_is_syntactic(self):
        # a vacuous quantifier still counts
        assert parse_formula("ex x. ex y. E(x,x)").quantifier_rank == 2

    def test_rank_of_connectivity(self):
        assert quantifier_rank(parse_formula(CONNECTED)) == 3


class TestEvaluate:
    @given(graphs(max_n=7))
    def test_three_colouring(self, g):
        assert evaluate(Structure(g), corpus_formula("3col")) == three_colourable(g)

    @given(graphs(min_n=1, max_n=7))
    def test_connectivity(self, g):
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges())
        assert evaluate(Structure(g), parse_formula(CONNECTED)) == nx.is_connected(h)

    @given(graphs(max_n=7))
    def test_isolated_vertex(self, g):
        assert evaluate(Structure(g), corpus_formula("isolated")) == any(g.degree(v) == 0 for v in range(g.n))

    @given(graphs(max_n=6), st.integers(0, 63))
    def test_vertex_cover_with_free_set(self, g, bits):
        s = frozenset(v for v in range(g.n) if bits >> v & 1)
        expected = all(u in s or v in s for u, v in g.edges())
        assert evaluate(Structure(g, [s]), corpus_formula("vertex_cover")) == expected

    @given(graphs(max_n=6), st.integers(0, 63))
    def test_dominating_set_with_free_set(self, g, bits):
        s = frozenset(v for v in range(g.n) if bits >> v & 1)
        expected = all(v in s or g.neighbors(v) & s for v in range(g.n))
        assert evaluate(Structure(g, [s]), corpus_formula("dominating_set")) == bool(expected)

    @given(graphs(max_n=4), bodies)
    def test_matches_naive_semantics(self, g, body):
        ast = close(body)
        phi = parse_formula(format_formula(ast))
        assert evaluate(Structure(g), phi) == naive(g, ast, {}, {})

    def test_empty_graph(self):
        assert not evaluate(Structure(Graph(0)), parse_formula("ex x. x = x"))
        assert evaluate(Structure(Graph(0)), parse_formula("all x. E(x,x)"))
        assert evaluate(Structure(Graph(0)), corpus_formula("3col"))

    def test_known_values(self):
        phi = corpus_formula("3col")
        assert evaluate(Structure(cycle(5)), phi)
        assert not evaluate(Structure(complete(4)), phi)

    def test_twenty_vertices_allowed(self):
        g = Graph(20, [(i, (i + 1) % 20) for i in range(20)] + [(0, 10)])
        assert evaluate(Structure(g), corpus_formula("3col"))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            evaluate(Structure(path(21)), corpus_formula("3col"))

    def test_arity_mismatch(self):
        with pytest.raises(ContractViolation):
            evaluate(Structure(path(3)), corpus_formula("vertex_cover"))

    def test_structure_validates_vertices(self):
        with pytest.raises(ContractViolation):
            Structure(path(3), [frozenset({5})])


class TestCorpus:
    def test_names(self):
        assert {"3col", "isolated", "vertex_cover", "dominating_set"} <= set(corpus_names())

    def test_rank_filter(self):
        low = corpus(max_rank=2, sentences_only=True)
        assert low and all(phi.quantifier_rank <= 2 and phi.is_sentence for phi in low.values())

    def test_unknown(self):
        with pytest.raises(KeyError):
            corpus_formula("nope")
