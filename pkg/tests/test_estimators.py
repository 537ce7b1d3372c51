import networkx as nx
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import cycle, path
from wsmkernel.corpus import corpus_formula
from wsmkernel.estimators import (
    FvsKernelizer,
    MsoKernelizer,
    OptKernelizer,
    RankWidthEstimator,
    SplitClassifier,
    WsmFinder,
)
from wsmkernel.exceptions import ContractViolation
from wsmkernel.generators import PETERSEN, cycles_with_pendant_trees, gen_planted
from wsmkernel.mso import Structure, evaluate
from wsmkernel.oracles import brute_sim_c_partition, exact_opt_mso, in_class

ALL = [RankWidthEstimator, SplitClassifier, WsmFinder, MsoKernelizer, OptKernelizer, FvsKernelizer]


@pytest.mark.parametrize("cls", ALL)
def test_clone_round_trip(cls):
    est = cls()
    params = est.get_params()
    copy = clone(est)
    assert copy.get_params() == params
    assert copy is not est


@pytest.mark.parametrize("cls", [WsmFinder, MsoKernelizer, OptKernelizer, FvsKernelizer])
def test_transform_before_fit(cls):
    with pytest.raises(NotFittedError):
        cls().transform(path(3))


def test_rank_width():
    assert RankWidthEstimator().fit(nx.petersen_graph()).width_ == 3
    est = RankWidthEstimator(decomposition=True).fit(cycle(5))
    assert est.width_ == 2 and est.decomposition_ is not None
    capped = RankWidthEstimator(cap=2).fit(PETERSEN)
    assert capped.exceeds_cap_ and capped.width_ is None


def test_rank_width_bad_param():
    with pytest.raises(ContractViolation):
        RankWidthEstimator(cap=-1).fit(path(3))


def test_split_classifier_matches_brute_force():
    g = gen_planted(2, 0, 1, 3, "forest", core="petersen", max_vertices=12).graph
    labels = SplitClassifier(c=1).fit_predict(g)
    groups = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(v)
    expected = {frozenset(s) for s in brute_sim_c_partition(g, 1)}
    assert {frozenset(s) for s in groups.values()} == expected


def test_wsm_finder():
    inst = gen_planted(1, 2, 1, 3, "forest")
    est = WsmFinder(c=1, target="forest").fit(inst.graph)
    assert est.verified_
    rest = est.transform(inst.graph)
    assert in_class(rest, rest.full_mask, "forest")
    assert rest.n == inst.graph.n - sum(len(m) for m in est.modules_)


def test_mso_kernelizer():
    g = gen_planted(3, 0, 1, 9, "forest", core="petersen").graph
    phi = corpus_formula("universal_vertex")
    h = MsoKernelizer(formula=phi, target="forest").fit_transform(g)
    assert h.n < g.n
    assert evaluate(Structure(g), phi, limit=40) == evaluate(Structure(h), phi, limit=40)


def test_opt_kernelizer():
    g = gen_planted(0, 3, 1, 4, "empty", max_vertices=12).graph
    opt = exact_opt_mso(g, corpus_formula("vertex_cover"))
    est = OptKernelizer(formula="vertex_cover", budget=opt).fit(g)
    assert est.verdict_ is True
    if opt > 0:
        assert est.set_params(budget=opt - 1).fit(g).verdict_ is False


def test_fvs_kernelizer():
    g = cycles_with_pendant_trees(0, 2, 4, 20)
    phi = corpus_formula("isolated")
    h = FvsKernelizer(formula=phi).fit_transform(g)
    assert h.n < g.n
    assert evaluate(Structure(g), phi, limit=g.n) == evaluate(Structure(h), phi, limit=g.n)
