"""scikit-learn style front ends.

Each estimator keeps its constructor arguments verbatim (so ``get_params``
and ``clone`` work) and validates them in ``fit``. Fitted state lives in
attributes with a trailing underscore.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .games import DEFAULT_GAME_LIMIT
from .graph import remove_vertices
from .kernels import DEFAULT_SIZE_CAP, fvs_bd_kernel, mc_kernel, opt_winwin
from .modulators import find_wsm, verify_wsm
from .rankwidth import DEFAULT_EXACT_LIMIT, ExceedsCap, rank_width_exact
from .splits import rank_width, sim_c_classes
from .validation import check_formula, check_graph, check_nonnegative_int, check_positive_int, check_target

__all__ = [
    "RankWidthEstimator",
    "SplitClassifier",
    "WsmFinder",
    "MsoKernelizer",
    "OptKernelizer",
    "FvsKernelizer",
]


class RankWidthEstimator(BaseEstimator):
    """Rank-width of a graph.

    With ``decomposition=True`` the exact DP runs on the whole graph and the
    witness is kept in ``decomposition_``; otherwise the width comes from the
    prime bags of the split decomposition.
    """

    def __init__(self, cap=None, decomposition=False, exact_limit=DEFAULT_EXACT_LIMIT):
        self.cap = cap
        self.decomposition = decomposition
        self.exact_limit = exact_limit

    def fit(self, X, y=None):
        g = check_graph(X)
        cap = None if self.cap is None else check_nonnegative_int(self.cap, "cap")
        limit = check_positive_int(self.exact_limit, "exact_limit")
        if self.decomposition:
            width, self.decomposition_ = rank_width_exact(g, cap=cap, limit=limit)
        else:
            width, self.decomposition_ = rank_width(g, cap=cap), None
        self.exceeds_cap_ = isinstance(width, ExceedsCap)
        self.width_ = None if self.exceeds_cap_ else width
        return self


class SplitClassifier(BaseEstimator):
    """Partition of the vertices into the maximal split-modules of rank-width <= c.

    ``labels_[v]`` is the class index of vertex ``v``.
    """

    def __init__(self, c=1):
        self.c = c

    def fit(self, X, y=None):
        g = check_graph(X)
        self.partition_ = sim_c_classes(g, check_nonnegative_int(self.c, "c"))
        self.labels_ = [self.partition_.class_of(v) for v in range(g.n)]
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class WsmFinder(TransformerMixin, BaseEstimator):
    """Approximate well-structured modulator; ``transform`` deletes it."""

    def __init__(self, c=1, target="forest"):
        self.c = c
        self.target = target

    def fit(self, X, y=None):
        g = check_graph(X)
        self.modulator_ = find_wsm(g, check_nonnegative_int(self.c, "c"), check_target(self.target))
        self.modules_ = [m.vertices for m in self.modulator_.modules]
        self.k_ = self.modulator_.k
        self.verified_ = verify_wsm(g, self.modulator_)
        return self

    def transform(self, X):
        check_is_fitted(self, "modulator_")
        rest, _ = remove_vertices(check_graph(X), self.modulator_.mask)
        return rest


class _KernelBase(TransformerMixin, BaseEstimator):
    def transform(self, X):
        check_is_fitted(self, "kernel_")
        return self.kernel_.graph

    def _caps(self):
        return (
            check_positive_int(self.size_cap, "size_cap"),
            check_positive_int(self.game_limit, "game_limit"),
        )


class MsoKernelizer(_KernelBase):
    """Model-checking kernel for an MSO sentence."""

    def __init__(self, formula=None, target="empty", c=1, size_cap=DEFAULT_SIZE_CAP, game_limit=DEFAULT_GAME_LIMIT):
        self.formula = formula
        self.target = target
        self.c = c
        self.size_cap = size_cap
        self.game_limit = game_limit

    def fit(self, X, y=None):
        g = check_graph(X)
        phi = check_formula(self.formula)
        size_cap, game_limit = self._caps()
        self.kernel_ = mc_kernel(
            g, phi, check_target(self.target), check_nonnegative_int(self.c, "c"), size_cap, game_limit
        )
        return self


class OptKernelizer(_KernelBase):
    """Decides ``min |S| <= budget`` or produces an annotated kernel.

    ``verdict_`` is set when the instance was small enough to decide outright.
    """

    def __init__(self, formula=None, budget=0, c=1, size_cap=DEFAULT_SIZE_CAP, game_limit=DEFAULT_GAME_LIMIT):
        self.formula = formula
        self.budget = budget
        self.c = c
        self.size_cap = size_cap
        self.game_limit = game_limit

    def fit(self, X, y=None):
        g = check_graph(X)
        phi = check_formula(self.formula)
        size_cap, game_limit = self._caps()
        r = check_nonnegative_int(self.budget, "budget")
        self.kernel_ = opt_winwin(g, phi, r, check_nonnegative_int(self.c, "c"), size_cap, game_limit)
        self.verdict_ = self.kernel_.verdict
        self.annotation_ = self.kernel_.annotation
        return self


class FvsKernelizer(_KernelBase):
    """Kernel for bounded-degree inputs, parameterised by feedback vertex set."""

    def __init__(self, formula=None, max_degree=4, size_cap=DEFAULT_SIZE_CAP, game_limit=None):
        self.formula = formula
        self.max_degree = max_degree
        self.size_cap = size_cap
        self.game_limit = game_limit

    def fit(self, X, y=None):
        g = check_graph(X)
        phi = check_formula(self.formula)
        limit = None if self.game_limit is None else check_positive_int(self.game_limit, "game_limit")
        self.kernel_ = fvs_bd_kernel(
            g,
            phi,
            check_nonnegative_int(self.max_degree, "max_degree"),
            check_positive_int(self.size_cap, "size_cap"),
            limit,
        )
        return self
