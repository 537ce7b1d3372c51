"""Input coercion and parameter checks shared by the estimators and the CLI."""

from __future__ import annotations

import os
from numbers import Integral

import numpy as np

from .corpus import corpus_formula, corpus_names
from .exceptions import ContractViolation
from .graph import Graph, parse_gr
from .modulators import TargetClass, parse_class
from .mso import MsoFormula, load_formula, parse_formula

__all__ = [
    "check_graph",
    "check_nonnegative_int",
    "check_positive_int",
    "check_formula",
    "check_target",
]


def check_graph(g, name: str = "graph") -> Graph:
    """Coerce ``g`` to a :class:`Graph`.

    Accepts a :class:`Graph`, a networkx graph (vertices relabelled in
    sorted order), a square symmetric 0/1 array with zero diagonal, or the
    text of a .gr file.
    """
    if isinstance(g, Graph):
        return g
    if isinstance(g, (str, bytes)):
        return parse_gr(g)
    if hasattr(g, "nodes") and hasattr(g, "edges"):
        if g.is_directed():
            raise ContractViolation(f"{name} must be undirected")
        order = sorted(g.nodes())
        index = {v: i for i, v in enumerate(order)}
        return Graph(len(order), [(index[u], index[v]) for u, v in g.edges()])
    a = np.asarray(g)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation(f"{name} must be a square adjacency matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ContractViolation(f"{name} adjacency matrix is not symmetric")
    if np.any(np.diag(a)):
        raise ContractViolation(f"{name} adjacency matrix has self-loops")
    if not np.isin(a, (0, 1)).all():
        raise ContractViolation(f"{name} adjacency matrix must be 0/1")
    rows, cols = np.nonzero(np.triu(a, 1))
    return Graph(a.shape[0], zip(rows.tolist(), cols.tolist()))


def check_nonnegative_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 0:
        raise ContractViolation(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def check_positive_int(value, name: str) -> int:
    value = check_nonnegative_int(value, name)
    if value == 0:
        raise ContractViolation(f"{name} must be positive")
    return value


def check_formula(phi, free_sets=None) -> MsoFormula:
    """Accept a parsed formula, a path to a formula file, a shipped formula
    name, or formula text (tried in that order)."""
    if isinstance(phi, MsoFormula):
        return phi
    if isinstance(phi, os.PathLike) or (isinstance(phi, str) and os.path.isfile(phi)):
        return load_formula(os.fspath(phi), free_sets=free_sets)
    if isinstance(phi, str) and phi in corpus_names():
        return corpus_formula(phi)
    if isinstance(phi, str):
        return parse_formula(phi, free_sets=free_sets)
    raise ContractViolation(f"cannot interpret {type(phi).__name__} as a formula")


def check_target(target: TargetClass) -> TargetClass:
    return parse_class(target)
