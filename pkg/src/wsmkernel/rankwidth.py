"""Cut-rank and exact rank-width by dynamic programming over vertex subsets.

The DP roots every cubic decomposition tree at the leaf of one fixed vertex
``r``; what remains is a rooted binary tree on ``V - r`` whose subtrees are
exactly the edge cuts of the decomposition. For ``S`` a subset of ``V - r``::

    f(S) = max(cut_rank(S), min over {T, S - T} of max(f(T), f(S - T)))

and ``rw(G) = f(V - r)``. Running time is ``O(3^n)`` set operations, which
is fine up to the default limit of 16 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .exceptions import CapacityError, ContractViolation
from .graph import Graph, bits, gf2_rank, to_mask

__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "DEFAULT_CAP_LIMIT",
    "ExceedsCap",
    "RankDecomposition",
    "cut_rank",
    "rank_width_exact",
    "rank_width_at_most",
]

DEFAULT_EXACT_LIMIT = 16
# Cap mode visits only subsets of small cut-rank, so it reaches a little further.
DEFAULT_CAP_LIMIT = 22

_INF = 1 << 30


def cut_rank(g: Graph, u: Iterable[int] | int) -> int:
    """GF(2) rank of the ``U x (V - U)`` adjacency submatrix."""
    mask = to_mask(u)
    if mask >> g.n:
        raise ContractViolation("vertex set has members outside the graph")
    rest = g.full_mask & ~mask
    return gf2_rank(g.adj[v] & rest for v in bits(mask))


class ExceedsCap:
    """Returned by cap-bounded calls when the rank-width is larger than the cap."""

    __slots__ = ("cap",)

    def __init__(self, cap: int):
        self.cap = cap

    def __repr__(self):
        return f"ExceedsCap(cap={self.cap})"

    def __bool__(self):
        return False


@dataclass
class RankDecomposition:
    """Subcubic tree whose leaves are mapped bijectively onto the vertices.

    ``adjacency`` maps node ids to neighbour lists; ``leaf_of`` maps each
    vertex to its leaf node. A graph with at most one vertex gets a single
    leaf and no edges.
    """

    adjacency: dict[int, list[int]]
    leaf_of: dict[int, int]
    width: int
    vertex_of: dict[int, int] = field(init=False)

    def __post_init__(self):
        self.vertex_of = {node: v for v, node in self.leaf_of.items()}

    def tree_edges(self) -> list[tuple[int, int]]:
        return sorted({(min(a, b), max(a, b)) for a, nbrs in self.adjacency.items() for b in nbrs})

    def side_of(self, a: int, b: int) -> int:
        """Vertex mask of the leaves on ``a``'s side of tree edge ``ab``."""
        mask = 0
        stack = [(a, b)]
        while stack:
            node, parent = stack.pop()
            if node in self.vertex_of:
                mask |= 1 << self.vertex_of[node]
            stack.extend((x, node) for x in self.adjacency[node] if x != parent)
        return mask

    def edge_widths(self, g: Graph) -> dict[tuple[int, int], int]:
        return {(a, b): cut_rank(g, self.side_of(a, b)) for a, b in self.tree_edges()}

    def check(self, g: Graph) -> None:
        """Raise ContractViolation unless this is a valid decomposition of ``g`` of width ``width``."""
        if sorted(self.leaf_of) != list(range(g.n)):
            raise ContractViolation("leaf map is not a bijection onto V(g)")
        if len(set(self.leaf_of.values())) != g.n:
            raise ContractViolation("two vertices share a leaf")
        for node, nbrs in self.adjacency.items():
            if node in self.vertex_of:
                if len(nbrs) > 1:
                    raise ContractViolation(f"leaf {node} has degree {len(nbrs)}")
            elif len(nbrs) != 3:
                raise ContractViolation(f"internal node {node} has degree {len(nbrs)}")
        edges = self.tree_edges()
        if len(edges) != max(len(self.adjacency) - 1, 0):
            raise ContractViolation("decomposition is not a tree")
        widths = self.edge_widths(g)
        actual = max(widths.values(), default=0)
        if actual != self.width:
            raise ContractViolation(f"declared width {self.width}, actual {actual}")


def _subset_table(g: Graph, ground: list[int]):
    """Cut-rank of every subset of ``ground``, indexed by compressed mask."""
    size = len(ground)
    full = g.full_mask
    rows_of = [g.adj[v] for v in ground]
    table = [0] * (1 << size)
    for idx in range(1, 1 << size):
        real = 0
        for i in bits(idx):
            real |= 1 << ground[i]
        rest = full & ~real
        table[idx] = gf2_rank(rows_of[i] & rest for i in bits(idx))
    return table


def _solve(g: Graph, cap: int | None):
    """Core DP. Returns (width or _INF, best_split table, ground list)."""
    root = g.n - 1
    ground = list(range(g.n - 1))
    size = len(ground)
    rho = _subset_table(g, ground)
    f = [_INF] * (1 << size)
    split = [0] * (1 << size)
    limit = _INF if cap is None else cap
    for s in range(1, 1 << size):
        r = rho[s]
        if r > limit:
            continue
        low = s & -s
        if s == low:
            f[s] = r
            continue
        rest = s ^ low
        best = _INF
        choice = 0
        sub = rest
        # T ranges over proper subsets of s containing the lowest bit.
        while True:
            if sub != rest:
                t = low | sub
                ft = f[t]
                if ft < best:
                    fu = f[s ^ t]
                    val = ft if ft > fu else fu
                    if val < best:
                        best = val
                        choice = t
                        if best <= r:
                            break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        if best >= _INF:
            continue
        val = best if best > r else r
        if val <= limit:
            f[s] = val
            split[s] = choice
    return f[(1 << size) - 1], split, ground, root


def _build_tree(split, ground, root, top_mask, width) -> RankDecomposition:
    adjacency: dict[int, list[int]] = {}
    leaf_of: dict[int, int] = {}
    counter = [0]

    def new_node():
        node = counter[0]
        counter[0] += 1
        adjacency[node] = []
        return node

    def link(a, b):
        adjacency[a].append(b)
        adjacency[b].append(a)

    def build(s):
        if s & (s - 1) == 0:
            node = new_node()
            leaf_of[ground[s.bit_length() - 1]] = node
            return node
        t = split[s]
        node = new_node()
        link(node, build(t))
        link(node, build(s ^ t))
        return node

    top = build(top_mask)
    root_leaf = new_node()
    leaf_of[root] = root_leaf
    link(root_leaf, top)
    return RankDecomposition(adjacency, leaf_of, width)


def _trivial_decomposition(g: Graph) -> RankDecomposition:
    if g.n == 0:
        return RankDecomposition({}, {}, 0)
    return RankDecomposition({0: []}, {0: 0}, 0)


def rank_width_exact(
    g: Graph,
    cap: int | None = None,
    limit: int = DEFAULT_EXACT_LIMIT,
    cap_limit: int = DEFAULT_CAP_LIMIT,
):
    """Exact rank-width with a witness decomposition.

    Returns ``(width, decomposition)``. With ``cap`` set, returns
    ``(ExceedsCap(cap), None)`` as soon as the rank-width is known to be larger
    than ``cap``; cap mode only visits subsets whose cut-rank is at most ``cap``
    and therefore accepts graphs up to ``cap_limit`` vertices instead of
    ``limit``.
    """
    if g.n <= 1:
        return 0, _trivial_decomposition(g)
    bound = limit if cap is None else cap_limit
    if g.n > bound:
        mode = "exact" if cap is None else "cap-bounded"
        hint = " (pass cap= for cap-bounded mode)" if cap is None else ""
        raise CapacityError(f"{mode} rank-width limited to {bound} vertices, graph has {g.n}{hint}")
    width, split, ground, root = _solve(g, cap)
    if width >= _INF:
        return ExceedsCap(cap), None
    top = (1 << len(ground)) - 1
    return width, _build_tree(split, ground, root, top, width)


def rank_width_at_most(g: Graph, k: int, **kwargs) -> bool:
    width, _ = rank_width_exact(g, cap=k, **kwargs)
    return not isinstance(width, ExceedsCap)
