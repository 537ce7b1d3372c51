"""Splits, split-modules, the split decomposition and the ``~c`` partition.

A split-module of a connected graph is one side of a bipartition whose cut
has GF(2) rank at most one; the empty set and whole components (and the full
vertex set) count as split-modules by convention. The split decomposition
here is the recursive one: find any non-trivial split, cut along it with a
pair of marker vertices, recurse, then merge neighbouring degenerate bags
until the tree is reduced (hence canonical).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .exceptions import BelowThresholdError, ContractViolation, InvariantViolation
from .graph import (
    Graph,
    bits,
    component_masks,
    from_mask,
    induced_subgraph,
    popcount,
    to_mask,
)
from .rankwidth import ExceedsCap, rank_width_exact

__all__ = [
    "SplitModule",
    "SplitBag",
    "SplitTree",
    "SplitModulePartition",
    "is_split_module",
    "frontier",
    "split_module",
    "split_decomposition",
    "sim_c_classes",
    "rank_width",
    "rank_width_of_set",
]


# --------------------------------------------------------------------------
# split-modules


def _component_of(g: Graph, mask: int) -> int | None:
    """The component containing all of ``mask``, or None if it spans several."""
    for comp in component_masks(g):
        if comp & mask:
            return comp if mask & ~comp == 0 else None
    return None


def _frontier_mask(g: Graph, mask: int, comp: int) -> int:
    outside = comp & ~mask
    out = 0
    for v in bits(mask):
        if g.adj[v] & outside:
            out |= 1 << v
    return out


def _is_split_mask(g: Graph, mask: int) -> bool:
    if mask == 0 or mask == g.full_mask:
        return True
    comp = _component_of(g, mask)
    if comp is None:
        return False
    if comp == mask:
        return True
    outside = comp & ~mask
    seen = None
    for v in bits(mask):
        nb = g.adj[v] & outside
        if nb:
            if seen is None:
                seen = nb
            elif nb != seen:
                return False
    return True


def is_split_module(g: Graph, a) -> bool:
    """True iff ``a`` is a split-module of ``g`` (empty set and components included)."""
    mask = to_mask(a)
    if mask >> g.n:
        raise ContractViolation("vertex set has members outside the graph")
    return _is_split_mask(g, mask)


def frontier(g: Graph, a) -> frozenset[int]:
    """Vertices of split-module ``a`` with a neighbour outside it (empty for full components)."""
    mask = to_mask(a)
    if not is_split_module(g, mask):
        raise ContractViolation(f"{sorted(from_mask(mask))} is not a split-module")
    if mask == 0 or mask == g.full_mask:
        return frozenset()
    comp = _component_of(g, mask)
    return from_mask(_frontier_mask(g, mask, comp))


@dataclass(frozen=True)
class SplitModule:
    vertices: frozenset
    frontier: frozenset
    host_component: int

    def __len__(self):
        return len(self.vertices)

    @property
    def mask(self) -> int:
        return to_mask(self.vertices)


def split_module(g: Graph, a) -> SplitModule:
    """Wrap a vertex set as a SplitModule, computing its frontier and host component."""
    mask = to_mask(a)
    fr = frontier(g, mask)
    comps = component_masks(g)
    host = next((i for i, c in enumerate(comps) if c & mask), 0)
    return SplitModule(from_mask(mask), fr, host)


# --------------------------------------------------------------------------
# split decomposition


@dataclass(frozen=True)
class Marker:
    id: int


@dataclass
class SplitBag:
    """One node of the split tree.

    ``labels[i]`` is either an original vertex (int) or a ``Marker`` shared with
    exactly one other bag.
    """

    kind: str
    graph: Graph
    labels: tuple
    center: int | None = None

    def marker_index(self, marker_id: int) -> int:
        for i, lab in enumerate(self.labels):
            if isinstance(lab, Marker) and lab.id == marker_id:
                return i
        raise KeyError(marker_id)


@dataclass
class SplitTree:
    """Reduced split decomposition of one connected component."""

    bags: list[SplitBag]
    vertices: frozenset
    links: dict[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.links:
            owners: dict[int, list[int]] = {}
            for b, bag in enumerate(self.bags):
                for lab in bag.labels:
                    if isinstance(lab, Marker):
                        owners.setdefault(lab.id, []).append(b)
            self.links = {m: (p[0], p[1]) for m, p in owners.items()}

    def neighbours(self, b: int) -> list[tuple[int, int, int]]:
        """(local index in b, marker id, other bag) for each tree edge at bag b."""
        out = []
        for i, lab in enumerate(self.bags[b].labels):
            if isinstance(lab, Marker):
                x, y = self.links[lab.id]
                out.append((i, lab.id, y if x == b else x))
        return out

    def branch(self, b: int, i: int) -> int:
        """Original vertices reached through local vertex ``i`` of bag ``b`` (bitmask)."""
        lab = self.bags[b].labels[i]
        if not isinstance(lab, Marker):
            return 1 << lab
        x, y = self.links[lab.id]
        start = y if x == b else x
        mask = 0
        stack = [(start, lab.id)]
        while stack:
            bag_id, came_by = stack.pop()
            for other_lab in self.bags[bag_id].labels:
                if isinstance(other_lab, Marker):
                    if other_lab.id == came_by:
                        continue
                    x2, y2 = self.links[other_lab.id]
                    stack.append((y2 if x2 == bag_id else x2, other_lab.id))
                else:
                    mask |= 1 << other_lab
        return mask

    def recompose(self, n: int) -> Graph:
        """Rebuild the graph on ``n`` vertices (only this component's edges)."""
        # locate each original vertex
        where = {}
        for b, bag in enumerate(self.bags):
            for i, lab in enumerate(bag.labels):
                if not isinstance(lab, Marker):
                    where[lab] = (b, i)
        edges = []
        verts = sorted(where)
        for u, v in combinations(verts, 2):
            if self._adjacent(where[u], where[v]):
                edges.append((u, v))
        return Graph(n, edges)

    def _adjacent(self, pu, pv) -> bool:
        bu, iu = pu
        bv, iv = pv
        if bu == bv:
            return self.bags[bu].graph.has_edge(iu, iv)
        path = self._bag_path(bu, bv)
        entry = iu
        for step, (bag_id, marker_id) in enumerate(path):
            bag = self.bags[bag_id]
            exit_ = bag.marker_index(marker_id)
            if not bag.graph.has_edge(entry, exit_):
                return False
            nxt = path[step + 1][0] if step + 1 < len(path) else bv
            entry = self.bags[nxt].marker_index(marker_id)
        return self.bags[bv].graph.has_edge(entry, iv)

    def _bag_path(self, src: int, dst: int) -> list[tuple[int, int]]:
        """Bags on the path from src up to (excluding) dst, with the marker leaving each."""
        parent = {src: None}
        stack = [src]
        while stack:
            b = stack.pop()
            for _, mid, other in self.neighbours(b):
                if other not in parent:
                    parent[other] = (b, mid)
                    stack.append(other)
        path = []
        node = dst
        while parent[node] is not None:
            prev, mid = parent[node]
            path.append((prev, mid))
            node = prev
        path.reverse()
        return path


def _degenerate_kind(g: Graph) -> tuple[str, int | None] | None:
    n = g.n
    if n <= 2:
        return "clique", None
    if all(g.degree(v) == n - 1 for v in range(n)):
        return "clique", None
    centres = [v for v in range(n) if g.degree(v) == n - 1]
    if len(centres) == 1 and g.m == n - 1:
        return "star", centres[0]
    return None


def _split_closure(g: Graph, seed: int, s: int, b: int) -> int | None:
    """Smallest side S containing ``seed | s`` of a split in which s and b are
    adjacent frontier vertices on opposite sides; None if b gets absorbed."""
    adj = g.adj
    full = g.full_mask
    nb, ns = adj[b], adj[s]
    side = seed | (1 << s)
    bbit = 1 << b
    if side & bbit:
        return None
    while True:
        rest = full & ~side
        add = 0
        for v in bits(side & ~nb):
            add |= adj[v] & rest
        for w in bits(rest & ~ns):
            if adj[w] & side:
                add |= 1 << w
        front = side & nb
        for w in bits(rest & ns):
            if front & ~adj[w]:
                add |= 1 << w
        if not add:
            return side
        if add & bbit:
            return None
        side |= add


def _find_nontrivial_split(g: Graph) -> int | None:
    """One side of a non-trivial split of connected ``g``, or None if g is prime."""
    n = g.n
    if n < 4:
        return None
    x = 0
    for y in range(1, n):
        seed = (1 << x) | (1 << y)
        for s in range(n):
            for b in bits(g.adj[s]):
                if seed >> b & 1:
                    continue
                side = _split_closure(g, seed, s, b)
                if side is not None and n - popcount(side) >= 2:
                    return side
    return None


class _Builder:
    def __init__(self):
        self.next_marker = 0
        self.bags: list[SplitBag] = []

    def decompose(self, g: Graph, labels: tuple) -> None:
        kind = _degenerate_kind(g)
        if kind is not None:
            self.bags.append(SplitBag(kind[0], g, labels, kind[1]))
            return
        side = _find_nontrivial_split(g)
        if side is None:
            self.bags.append(SplitBag("prime", g, labels))
            return
        other = g.full_mask & ~side
        marker = Marker(self.next_marker)
        self.next_marker += 1
        for part, opposite in ((side, other), (other, side)):
            sub, index = induced_subgraph(g, part)
            front = [index[v] for v in bits(part) if g.adj[v] & opposite]
            edges = sub.edges() + [(i, sub.n) for i in front]
            new_g = Graph(sub.n + 1, edges)
            new_labels = tuple(labels[v] for v in bits(part)) + (marker,)
            self.decompose(new_g, new_labels)


def _merge_pair(tree_bags: list[SplitBag], a: int, b: int, mid: int) -> SplitBag:
    """1-join two degenerate bags along marker ``mid``; result is degenerate."""
    ba, bb = tree_bags[a], tree_bags[b]
    ia, ib = ba.marker_index(mid), bb.marker_index(mid)
    keep_a = [i for i in range(ba.graph.n) if i != ia]
    keep_b = [i for i in range(bb.graph.n) if i != ib]
    labels = tuple(ba.labels[i] for i in keep_a) + tuple(bb.labels[i] for i in keep_b)
    pos_a = {i: k for k, i in enumerate(keep_a)}
    pos_b = {i: k + len(keep_a) for k, i in enumerate(keep_b)}
    edges = [(pos_a[u], pos_a[v]) for u, v in ba.graph.edges() if ia not in (u, v)]
    edges += [(pos_b[u], pos_b[v]) for u, v in bb.graph.edges() if ib not in (u, v)]
    for u in bits(ba.graph.adj[ia]):
        for v in bits(bb.graph.adj[ib]):
            edges.append((pos_a[u], pos_b[v]))
    g = Graph(len(labels), edges)
    kind = _degenerate_kind(g)
    if kind is None:
        raise InvariantViolation("merging degenerate bags produced a non-degenerate bag")
    return SplitBag(kind[0], g, labels, kind[1])


def _mergeable(ba: SplitBag, bb: SplitBag, mid: int) -> bool:
    if ba.graph.n < 3 or bb.graph.n < 3:
        return False
    if ba.kind == "clique" and bb.kind == "clique":
        return True
    if ba.kind == "star" and bb.kind == "star":
        a_centre = ba.marker_index(mid) == ba.center
        b_centre = bb.marker_index(mid) == bb.center
        return a_centre != b_centre
    return False


def _reduce(bags: list[SplitBag]) -> list[SplitBag]:
    bags = list(bags)
    changed = True
    while changed:
        changed = False
        tree = SplitTree(bags, frozenset())
        for mid, (a, b) in sorted(tree.links.items()):
            if _mergeable(bags[a], bags[b], mid):
                merged = _merge_pair(bags, a, b, mid)
                bags = [bag for i, bag in enumerate(bags) if i not in (a, b)] + [merged]
                changed = True
                break
    return bags


def split_decomposition(g: Graph) -> list[SplitTree]:
    """Reduced split tree of every connected component, ordered by minimum vertex."""
    trees = []
    for comp in component_masks(g):
        sub, index = induced_subgraph(g, comp)
        labels = tuple(bits(comp))
        builder = _Builder()
        builder.decompose(sub, labels)
        bags = _reduce(builder.bags)
        trees.append(SplitTree(bags, from_mask(comp)))
    return trees


def split_modules_from_tree(tree: SplitTree) -> set[int]:
    """All split-modules realised by the tree (proper subsets of the component, plus the
    component itself). Exponential at large degenerate bags; intended for checking."""
    out = {to_mask(tree.vertices)}
    for b, bag in enumerate(tree.bags):
        branches = [tree.branch(b, i) for i in range(bag.graph.n)]
        if bag.kind == "prime":
            full = 0
            for br in branches:
                full |= br
            for br in branches:
                out.add(br)
                out.add(full & ~br)
        else:
            for r in range(1, len(branches) + 1):
                for combo in combinations(branches, r):
                    mask = 0
                    for br in combo:
                        mask |= br
                    out.add(mask)
    return out


# --------------------------------------------------------------------------
# the ~c partition


def rank_width(g: Graph, cap: int | None = None):
    """Rank-width as the maximum over the prime bags of the split decomposition.

    A 1-join does not raise rank-width, so only prime bags need the
    exponential DP; cliques and stars contribute 1. Returns ``ExceedsCap``
    as soon as a bag exceeds ``cap``.
    """
    if g.m == 0:
        return 0
    if cap is not None and cap < 1:
        return ExceedsCap(cap)
    best = 1
    for tree in split_decomposition(g):
        for bag in tree.bags:
            if bag.kind != "prime":
                continue
            width, _ = rank_width_exact(bag.graph, cap=cap)
            if isinstance(width, ExceedsCap):
                return width
            best = max(best, width)
    return best


def rank_width_of_set(g: Graph, mask: int, cap: int | None = None):
    """Rank-width of ``g[mask]`` (cap-bounded when ``cap`` is given)."""
    sub, _ = induced_subgraph(g, mask)
    return rank_width(sub, cap=cap)


@dataclass
class SplitModulePartition:
    """Partition of V into the inclusion-maximal split-modules of rank-width <= c.

    ``whole_graph`` is set when ``rw(g) <= c`` and V itself is returned as the
    single class.
    """

    classes: list[frozenset]
    c: int
    whole_graph: bool = False

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def class_of(self, v: int) -> int:
        for i, cls in enumerate(self.classes):
            if v in cls:
                return i
        raise KeyError(v)

    @property
    def masks(self) -> list[int]:
        return [to_mask(c) for c in self.classes]


def _good(g: Graph, mask: int, c: int, cache: dict) -> bool:
    if popcount(mask) <= 1:
        return True
    hit = cache.get(mask)
    if hit is None:
        hit = not isinstance(rank_width_of_set(g, mask, cap=c), ExceedsCap)
        cache[mask] = hit
    return hit


def _component_candidates(g: Graph, comp: int, c: int, cache: dict) -> list[int]:
    """Split-modules of rank-width <= c that jointly cover every maximal one."""
    sub, _ = induced_subgraph(g, comp)
    back = list(bits(comp))
    tree = split_decomposition(sub)[0]
    local: set[int] = set()
    for b, bag in enumerate(tree.bags):
        branches = [tree.branch(b, i) for i in range(bag.graph.n)]
        full = 0
        for br in branches:
            full |= br
        for br in branches:
            local.add(br)
            local.add(full & ~br)
        if bag.kind == "prime":
            continue
        good = [i for i, br in enumerate(branches) if _good(sub, br, c, cache)]
        # c >= 1: any union of good branches at a degenerate bag stays within rank-width c;
        # c == 0 only admits pairwise non-adjacent branches, i.e. the leaves of a star.
        if c == 0:
            if bag.kind != "star":
                continue
            good = [i for i in good if i != bag.center]
        if len(good) < 2:
            continue
        union = 0
        for i in good:
            union |= branches[i]
        local.add(union)
    out = []
    for mask in local:
        if mask == 0 or mask == sub.full_mask:
            continue
        if _good(sub, mask, c, cache):
            real = 0
            for i in bits(mask):
                real |= 1 << back[i]
            out.append(real)
    return out


def sim_c_classes(g: Graph, c: int, verify: bool = True) -> SplitModulePartition:
    """Equivalence classes of ``~c``: the maximal split-modules of rank-width <= c.

    Raises BelowThresholdError when ``rw(g) == c + 1``. When ``rw(g) <= c`` the
    whole vertex set is returned as a single class with ``whole_graph=True``.
    """
    if c < 0:
        raise ContractViolation("c must be non-negative")
    if g.n == 0:
        return SplitModulePartition([], c, whole_graph=True)
    width = rank_width(g, cap=c + 1)
    if not isinstance(width, ExceedsCap):
        if width <= c:
            return SplitModulePartition([frozenset(range(g.n))], c, whole_graph=True)
        raise BelowThresholdError(
            f"rank-width is {c + 1}; ~{c} is only guaranteed to be an equivalence from rank-width {c + 2}",
            width=width,
        )
    classes: list[int] = []
    for comp in component_masks(g):
        if _good(g, comp, c, {}):
            classes.append(comp)
            continue
        candidates = _component_candidates(g, comp, c, {})
        class_of = {}
        for v in bits(comp):
            cls = 1 << v
            for cand in candidates:
                if cand >> v & 1:
                    cls |= cand
            class_of[v] = cls
        for v, cls in class_of.items():
            if any(class_of[w] != cls for w in bits(cls)):
                raise InvariantViolation(f"~{c} is not transitive around vertex {v}")
        classes.extend(set(class_of.values()))
    classes.sort(key=lambda m: (m & -m).bit_length())
    if verify:
        cache: dict = {}
        for cls in classes:
            if not _is_split_mask(g, cls):
                raise InvariantViolation(f"class {sorted(from_mask(cls))} is not a split-module")
            if not _good(g, cls, c, cache):
                raise InvariantViolation(f"class {sorted(from_mask(cls))} has rank-width above {c}")
    return SplitModulePartition([from_mask(m) for m in classes], c)
