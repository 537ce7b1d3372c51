"""Brute-force ground truth used to certify the fast paths.

Every oracle enumerates candidate solutions in increasing size and stops at
the first success, so the returned value is a certified optimum. None of
these functions call into the split decomposition, the modulator finders or
the kernels they are meant to check.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .exceptions import CapacityError
from .graph import Graph, bits, component_masks, induced_subgraph, is_acyclic
from .rankwidth import ExceedsCap, rank_width_exact

__all__ = [
    "exact_fvs",
    "exact_hitting_set",
    "brute_split_modules",
    "brute_sim_c_partition",
    "exact_wsn",
    "exact_opt_mso",
    "exact_vertex_cover",
    "in_class",
    "game_by_recursion",
    "rank_width_by_trees",
]


def _require(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise CapacityError(f"{what} oracle limited to {limit}, got {n}")


def _gf2_rank_rows(rows: list[int]) -> int:
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def rank_width_by_trees(g: Graph, limit: int = 9) -> int:
    """Rank-width as the minimum over every subcubic tree with leaves V(g).

    Trees are grown by inserting vertex i into each edge of a tree on the
    first i vertices. Cut-rank only grows when vertices are added to either
    side, so a partial tree already wider than the best complete one is cut.
    """
    _require(g.n, limit, "rank-width tree enumeration")
    n = g.n
    if n <= 1:
        return 0
    cache: dict = {}

    def cutrank(side: int, prefix: int) -> int:
        key = (side, prefix)
        hit = cache.get(key)
        if hit is None:
            other = prefix & ~side
            hit = _gf2_rank_rows([g.adj[v] & other for v in bits(side)])
            cache[key] = hit
        return hit

    # node ids: 0..n-1 leaves, n.. internal; tree held as an edge list
    best = [n]

    def width(edges: list, prefix: int) -> int:
        adj: dict = {}
        for a, b in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        w = 0
        for a, b in edges:
            side = 0
            stack = [(a, b)]
            while stack:
                node, parent = stack.pop()
                if node < n:
                    side |= 1 << node
                stack.extend((x, node) for x in adj[node] if x != parent)
            w = max(w, cutrank(side, prefix))
            if w >= best[0]:
                break
        return w

    def grow(edges: list, i: int, next_id: int) -> None:
        prefix = (1 << i) - 1
        if width(edges, prefix) >= best[0]:
            return
        if i == n:
            best[0] = width(edges, prefix)
            return
        for j, (a, b) in enumerate(edges):
            mid = next_id
            grown = edges[:j] + edges[j + 1 :] + [(a, mid), (mid, b), (mid, i)]
            grow(grown, i + 1, next_id + 1)

    if n == 2:
        return cutrank(1, 3)
    grow([(0, n), (1, n), (2, n)], 3, n + 1)
    return best[0]


def exact_fvs(g: Graph, limit: int = 18) -> int:
    """Minimum feedback vertex set size."""
    _require(g.n, limit, "feedback vertex set")
    full = g.full_mask
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            removed = 0
            for v in combo:
                removed |= 1 << v
            if is_acyclic(g, full & ~removed):
                return k
    return g.n


def exact_vertex_cover(g: Graph) -> int:
    edges = g.edges()
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            s = set(combo)
            if all(u in s or v in s for u, v in edges):
                return k
    return g.n


def exact_hitting_set(sets: Iterable[Iterable[int]], ground_size: int | None = None, limit: int = 20) -> int:
    """Minimum number of ground elements meeting every set.

    Accepts a plain collection of sets or anything with ``sets`` and ``ground``
    attributes (a hitting-set instance).
    """
    if hasattr(sets, "sets") and hasattr(sets, "ground"):
        ground_size = len(sets.ground)
        sets = sets.sets
    masks = []
    universe = 0
    for s in sets:
        m = 0
        for x in s:
            m |= 1 << x
        masks.append(m)
        universe |= m
    if ground_size is None:
        ground_size = universe.bit_length()
    _require(ground_size, limit, "hitting set")
    if not masks:
        return 0
    elements = list(bits(universe))
    for k in range(len(elements) + 1):
        for combo in combinations(elements, k):
            chosen = 0
            for x in combo:
                chosen |= 1 << x
            if all(m & chosen for m in masks):
                return k
    raise AssertionError("unreachable: the full universe hits every set")


def _is_split_module_by_definition(g: Graph, a: int, comps: list[int]) -> bool:
    """Direct reading of the definition: {A, V' - A} is a split of a component V'."""
    if a == 0 or a == g.full_mask:
        return True
    host = [c for c in comps if c & a]
    if len(host) != 1 or a & ~host[0]:
        return False
    comp = host[0]
    b = comp & ~a
    if b == 0:
        return True
    # A' = N(B) inside A, B' = N(A) inside B; all of A' share one neighbourhood in B'.
    a_front = [v for v in bits(a) if g.adj[v] & b]
    b_front = 0
    for v in bits(a):
        b_front |= g.adj[v] & b
    return len({g.adj[v] & b_front for v in a_front}) <= 1


def brute_split_modules(g: Graph, limit: int = 12) -> list[frozenset]:
    """Every split-module of ``g``, by testing all 2^n vertex subsets."""
    _require(g.n, limit, "split-module")
    comps = component_masks(g)
    out = []
    for a in range(1 << g.n):
        if _is_split_module_by_definition(g, a, comps):
            out.append(frozenset(bits(a)))
    return out


def _rw_at_most(g: Graph, mask: int, c: int, cache: dict) -> bool:
    hit = cache.get(mask)
    if hit is None:
        sub, _ = induced_subgraph(g, mask)
        width, _ = rank_width_exact(sub, cap=c)
        hit = not isinstance(width, ExceedsCap)
        cache[mask] = hit
    return hit


def _small_split_modules(g: Graph, c: int, limit: int) -> list[int]:
    cache: dict = {}
    return [
        m
        for m in (sum(1 << v for v in s) for s in brute_split_modules(g, limit))
        if m and _rw_at_most(g, m, c, cache)
    ]


def brute_sim_c_partition(g: Graph, c: int, limit: int = 12) -> list[frozenset]:
    """Classes of ~c straight from the definition: v ~ w iff some split-module of
    rank-width <= c holds both. Returned sorted by minimum vertex."""
    modules = _small_split_modules(g, c, limit)
    classes = []
    seen = 0
    for v in range(g.n):
        if seen >> v & 1:
            continue
        cls = 1 << v
        for m in modules:
            if m >> v & 1:
                cls |= m
        seen |= cls
        classes.append(frozenset(bits(cls)))
    return classes


def in_class(g: Graph, remaining: int, target) -> bool:
    """Membership of ``g[remaining]`` in a target class descriptor.

    ``target`` is "forest", "edgeless", "empty" or a list of obstruction graphs.
    """
    if target == "empty":
        return remaining == 0
    if target == "edgeless":
        return all(g.adj[v] & remaining == 0 for v in bits(remaining))
    if target == "forest":
        return is_acyclic(g, remaining)
    obstructions = getattr(target, "graphs", target)
    return not any(_contains_induced(g, remaining, h) for h in obstructions)


def _contains_induced(g: Graph, remaining: int, h: Graph) -> bool:
    verts = list(bits(remaining))
    if h.n > len(verts):
        return False
    hedges = set(h.edges())
    from itertools import permutations

    for combo in combinations(verts, h.n):
        for perm in permutations(combo):
            if all(
                ((min(i, j), max(i, j)) in hedges) == g.has_edge(perm[i], perm[j])
                for i in range(h.n)
                for j in range(i + 1, h.n)
            ):
                return True
    return False


def exact_wsn(g: Graph, c: int, target, limit: int = 12) -> int:
    """Well-structure number: fewest pairwise-disjoint split-modules of rank-width
    <= c whose removal puts ``g`` into ``target``."""
    _require(g.n, limit, "well-structure number")
    full = g.full_mask
    if in_class(g, full, target):
        return 0
    modules = sorted(set(_small_split_modules(g, c, limit)))

    def search(start: int, used: int, left: int) -> bool:
        if left == 0:
            return in_class(g, full & ~used, target)
        for i in range(start, len(modules)):
            m = modules[i]
            if m & used:
                continue
            if search(i + 1, used | m, left - 1):
                return True
        return False

    for k in range(1, g.n + 1):
        if search(0, 0, k):
            return k
    raise AssertionError("unreachable: singletons always form a modulator")


def exact_opt_mso(g: Graph, formula, direction: str = "min", limit: int = 16):
    """Optimum |S| with ``g |= formula(S)`` by enumerating subsets by size.

    Returns None when no subset satisfies the formula.
    """
    from .mso import Structure, evaluate

    _require(g.n, limit, "MSO optimisation")
    sizes = range(g.n + 1) if direction == "min" else range(g.n, -1, -1)
    for k in sizes:
        for combo in combinations(range(g.n), k):
            if evaluate(Structure(g, [frozenset(combo)]), formula):
                return k
    return None




def _partial_iso(g, gp, sets, g2, gp2, sets2) -> bool:
    for i, (a, b) in enumerate(zip(gp, gp2)):
        for j in range(i):
            if (a == gp[j]) != (b == gp2[j]):
                return False
            if g.has_edge(a, gp[j]) != g2.has_edge(b, gp2[j]):
                return False
        for s, t in zip(sets, sets2):
            if (s >> a & 1) != (t >> b & 1):
                return False
    return True


def game_by_recursion(left, right, rounds: int, limit: int = 4) -> bool:
    """Duplicator wins the ``rounds``-round MSO game, by playing it out.

    Spoiler tries every point and set move on both sides, Duplicator every
    reply; the final position must be a partial isomorphism. Exponential in
    everything, so only for tiny structures.
    """
    g, g2 = left.graph, right.graph
    _require(max(g.n, g2.n), limit, "game recursion")

    def moves(h):
        return [("p", v) for v in range(h.n)] + [("s", m) for m in range(1 << h.n)]

    def apply(move, pts, sets):
        kind, x = move
        return (pts + (x,), sets) if kind == "p" else (pts, sets + (x,))

    def duplicator_wins(r, p1, s1, p2, s2):
        if not _partial_iso(g, p1, s1, g2, p2, s2):
            return False
        if r == 0:
            return True
        for side in (0, 1):
            mine, theirs = (g, g2) if side == 0 else (g2, g)
            for mv in moves(mine):
                replied = False
                for reply in moves(theirs):
                    if reply[0] != mv[0]:
                        continue
                    if side == 0:
                        a, b = apply(mv, p1, s1), apply(reply, p2, s2)
                    else:
                        a, b = apply(reply, p1, s1), apply(mv, p2, s2)
                    if duplicator_wins(r - 1, a[0], a[1], b[0], b[1]):
                        replied = True
                        break
                if not replied:
                    return False
        return True

    sets1 = tuple(sum(1 << v for v in s) for s in left.set_interp)
    sets2 = tuple(sum(1 << v for v in s) for s in right.set_interp)
    return duplicator_wins(rounds, tuple(left.point_interp), sets1, tuple(right.point_interp), sets2)
