"""Seeded instance factories: planted modulators, wide random graphs, gap families."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .exceptions import ContractViolation
from .graph import Graph, bits, component_masks, to_mask
from .modulators import TargetClass, WsModulator, class_contains, parse_class
from .rankwidth import ExceedsCap
from .splits import rank_width, split_module

__all__ = [
    "PETERSEN",
    "PlantedInstance",
    "gen_planted",
    "gen_vc_gap_family",
    "random_graph",
    "random_tree",
    "random_cograph",
    "random_wide_graph",
    "cycles_with_pendant_trees",
]

PETERSEN = Graph(
    10,
    [(i, (i + 1) % 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)],
    name="petersen",
)


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    modulator: WsModulator


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_tree(rng: random.Random, n: int) -> Graph:
    return Graph(n, [(v, rng.randrange(v)) for v in range(1, n)])


def random_cograph(rng: random.Random, n: int) -> Graph:
    """Built by random disjoint unions and complete joins; rank-width at most 1."""
    parts = [Graph(1) for _ in range(n)]
    while len(parts) > 1:
        a = parts.pop(rng.randrange(len(parts)))
        b = parts.pop(rng.randrange(len(parts)))
        edges = a.edges() + [(a.n + u, a.n + v) for u, v in b.edges()]
        if rng.random() < 0.5:
            edges += [(u, a.n + v) for u in range(a.n) for v in range(b.n)]
        parts.append(Graph(a.n + b.n, edges))
    return parts[0] if parts else Graph(0)


def _small_width_graph(rng: random.Random, size: int, c: int, connected: bool = False) -> Graph:
    while True:
        if c <= 1:
            h = random_tree(rng, size) if rng.random() < 0.5 else random_cograph(rng, size)
        else:
            h = random_graph(rng, size, 0.5)
            if isinstance(rank_width(h, cap=c), ExceedsCap):
                continue
        if not connected or _connected(h):
            return h


def _frontier(rng: random.Random, m: Graph, offset: int) -> list[int]:
    """Random frontier meeting every component of the module graph."""
    front = [v for v in range(m.n) if rng.random() < 0.5]
    for comp in component_masks(m):
        if not any(comp >> v & 1 for v in front):
            front.append(rng.choice(list(bits(comp))))
    return sorted(offset + v for v in front)


def _connected(g: Graph) -> bool:
    return len(component_masks(g)) <= 1


def random_wide_graph(
    rng: random.Random,
    n: int,
    min_width: int,
    p: float | None = None,
    connected: bool = True,
    max_tries: int = 200_000,
) -> Graph:
    """Rejection sample a random graph of rank-width at least ``min_width``."""
    for _ in range(max_tries):
        h = random_graph(rng, n, p if p is not None else rng.uniform(0.3, 0.6))
        if connected and not _connected(h):
            continue
        if isinstance(rank_width(h, cap=min_width - 1), ExceedsCap):
            return h
    raise ContractViolation(f"no graph on {n} vertices with rank-width >= {min_width} after {max_tries} tries")


def _min_deletion(core: Graph, target: TargetClass) -> list[int]:
    for k in range(core.n + 1):
        for combo in combinations(range(core.n), k):
            if class_contains(core, core.full_mask & ~to_mask(combo), target):
                return list(combo)
    return list(range(core.n))


def _shuffle(rng: random.Random, g: Graph, groups: list[int]) -> tuple[Graph, list[int]]:
    perm = list(range(g.n))
    rng.shuffle(perm)
    h = g.relabel(perm)
    return h, [to_mask(perm[v] for v in bits(m)) for m in groups]


def gen_planted(
    seed: int,
    k: int,
    c: int = 1,
    module_size: int = 3,
    target: TargetClass = "forest",
    core: str | Graph = "random",
    base_size: int = 6,
    shuffle: bool = True,
    max_vertices: int | None = None,
) -> PlantedInstance:
    """Graph with ``k`` planted split-modules of rank-width <= c and ground truth.

    With ``core="random"`` the modules are wired through random frontiers to
    a random member of the target class. With ``core="petersen"`` (or any
    graph) a smallest vertex set whose removal lands the core in the class
    is blown up into modules, which keeps the core as an induced subgraph and
    hence its rank-width; ``k`` is then ignored. Module sizes are drawn from
    ``1..module_size``, shrunk where needed to respect ``max_vertices``.
    """
    if k < 0 or module_size < 1 or c < 0:
        raise ContractViolation("parameters must be positive")
    target = parse_class(target)
    rng = random.Random(seed)
    if isinstance(core, str) and core != "random":
        if core != "petersen":
            raise ContractViolation(f"unknown core {core!r}")
        core = PETERSEN
    if isinstance(core, Graph):
        return _planted_on_core(rng, core, c, module_size, target, shuffle, max_vertices)

    base = _random_member(rng, base_size, target)
    sizes = _sizes(rng, k, module_size, None if max_vertices is None else max_vertices - base.n)
    # an unwired module must still be a whole component, hence connected
    modules = [_small_width_graph(rng, size, c, connected=True) for size in sizes]
    n = base.n + sum(m.n for m in modules)
    edges = list(base.edges())
    groups, fronts = [], []
    offset = base.n
    for m in modules:
        edges.extend((offset + u, offset + v) for u, v in m.edges())
        ids = list(range(offset, offset + m.n))
        front = _frontier(rng, m, offset)
        groups.append(to_mask(ids))
        fronts.append(front)
        offset += m.n
    for i, front in enumerate(fronts):
        for v in range(base.n):
            if rng.random() < 0.3:
                edges.extend((v, f) for f in front)
        for j in range(i):
            if rng.random() < 0.4:
                edges.extend((a, b) for a in front for b in fronts[j])
    g = Graph(n, edges)
    if shuffle:
        g, groups = _shuffle(rng, g, groups)
    return PlantedInstance(g, WsModulator(tuple(split_module(g, m) for m in groups), c, target))


def _random_member(rng: random.Random, n: int, target: TargetClass) -> Graph:
    if target == "empty":
        return Graph(0)
    if target == "edgeless":
        return Graph(n)
    if target == "forest":
        edges = [(v, rng.randrange(v)) for v in range(1, n) if rng.random() < 0.7]
        return Graph(n, edges)
    while True:
        h = random_graph(rng, n, 0.3)
        if class_contains(h, h.full_mask, target):
            return h


def _sizes(rng: random.Random, k: int, module_size: int, budget: int | None) -> list[int]:
    if budget is not None and budget < k:
        raise ContractViolation(f"cannot fit {k} modules into {budget} vertices")
    sizes = []
    for i in range(k):
        top = module_size
        if budget is not None:
            top = max(1, min(top, budget - sum(sizes) - (k - i - 1)))
        sizes.append(rng.randint(1, top))
    return sizes


def _planted_on_core(rng, core: Graph, c, module_size, target, shuffle, max_vertices=None) -> PlantedInstance:
    blown = _min_deletion(core, target)
    keep = [v for v in range(core.n) if v not in blown]
    sizes = _sizes(rng, len(blown), module_size, None if max_vertices is None else max_vertices - len(keep))
    ids = {v: i for i, v in enumerate(keep)}
    offset = len(keep)
    edges = [(ids[u], ids[v]) for u, v in core.edges() if u in ids and v in ids]
    fronts, groups = {}, []
    for v, size in zip(blown, sizes):
        m = _small_width_graph(rng, size, c)
        mids = list(range(offset, offset + m.n))
        edges.extend((offset + a, offset + b) for a, b in m.edges())
        fronts[v] = _frontier(rng, m, offset)
        groups.append(to_mask(mids))
        offset += m.n
    for u, v in core.edges():
        a = fronts.get(u, [ids.get(u)])
        b = fronts.get(v, [ids.get(v)])
        if u in ids and v in ids:
            continue
        edges.extend((x, y) for x in a for y in b)
    g = Graph(offset, edges)
    if shuffle:
        g, groups = _shuffle(rng, g, groups)
    return PlantedInstance(g, WsModulator(tuple(split_module(g, m) for m in groups), c, target))


def gen_vc_gap_family(i: int) -> Graph:
    """The path on ``2i + 1`` vertices: vertex cover about i, one module suffices."""
    if i < 1:
        raise ContractViolation("i must be at least 1")
    n = 2 * i + 1
    return Graph(n, [(v, v + 1) for v in range(n - 1)], name=f"P{n}")


def cycles_with_pendant_trees(
    seed: int,
    cycles: int = 2,
    cycle_len: int = 4,
    tree_size: int = 10,
    max_degree: int = 4,
) -> Graph:
    """Cycles chained by single edges, each carrying one random pendant tree."""
    rng = random.Random(seed)
    edges = []
    n = 0
    anchors = []
    for _ in range(cycles):
        ring = list(range(n, n + cycle_len))
        edges.extend((ring[i], ring[(i + 1) % cycle_len]) for i in range(cycle_len))
        anchors.append(ring)
        n += cycle_len
    for a, b in zip(anchors, anchors[1:]):
        edges.append((a[1], b[-1]))
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    for ring in anchors:
        root = ring[0]
        nodes = [root]
        for _ in range(tree_size):
            open_nodes = [v for v in nodes if degree[v] < max_degree]
            parent = rng.choice(open_nodes)
            degree.append(1)
            degree[parent] += 1
            edges.append((parent, n))
            nodes.append(n)
            n += 1
    return Graph(n, edges)
