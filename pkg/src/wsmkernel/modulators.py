"""Approximate well-structured modulators to forests and to obstruction classes.

A modulator here is a family of pairwise disjoint split-modules, each of
rank-width at most ``c``, whose deletion puts the graph into a target class.
Both finders work on the classes of ``~c``: every optimal family can be
assumed to consist of whole classes, so the problem becomes a covering
problem over the (few) classes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .exceptions import BelowThresholdError, ContractViolation, GraphParseError
from .graph import Graph, bits, component_masks, from_mask, induced_subgraph, is_acyclic, parse_gr_collection, popcount, to_mask
from .rankwidth import ExceedsCap
from .splits import SplitModule, is_split_module, rank_width, sim_c_classes, split_module

__all__ = [
    "find_wsm",
    "wsm_to_empty",
    "ObstructionSet",
    "HittingInstance",
    "WsModulator",
    "TargetClass",
    "parse_class",
    "class_contains",
    "fvs_2approx",
    "wsm_forest_3approx",
    "enumerate_obstructions",
    "build_hitting_instance",
    "greedy_hitting_set",
    "wsm_obstruction_approx",
    "verify_wsm",
]


@dataclass(frozen=True)
class ObstructionSet:
    """Forbidden induced subgraphs; ``r`` is the largest order among them."""

    graphs: tuple
    name: str = ""

    def __init__(self, graphs: Iterable[Graph], name: str = ""):
        graphs = tuple(graphs)
        if not graphs:
            raise ContractViolation("an obstruction set needs at least one graph")
        object.__setattr__(self, "graphs", graphs)
        object.__setattr__(self, "name", name)

    @property
    def r(self) -> int:
        return max(h.n for h in self.graphs)

    def __str__(self):
        return f"obstructions:{self.name}" if self.name else f"obstructions({len(self.graphs)})"


TargetClass = Union[str, ObstructionSet]
_NAMED = ("forest", "edgeless", "empty")


def parse_class(descriptor: TargetClass) -> TargetClass:
    """Normalise "forest", "edgeless", "empty" or "obstructions:<path>".

    The path may be a multi-graph .gr file or a directory of .gr files.
    """
    if isinstance(descriptor, ObstructionSet):
        return descriptor
    if descriptor in _NAMED:
        return descriptor
    if isinstance(descriptor, str) and descriptor.startswith("obstructions:"):
        path = descriptor.split(":", 1)[1]
        graphs: list[Graph] = []
        if os.path.isdir(path):
            for fname in sorted(os.listdir(path)):
                if fname.endswith(".gr"):
                    with open(os.path.join(path, fname), "rb") as fh:
                        graphs.extend(parse_gr_collection(fh.read()))
        else:
            with open(path, "rb") as fh:
                graphs.extend(parse_gr_collection(fh.read()))
        if not graphs:
            raise GraphParseError(f"no obstruction graphs found in {path}")
        return ObstructionSet(graphs, name=path)
    raise ContractViolation(f"unknown class descriptor {descriptor!r}")


def _as_obstructions(target: TargetClass) -> ObstructionSet:
    if isinstance(target, ObstructionSet):
        return target
    if target == "edgeless":
        return ObstructionSet([Graph(2, [(0, 1)])], name="edgeless")
    if target == "empty":
        return ObstructionSet([Graph(1)], name="empty")
    raise ContractViolation(f"{target!r} is not characterised by obstructions here")


def class_contains(g: Graph, remaining: int, target: TargetClass) -> bool:
    """Whether ``g[remaining]`` lies in the target class."""
    if target == "empty":
        return remaining == 0
    if target == "edgeless":
        return all(g.adj[v] & remaining == 0 for v in bits(remaining))
    if target == "forest":
        return is_acyclic(g, remaining)
    sub, _ = induced_subgraph(g, remaining)
    return not enumerate_obstructions(sub, target, first_only=True)


@dataclass(frozen=True)
class HittingInstance:
    """Sets over a ground set of ``~c`` classes; ``sets`` hold class indices."""

    ground: tuple
    sets: tuple
    r: int

    def __post_init__(self):
        for s in self.sets:
            if not s:
                raise ContractViolation("hitting instance contains an empty set")
            if any(not 0 <= i < len(self.ground) for i in s):
                raise ContractViolation("set member does not index the ground set")


@dataclass(frozen=True)
class WsModulator:
    modules: tuple
    c: int
    target: TargetClass = "forest"
    notes: tuple = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return len(self.modules)

    @property
    def mask(self) -> int:
        out = 0
        for m in self.modules:
            out |= m.mask
        return out

    @property
    def vertices(self) -> frozenset:
        return from_mask(self.mask)


def _modulator(g: Graph, masks: Iterable[int], c: int, target: TargetClass) -> WsModulator:
    masks = sorted(set(masks), key=lambda m: (m & -m).bit_length())
    return WsModulator(tuple(split_module(g, m) for m in masks), c, target)


# --------------------------------------------------------------------------
# feedback vertex set


def _prune_low_degree(g: Graph, alive: int) -> int:
    """Repeatedly drop vertices of degree <= 1; they lie on no cycle."""
    changed = True
    while changed:
        changed = False
        for v in bits(alive):
            if popcount(g.adj[v] & alive) <= 1:
                alive &= ~(1 << v)
                changed = True
    return alive


def _semidisjoint_cycle(g: Graph, alive: int) -> int | None:
    """A cycle in which every vertex but at most one has degree 2, if any."""
    deg2 = [v for v in bits(alive) if popcount(g.adj[v] & alive) == 2]
    deg2_mask = to_mask(deg2)
    seen = 0
    for start in deg2:
        if seen >> start & 1:
            continue
        # the maximal run of degree-2 vertices through ``start``
        run = 1 << start
        stack = [start]
        while stack:
            v = stack.pop()
            for w in bits(g.adj[v] & deg2_mask & ~run):
                run |= 1 << w
                stack.append(w)
        seen |= run
        outside = set()
        for v in bits(run):
            for w in bits(g.adj[v] & alive & ~run):
                outside.add(w)
        if not outside:
            return run
        if len(outside) == 1:
            # both path ends attach to the same vertex
            return run | (1 << outside.pop())
    return None


def fvs_2approx(g: Graph) -> frozenset[int]:
    """Feedback vertex set of size at most twice the optimum.

    Local-ratio scheme on unit weights: subtract along semidisjoint cycles
    when one exists, otherwise in proportion to ``degree - 1``; vertices whose
    weight hits zero enter the solution, and a final reverse pass drops every
    redundant choice.
    """
    weight = {v: Fraction(1) for v in range(g.n)}
    alive = _prune_low_degree(g, g.full_mask)
    chosen: list[int] = []
    while alive:
        cycle = _semidisjoint_cycle(g, alive)
        if cycle is not None:
            gamma = min(weight[v] for v in bits(cycle))
            for v in bits(cycle):
                weight[v] -= gamma
        else:
            gamma = min(weight[v] / (popcount(g.adj[v] & alive) - 1) for v in bits(alive))
            for v in bits(alive):
                weight[v] -= gamma * (popcount(g.adj[v] & alive) - 1)
        for v in bits(alive):
            if weight[v] == 0:
                chosen.append(v)
                alive &= ~(1 << v)
        alive = _prune_low_degree(g, alive)
    solution = set(chosen)
    full = g.full_mask
    for v in reversed(chosen):
        rest = solution - {v}
        if is_acyclic(g, full & ~to_mask(rest)):
            solution = rest
    return frozenset(solution)


# --------------------------------------------------------------------------
# modulator to forests


def _classes(g: Graph, c: int) -> list[int]:
    part = sim_c_classes(g, c)
    if part.whole_graph:
        raise BelowThresholdError(
            f"rank-width is at most {c}; the whole graph is one module, solve it directly",
            width=None,
        )
    return part.masks


def wsm_forest_3approx(g: Graph, c: int) -> WsModulator:
    """Modulator to a forest with at most three times the optimal number of modules.

    Classes are taken whole. First every set of at most three remaining
    classes whose union carries a cycle is removed (restarting the scan after
    each removal); then a 2-approximate feedback vertex set of the rest is
    computed and every class it touches is removed as well.
    """
    if is_acyclic(g):
        return WsModulator((), c, "forest")
    classes = _classes(g, c)
    remaining = list(classes)
    picked: list[int] = []
    progress = True
    while progress:
        progress = False
        for size in (1, 2, 3):
            for combo in combinations(remaining, size):
                union = 0
                for m in combo:
                    union |= m
                if not is_acyclic(g, union):
                    picked.extend(combo)
                    remaining = [m for m in remaining if m not in combo]
                    progress = True
                    break
            if progress:
                break
    rest = 0
    for m in remaining:
        rest |= m
    sub, index = induced_subgraph(g, rest)
    back = {new: old for old, new in index.items()}
    fvs = to_mask(back[v] for v in fvs_2approx(sub))
    picked.extend(m for m in remaining if m & fvs)
    return _modulator(g, picked, c, "forest")


# --------------------------------------------------------------------------
# modulator to obstruction classes


def _degree_sequence(g: Graph, mask: int) -> list[int]:
    return sorted(popcount(g.adj[v] & mask) for v in bits(mask))


def _induces(g: Graph, verts: Sequence[int], h: Graph) -> bool:
    """Backtracking search for an isomorphism from ``h`` onto ``g[verts]``."""
    k = h.n
    image = [-1] * k
    used = [False] * k

    def extend(i: int) -> bool:
        if i == k:
            return True
        for j in range(k):
            if used[j]:
                continue
            cand = verts[j]
            ok = True
            for a in range(i):
                if h.has_edge(i, a) != g.has_edge(cand, image[a]):
                    ok = False
                    break
            if ok:
                used[j] = True
                image[i] = cand
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return extend(0)


def enumerate_obstructions(g: Graph, obs: TargetClass, first_only: bool = False) -> list[frozenset]:
    """Vertex sets inducing a copy of some obstruction, each listed once."""
    obs = _as_obstructions(obs) if not isinstance(obs, ObstructionSet) else obs
    found: set[int] = set()
    for h in obs.graphs:
        hdeg = sorted(h.degree(v) for v in range(h.n))
        for combo in combinations(range(g.n), h.n):
            mask = to_mask(combo)
            if mask in found:
                continue
            if _degree_sequence(g, mask) != hdeg:
                continue
            if _induces(g, combo, h):
                found.add(mask)
                if first_only:
                    return [from_mask(mask)]
    return [from_mask(m) for m in sorted(found, key=lambda m: (popcount(m), sorted(bits(m))))]


def build_hitting_instance(g: Graph, c: int, obs: TargetClass) -> HittingInstance:
    """One set per obstruction occurrence: the classes it meets."""
    obs = _as_obstructions(obs)
    masks = _classes(g, c)
    owner = {}
    for i, m in enumerate(masks):
        for v in bits(m):
            owner[v] = i
    sets = []
    seen = set()
    for occ in enumerate_obstructions(g, obs):
        s = frozenset(owner[v] for v in occ)
        if s not in seen:
            seen.add(s)
            sets.append(s)
    return HittingInstance(tuple(from_mask(m) for m in masks), tuple(sets), obs.r)


def greedy_hitting_set(w: HittingInstance) -> frozenset[int]:
    """Take every element of each set not yet hit; at most ``r`` times optimal."""
    chosen: set[int] = set()
    for s in w.sets:
        if not chosen & s:
            chosen |= s
    return frozenset(chosen)


def wsm_obstruction_approx(g: Graph, c: int, obs: TargetClass) -> WsModulator:
    """Modulator to the class excluding ``obs``, at most ``r`` times optimal."""
    target = obs
    obs = _as_obstructions(obs)
    if not enumerate_obstructions(g, obs, first_only=True):
        return WsModulator((), c, target)
    w = build_hitting_instance(g, c, obs)
    hit = greedy_hitting_set(w)
    return _modulator(g, (to_mask(w.ground[i]) for i in hit), c, target)


def wsm_to_empty(g: Graph, c: int) -> WsModulator:
    """Modulator to the empty graph: the ``~c`` classes, or a fallback when too narrow.

    Below the threshold each component of rank-width <= c is one module and
    every other component falls apart into singletons.
    """
    try:
        part = sim_c_classes(g, c)
    except BelowThresholdError:
        part = None
    if part is not None and not part.whole_graph:
        return _modulator(g, part.masks, c, "empty")
    masks = []
    for comp in component_masks(g):
        if _narrow(g, comp, c):
            masks.append(comp)
        else:
            masks.extend(1 << v for v in bits(comp))
    return _modulator(g, masks, c, "empty")


def _narrow(g: Graph, mask: int, c: int) -> bool:
    sub, _ = induced_subgraph(g, mask)
    return not isinstance(rank_width(sub, cap=c), ExceedsCap)


def _fallback_wsm(g: Graph, c: int, target: TargetClass) -> WsModulator:
    """Whole narrow components as modules, then singletons until the rest is in the class.

    Carries no approximation guarantee; used only when the class structure
    is unavailable because the rank-width is at most ``c + 1``.
    """
    masks = []
    rest = g.full_mask
    for comp in component_masks(g):
        if not class_contains(g, comp, target) and _narrow(g, comp, c):
            masks.append(comp)
            rest &= ~comp
    sub, index = induced_subgraph(g, rest)
    back = {i: v for v, i in index.items()}
    if target == "forest":
        chosen = [back[v] for v in fvs_2approx(sub)]
    else:
        chosen = []
        obs = _as_obstructions(target)
        while True:
            occ = enumerate_obstructions(sub, obs)
            if not occ:
                break
            counts: dict[int, int] = {}
            for o in occ:
                for v in o:
                    counts[v] = counts.get(v, 0) + 1
            pick = max(sorted(counts), key=lambda v: counts[v])
            chosen.append(back[pick])
            rest &= ~(1 << back[pick])
            sub, index = induced_subgraph(g, rest)
            back = {i: v for v, i in index.items()}
    masks.extend(1 << v for v in chosen)
    x = _modulator(g, masks, c, target)
    return WsModulator(x.modules, c, target, notes=("below threshold: fallback without ratio guarantee",))


def find_wsm(g: Graph, c: int = 1, target: TargetClass = "forest", strict: bool = False) -> WsModulator:
    """Dispatch to the approximation suited to ``target``.

    When rank-width is at most ``c + 1`` the classes are not an equivalence:
    with ``strict`` this raises :class:`BelowThresholdError`, otherwise a
    simple fallback is used (see ``notes`` on the result).
    """
    target = parse_class(target)
    if target == "empty":
        if strict:
            part = sim_c_classes(g, c)
            if part.whole_graph:
                raise BelowThresholdError("whole graph has small rank-width")
            return _modulator(g, part.masks, c, "empty")
        return wsm_to_empty(g, c)
    if class_contains(g, g.full_mask, target):
        return WsModulator((), c, target)
    try:
        if target == "forest":
            return wsm_forest_3approx(g, c)
        return wsm_obstruction_approx(g, c, target)
    except BelowThresholdError:
        if strict:
            raise
        return _fallback_wsm(g, c, target)


# --------------------------------------------------------------------------
# verification


def verify_wsm(g: Graph, x: WsModulator, reason: list | None = None) -> bool:
    """Check disjointness, split-module status, rank-width and class membership.

    When ``reason`` is a list, the first failed condition is appended to it.
    """

    def fail(msg):
        if reason is not None:
            reason.append(msg)
        return False

    used = 0
    for m in x.modules:
        mask = m.mask if isinstance(m, SplitModule) else to_mask(m)
        if mask == 0:
            return fail("empty module")
        if mask >> g.n:
            return fail("module has vertices outside the graph")
        if used & mask:
            return fail("modules overlap")
        used |= mask
        if not is_split_module(g, mask):
            return fail(f"{sorted(from_mask(mask))} is not a split-module")
        if popcount(mask) > 1:
            sub, _ = induced_subgraph(g, mask)
            width = rank_width(sub, cap=x.c)
            if isinstance(width, ExceedsCap):
                return fail(f"{sorted(from_mask(mask))} has rank-width above {x.c}")
    if not class_contains(g, g.full_mask & ~used, x.target):
        return fail(f"remainder is not in class {x.target}")
    return True
