"""q-types of graphs with interpreted vertex sets, via the q-round MSO game.

A state is a tuple of chosen points and a tuple of chosen sets. Its type at
remaining depth ``r`` is built bottom-up::

    type_0 = atomic pattern (equalities, adjacencies, memberships)
    type_r = (atomic, {type_{r-1} after each point move},
                      {type_{r-1} after each set move})

Duplicator wins the r-round game between two states exactly when their
depth-r types coincide, because each type records which responses exist to
every Spoiler move on either side. At depth 1 the set-move part is fixed by
the atomic pattern, so only point moves are expanded there.

Types are interned to small integers. Identifiers are only meaningful
inside one :class:`TypeInterner`, so compare types from the same interner.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .exceptions import CapacityError, ContractViolation, SearchExhausted
from .graph import Graph, to_mask
from .mso import Structure

__all__ = [
    "DEFAULT_GAME_LIMIT",
    "DEFAULT_GAME_BUDGET",
    "GameConfig",
    "TypeInterner",
    "type_of",
    "game_equivalent",
    "RepresentativeCatalog",
    "find_representative",
    "candidate_graphs",
]

DEFAULT_GAME_LIMIT = 9
DEFAULT_GAME_BUDGET = 5_000_000
# networkx ships every graph on at most 7 vertices up to isomorphism
ATLAS_MAX_ORDER = 7


@dataclass(frozen=True)
class GameConfig:
    left: Structure
    right: Structure
    rounds: int

    def __post_init__(self):
        if len(self.left.set_interp) != len(self.right.set_interp):
            raise ContractViolation("structures interpret different numbers of set variables")
        if len(self.left.point_interp) != len(self.right.point_interp):
            raise ContractViolation("structures interpret different numbers of point variables")
        if self.rounds < 0:
            raise ContractViolation("rounds must be non-negative")


class TypeInterner:
    """Maps nested type keys to dense integer ids."""

    def __init__(self):
        self._ids: dict = {}

    def __call__(self, key) -> int:
        ident = self._ids.get(key)
        if ident is None:
            ident = len(self._ids)
            self._ids[key] = ident
        return ident

    def __len__(self):
        return len(self._ids)


def game_work(n: int, rounds: int) -> int:
    """Rough count of elementary steps the type computation performs."""
    if rounds <= 1:
        return max(n, 1) * max(rounds, 1)
    branching = n + (1 << n)
    work = n * n + (1 << n) * n
    for _ in range(rounds - 2):
        work *= branching
    return work


def _check_limits(n: int, rounds: int, limit: int, budget: int) -> None:
    if n > limit:
        raise CapacityError(f"game comparison limited to {limit} vertices, structure has {n}")
    if game_work(n, rounds) > budget:
        raise CapacityError(f"game with {rounds} rounds on {n} vertices exceeds the work budget {budget}")


_MEM_SHIFT = 64


class _TypeComputer:
    """Each vertex carries one integer code: for the i-th chosen point, bit 2i
    says "equal to it" and bit 2i+1 "adjacent to it"; bit ``_MEM_SHIFT + j``
    is membership in the j-th chosen set. The atomic type of a state is the
    tuple of codes of its points."""

    def __init__(self, g: Graph, interner: TypeInterner):
        self.adj = g.adj
        self.n = g.n
        self.intern = interner

    def initial(self, points: tuple, sets: tuple) -> list[int]:
        codes = [0] * self.n
        for v in range(self.n):
            code = 0
            for i, p in enumerate(points):
                if p == v:
                    code |= 1 << (2 * i)
                if self.adj[p] >> v & 1:
                    code |= 2 << (2 * i)
            for j, m in enumerate(sets):
                if m >> v & 1:
                    code |= 1 << (_MEM_SHIFT + j)
            codes[v] = code
        return codes

    def type_at(self, r: int, points: tuple, sets: tuple) -> int:
        if len(points) * 2 > _MEM_SHIFT:
            raise CapacityError("too many points for the type encoding")
        return self._type(r, list(points), self.initial(points, sets), len(sets))

    def _type(self, r: int, points: list, codes: list, nsets: int) -> int:
        atomic = tuple(codes[p] for p in points)
        if r == 0:
            return self.intern((0, atomic))
        if r == 1:
            return self.intern((1, atomic, frozenset(codes)))
        n = self.n
        adj = self.adj
        eq_bit = 1 << (2 * len(points))
        adj_shift = 2 * len(points) + 1
        point_moves = set()
        for v in range(n):
            row = adj[v]
            child = [c | ((row >> w & 1) << adj_shift) for w, c in enumerate(codes)]
            child[v] |= eq_bit
            points.append(v)
            point_moves.add(self._type(r - 1, points, child, nsets))
            points.pop()
        mem_shift = _MEM_SHIFT + nsets
        set_moves = set()
        for u in range(1 << n):
            child = [c | ((u >> w & 1) << mem_shift) for w, c in enumerate(codes)]
            set_moves.add(self._type(r - 1, points, child, nsets + 1))
        return self.intern((r, atomic, frozenset(point_moves), frozenset(set_moves)))


def type_of(
    s: Structure,
    rounds: int,
    interner: TypeInterner | None = None,
    limit: int = DEFAULT_GAME_LIMIT,
    budget: int = DEFAULT_GAME_BUDGET,
) -> int:
    """Interned id of the depth-``rounds`` type of ``s``."""
    _check_limits(s.graph.n, rounds, limit, budget)
    interner = interner if interner is not None else TypeInterner()
    comp = _TypeComputer(s.graph, interner)
    sets = tuple(to_mask(x) for x in s.set_interp)
    return comp.type_at(rounds, tuple(s.point_interp), sets)


def game_equivalent(
    cfg: GameConfig | Structure,
    right: Structure | None = None,
    rounds: int | None = None,
    limit: int = DEFAULT_GAME_LIMIT,
    budget: int = DEFAULT_GAME_BUDGET,
) -> bool:
    """True iff Duplicator wins the game, i.e. both sides have equal types.

    Accepts a :class:`GameConfig` or ``(left, right, rounds)``.
    """
    if not isinstance(cfg, GameConfig):
        cfg = GameConfig(cfg, right, rounds)
    interner = TypeInterner()
    return type_of(cfg.left, cfg.rounds, interner, limit, budget) == type_of(
        cfg.right, cfg.rounds, interner, limit, budget
    )


# --------------------------------------------------------------------------
# representative search


def candidate_graphs(order: int) -> Iterator[Graph]:
    """All graphs on ``order`` vertices, one per isomorphism class."""
    if order > ATLAS_MAX_ORDER:
        raise CapacityError(f"candidate enumeration limited to {ATLAS_MAX_ORDER} vertices")
    for h in _atlas_by_order().get(order, ()):
        yield h


_ATLAS: dict[int, list[Graph]] | None = None


def _atlas_by_order() -> dict[int, list[Graph]]:
    global _ATLAS
    if _ATLAS is None:
        from networkx.generators.atlas import graph_atlas_g

        table: dict[int, list[Graph]] = {}
        for h in graph_atlas_g():
            k = h.number_of_nodes()
            table.setdefault(k, []).append(Graph(k, h.edges()))
        _ATLAS = table
    return _ATLAS


def _boundary_choices(order: int, target: Sequence[int]) -> Iterator[tuple]:
    """Candidate boundary tuples shaped like ``target`` (empty, singleton, larger)."""
    options = []
    for mask in target:
        size = bin(mask).count("1")
        if size == 0:
            options.append([0])
        elif size == 1:
            options.append([1 << v for v in range(order)])
        else:
            options.append(list(range(1, 1 << order)))

    def rec(i, acc):
        if i == len(options):
            yield tuple(acc)
            return
        for m in options[i]:
            acc.append(m)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


class RepresentativeCatalog:
    """Operation-local store of candidate types, shared between searches.

    Types of each candidate are computed lazily rank by rank, so a candidate
    that already differs at a low rank never pays for a high one.
    """

    def __init__(self, limit: int = DEFAULT_GAME_LIMIT, budget: int = DEFAULT_GAME_BUDGET):
        self.interner = TypeInterner()
        self.limit = limit
        self.budget = budget
        self._types: dict = {}
        self.evaluated = 0

    def types(self, g: Graph, sets: tuple, rounds: int) -> int:
        key = (g, sets, rounds)
        hit = self._types.get(key)
        if hit is None:
            _check_limits(g.n, rounds, self.limit, self.budget)
            hit = _TypeComputer(g, self.interner).type_at(rounds, (), sets)
            self._types[key] = hit
            self.evaluated += 1
        return hit

    def search(
        self,
        g: Graph,
        boundary: Sequence,
        rounds: int,
        size_cap: int,
        accept: Callable[[Graph, tuple], bool] | None = None,
    ) -> tuple[Graph, tuple]:
        sets = tuple(to_mask(b) for b in boundary)
        target = [self.types(g, sets, r) for r in range(1, rounds + 1)]
        for order in range(1, min(size_cap, ATLAS_MAX_ORDER) + 1):
            for h in candidate_graphs(order):
                for cand in _boundary_choices(order, sets):
                    if all(self.types(h, cand, r) == target[r - 1] for r in range(1, rounds + 1)):
                        if accept is None or accept(h, cand):
                            return h, cand
        raise SearchExhausted(
            f"no representative on at most {size_cap} vertices with equal {rounds}-type", module=None
        )


def find_representative(
    g: Graph,
    boundary: Sequence[Iterable[int]] = (),
    q: int = 1,
    size_cap: int = 6,
    accept: Callable[[Graph, tuple], bool] | None = None,
    catalog: RepresentativeCatalog | None = None,
) -> tuple[Graph, tuple[frozenset, ...]]:
    """Smallest graph with interpreted boundary sets of the same ``q``-type.

    Returns ``(h, boundary')``. A graph already within ``size_cap`` is
    returned unchanged. ``accept`` can veto candidates (used to keep
    replacements connected and of small rank-width).
    """
    if g.n <= size_cap:
        return g, tuple(frozenset(b) for b in boundary)
    if catalog is None:
        catalog = RepresentativeCatalog()
    h, sets = catalog.search(g, boundary, q, size_cap, accept)
    return h, tuple(frozenset(v for v in range(h.n) if m >> v & 1) for m in sets)
