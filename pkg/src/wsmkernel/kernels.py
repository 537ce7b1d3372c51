"""Kernels built by swapping small-rank-width modules for type-equal representatives.

Replacing each module ``X_i`` of a well-structured modulator by a graph with
the same q-type relative to its frontier, and rewiring the frontier exactly
as before, preserves the q-type of the whole graph. Every MSO sentence of
quantifier rank at most q therefore has the same truth value on the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .exceptions import BelowThresholdError, CapacityError, ContractViolation, InvariantViolation, SearchExhausted
from .games import (
    DEFAULT_GAME_LIMIT,
    RepresentativeCatalog,
    candidate_graphs,
    game_work,
    ATLAS_MAX_ORDER,
)
from .graph import (
    Graph,
    bits,
    component_masks,
    from_mask,
    induced_subgraph,
    is_acyclic,
    popcount,
    to_mask,
)
from .modulators import (
    TargetClass,
    WsModulator,
    class_contains,
    fvs_2approx,
    parse_class,
    find_wsm,
    wsm_to_empty,
)
from .mso import MsoFormula, Structure, evaluate
from .rankwidth import ExceedsCap
from .splits import rank_width, split_module

__all__ = [
    "DEFAULT_SIZE_CAP",
    "Annotation",
    "annotation_value",
    "KernelOutput",
    "replace_modules",
    "q_similarity_failures",
    "mc_kernel",
    "wsm_to_empty",
    "opt_annotated_kernel",
    "opt_winwin",
    "protrusion_replace",
    "fvs_bd_kernel",
    "piece_limit",
    "write_annotation",
    "read_annotation",
]

DEFAULT_SIZE_CAP = 6


# --------------------------------------------------------------------------
# annotations


@dataclass(frozen=True)
class Annotation:
    """Triples ``(X, Y, w)``: weight ``w`` counts for sets containing X and avoiding Y."""

    triples: tuple = ()

    def __init__(self, triples: Iterable = ()):
        norm = []
        for x, y, w in triples:
            x, y = frozenset(x), frozenset(y)
            if x & y:
                raise ContractViolation("annotation triple with overlapping X and Y")
            if w < 0:
                raise ContractViolation("annotation weights are non-negative")
            norm.append((x, y, int(w)))
        object.__setattr__(self, "triples", tuple(norm))

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)


def annotation_value(a: Annotation, z: Iterable[int]) -> int:
    z = frozenset(z)
    return sum(w for x, y, w in a.triples if x <= z and not (y & z))


def write_annotation(a: Annotation) -> str:
    """Sidecar text, one ``a |X| X.. |Y| Y.. w`` line per triple, 1-indexed."""
    lines = []
    for x, y, w in a.triples:
        xs = " ".join(str(v + 1) for v in sorted(x))
        ys = " ".join(str(v + 1) for v in sorted(y))
        parts = ["a", str(len(x))] + ([xs] if xs else []) + [str(len(y))] + ([ys] if ys else []) + [str(w)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def read_annotation(text: str) -> Annotation:
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        if tok[0] != "a":
            raise ContractViolation(f"line {lineno}: expected an 'a' record")
        try:
            nums = [int(t) for t in tok[1:]]
            nx = nums[0]
            x = [v - 1 for v in nums[1 : 1 + nx]]
            ny = nums[1 + nx]
            y = [v - 1 for v in nums[2 + nx : 2 + nx + ny]]
            (w,) = nums[2 + nx + ny :]
        except (ValueError, IndexError):
            raise ContractViolation(f"line {lineno}: malformed annotation record") from None
        triples.append((x, y, w))
    return Annotation(triples)


@dataclass
class KernelOutput:
    graph: Graph
    modulator: WsModulator
    annotation: Annotation | None = None
    budget: int | None = None
    provenance: dict = field(default_factory=dict)
    verdict: bool | None = None
    notes: list = field(default_factory=list)
    source: WsModulator | None = None

    @property
    def is_trivial(self) -> bool:
        return self.verdict is not None


# --------------------------------------------------------------------------
# module replacement


def _module_accept(module_mask: int, frontier_mask: int, whole: bool, c: int):
    """Veto representatives that would stop being a split-module of rank-width <= c."""

    def accept(h: Graph, sets: tuple) -> bool:
        if h.n > 1:
            width = rank_width(h, cap=c)
            if isinstance(width, ExceedsCap):
                return False
        if whole:
            return True
        comps = component_masks(h)
        if frontier_mask == 0:
            return len(comps) == 1
        s = sets[0]
        return all(comp & s for comp in comps)

    return accept


def replace_modules(
    g: Graph,
    x: WsModulator,
    q: int,
    size_cap: int = DEFAULT_SIZE_CAP,
    catalog: RepresentativeCatalog | None = None,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> KernelOutput:
    """Swap every module larger than ``size_cap`` for a q-type-equal representative.

    Outside vertices come first in the new numbering (original order), then
    each module's replacement in module order. Frontiers are rewired
    completely: a vertex or frontier adjacent to ``S_i`` before is adjacent
    to all of ``S'_i`` after.
    """
    if catalog is None:
        catalog = RepresentativeCatalog(limit=game_limit)
    full = g.full_mask
    covered = x.mask
    outside = [v for v in range(g.n) if not covered >> v & 1]
    new_id = {v: i for i, v in enumerate(outside)}
    offset = len(outside)
    reps = []
    for idx, mod in enumerate(x.modules):
        mask = mod.mask
        fmask = to_mask(mod.frontier)
        if popcount(mask) <= size_cap:
            order = sorted(bits(mask))
            local = {v: i for i, v in enumerate(order)}
            h, _ = induced_subgraph(g, mask)
            s_new = to_mask(local[v] for v in mod.frontier)
            reps.append((h, s_new, order))
        else:
            sub, local = induced_subgraph(g, mask)
            boundary = (to_mask(local[v] for v in mod.frontier),)
            accept = _module_accept(mask, fmask, mask == full, x.c)
            try:
                h, sets = catalog.search(sub, boundary, q, size_cap, accept)
            except SearchExhausted as exc:
                raise SearchExhausted(f"module {idx}: {exc}", module=idx) from None
            reps.append((h, sets[0], None))
    edges = []
    for u, v in g.edges():
        if u in new_id and v in new_id:
            edges.append((new_id[u], new_id[v]))
    placed = []
    provenance = {}
    for idx, (h, s_new, order) in enumerate(reps):
        base = offset
        offset += h.n
        edges.extend((base + a, base + b) for a, b in h.edges())
        ids = list(range(base, base + h.n))
        front = [base + v for v in bits(s_new)]
        placed.append((ids, front))
        provenance[idx] = (tuple(sorted(x.modules[idx].vertices)), tuple(ids))
    # frontier wiring
    for i, mod in enumerate(x.modules):
        if not mod.frontier:
            continue
        anchor = next(iter(mod.frontier))
        nbrs = g.adj[anchor] & ~mod.mask
        for v in bits(nbrs):
            if v in new_id:
                edges.extend((new_id[v], f) for f in placed[i][1])
        for j in range(i + 1, len(x.modules)):
            if nbrs & x.modules[j].mask:
                edges.extend((a, b) for a in placed[i][1] for b in placed[j][1])
    g2 = Graph(offset, edges)
    modules = []
    for ids, _front in placed:
        modules.append(split_module(g2, ids))
    return KernelOutput(g2, WsModulator(tuple(modules), x.c, x.target), provenance=provenance, source=x)


def q_similarity_failures(
    g: Graph,
    x: WsModulator,
    out: KernelOutput,
    q: int,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> list[str]:
    """Names of the q-similarity conditions that fail between input and output."""
    g2, x2 = out.graph, out.modulator
    failures = []
    outside = [v for v in range(g.n) if not x.mask >> v & 1]
    outside2 = [v for v in range(g2.n) if not x2.mask >> v & 1]
    tau = dict(zip(outside, outside2))
    if len(outside) != len(outside2) or any(
        g.has_edge(a, b) != g2.has_edge(tau[a], tau[b]) for a, b in combinations(outside, 2)
    ):
        failures.append("isomorphism")
    if len(x.modules) != len(x2.modules):
        return failures + ["module count"]
    for m1, m2 in zip(x.modules, x2.modules):
        s1, s2 = to_mask(m1.frontier), to_mask(m2.frontier)
        for v in outside:
            if bool(g.adj[v] & s1) != bool(g2.adj[tau[v]] & s2):
                failures.append("frontier adjacency")
                break
    for (m1, m2), (n1, n2) in combinations(list(zip(x.modules, x2.modules)), 2):
        a = any(g.adj[v] & to_mask(n1.frontier) for v in m1.frontier)
        b = any(g2.adj[v] & to_mask(n2.frontier) for v in m2.frontier)
        if a != b:
            failures.append("frontier pairs")
            break
    catalog = RepresentativeCatalog(limit=game_limit)
    for m1, m2 in zip(x.modules, x2.modules):
        sub1, loc1 = induced_subgraph(g, m1.mask)
        sub2, loc2 = induced_subgraph(g2, m2.mask)
        t1 = catalog.types(sub1, (to_mask(loc1[v] for v in m1.frontier),), q)
        t2 = catalog.types(sub2, (to_mask(loc2[v] for v in m2.frontier),), q)
        if t1 != t2:
            failures.append("module types")
            break
    return failures


# --------------------------------------------------------------------------
# model-checking kernels


def _singletons(g: Graph, c: int, target: TargetClass) -> WsModulator:
    return WsModulator(tuple(split_module(g, [v]) for v in range(g.n)), c, target)


def _smallest_model(phi: MsoFormula, verdict: bool) -> Graph | None:
    for order in range(0, ATLAS_MAX_ORDER + 1):
        for h in candidate_graphs(order):
            if evaluate(Structure(h), phi) == verdict:
                return h
    return None


def _trivial(g: Graph, phi: MsoFormula, c: int, target: TargetClass, reason: str) -> KernelOutput:
    verdict = evaluate(Structure(g), phi)
    h = _smallest_model(phi, verdict)
    notes = [reason]
    if h is None:
        h = g
        notes.append("no small instance with the same answer; returning the input")
    return KernelOutput(h, _singletons(h, c, target), verdict=verdict, notes=notes)


def mc_kernel(
    g: Graph,
    phi: MsoFormula,
    target: TargetClass = "empty",
    c: int = 1,
    size_cap: int = DEFAULT_SIZE_CAP,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> KernelOutput:
    """Kernel for deciding ``g |= phi`` parameterised by a well-structured modulator.

    When the rank-width is too small for the class structure to be an
    equivalence, the sentence is decided directly and a smallest graph with
    the same answer is returned instead.
    """
    if not phi.is_sentence:
        raise ContractViolation("model-checking kernels need a sentence")
    target = parse_class(target)
    if target != "empty" and class_contains(g, g.full_mask, target):
        return KernelOutput(g, WsModulator((), c, target), notes=["input already in class"])
    try:
        x = find_wsm(g, c, target, strict=True)
    except BelowThresholdError as exc:
        return _trivial(g, phi, c, target, f"below threshold: {exc}")
    return replace_modules(g, x, phi.quantifier_rank, size_cap, game_limit=game_limit)


# --------------------------------------------------------------------------
# optimisation kernels


def _weights(
    catalog: RepresentativeCatalog,
    orig: Graph,
    s_orig: int,
    rep: Graph,
    s_rep: int,
    q: int,
) -> dict[int, int]:
    """For every subset W' of the representative, the smallest |W*| in the original
    module whose q-type (with the frontier) matches that of W'."""
    best: dict[int, int] = {}
    for w in range(1 << orig.n):
        t = catalog.types(orig, (s_orig, w), q)
        size = popcount(w)
        if best.get(t, size + 1) > size:
            best[t] = size
    out = {}
    for w in range(1 << rep.n):
        t = catalog.types(rep, (s_rep, w), q)
        if t not in best:
            raise InvariantViolation("representative realises a type the module does not")
        out[w] = best[t]
    return out


def opt_annotated_kernel(
    g: Graph,
    x: WsModulator,
    phi: MsoFormula,
    r: int | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> KernelOutput:
    """Annotated kernel for ``min |S|`` subject to ``g |= phi(S)``.

    Modules are replaced at rank q+1; each subset W' of a replacement gets
    the weight of the smallest equally typed subset of the original module.
    """
    if len(phi.free_set_vars) != 1 or phi.free_point_vars:
        raise ContractViolation("optimisation formulas have exactly one free set variable")
    if x.mask != g.full_mask:
        raise ContractViolation("the modulator must cover every vertex (target: empty graph)")
    q = phi.quantifier_rank
    catalog = RepresentativeCatalog(limit=game_limit)
    out = replace_modules(g, x, q + 1, size_cap, catalog=catalog, game_limit=game_limit)
    triples = []
    for idx, (m1, m2) in enumerate(zip(x.modules, out.modulator.modules)):
        orig, loc1 = induced_subgraph(g, m1.mask)
        rep, loc2 = induced_subgraph(out.graph, m2.mask)
        back = {i: v for v, i in loc2.items()}
        try:
            weights = _weights(
                catalog,
                orig,
                to_mask(loc1[v] for v in m1.frontier),
                rep,
                to_mask(loc2[v] for v in m2.frontier),
                q,
            )
        except CapacityError as exc:
            raise CapacityError(f"module {idx}: {exc}") from None
        members = frozenset(m2.vertices)
        for w, weight in weights.items():
            chosen = frozenset(back[i] for i in bits(w))
            triples.append((chosen, members - chosen, weight))
    out.annotation = Annotation(triples)
    out.budget = r
    return out


def _solve_annotated(k: KernelOutput, phi: MsoFormula, r: int) -> bool:
    g = k.graph
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            if annotation_value(k.annotation, combo) > r:
                continue
            if evaluate(Structure(g, [frozenset(combo)]), phi):
                return True
    return False


def _solve_plain(g: Graph, phi: MsoFormula, r: int) -> bool:
    for size in range(min(r, g.n) + 1):
        for combo in combinations(range(g.n), size):
            if evaluate(Structure(g, [frozenset(combo)]), phi):
                return True
    return False


def _opt_trivial(phi: MsoFormula, verdict: bool) -> tuple[Graph, int]:
    """A tiny unannotated instance with the given answer: budget -1 is always no,
    budget 0 is yes on the first small graph where some set satisfies ``phi``."""
    if not verdict:
        return Graph(1), -1
    for order in range(1, ATLAS_MAX_ORDER + 1):
        for h in candidate_graphs(order):
            if any(evaluate(Structure(h, [from_mask(s)]), phi) for s in range(1 << h.n)):
                return h, 0
    raise InvariantViolation("formula is satisfiable but has no small model")


def opt_winwin(
    g: Graph,
    phi: MsoFormula,
    r: int,
    c: int = 1,
    size_cap: int = DEFAULT_SIZE_CAP,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> KernelOutput:
    """Either decide ``min |S| <= r`` outright (when 2^k <= n) or return the annotated kernel."""
    x = wsm_to_empty(g, c)
    if (1 << x.k) > g.n:
        kernel = opt_annotated_kernel(g, x, phi, r, size_cap, game_limit)
        kernel.notes.append("kernel branch")
        return kernel
    try:
        kernel = opt_annotated_kernel(g, x, phi, r, size_cap, game_limit)
        verdict = _solve_annotated(kernel, phi, r)
        how = "annotated kernel"
    except (SearchExhausted, CapacityError):
        # no small representative for some module; the input itself is small enough here
        verdict = _solve_plain(g, phi, r)
        how = "input graph"
    h, budget = _opt_trivial(phi, verdict)
    return KernelOutput(
        h,
        _singletons(h, c, "empty"),
        annotation=Annotation(),
        budget=budget,
        verdict=verdict,
        notes=["direct-solve branch", f"solved on: {how}"],
    )


# --------------------------------------------------------------------------
# protrusions and the bounded-degree forest kernel


def _replace_piece(
    g: Graph,
    piece: int,
    q: int,
    size_cap: int,
    catalog: RepresentativeCatalog,
    require_forest: bool = False,
) -> tuple[Graph, dict[int, int]]:
    """Swap ``g[piece]`` for a representative; returns the graph and old->new ids."""
    boundary = sorted(bits(g.neighborhood_mask(piece) & ~piece))
    region = piece | to_mask(boundary)
    sub, local = induced_subgraph(g, region)
    sets = tuple(1 << local[b] for b in boundary)
    pairs = [(i, j) for i in range(len(boundary)) for j in range(i + 1, len(boundary))]
    wanted = {p: g.has_edge(boundary[p[0]], boundary[p[1]]) for p in pairs}

    def accept(h: Graph, cand: tuple) -> bool:
        where = [m.bit_length() - 1 for m in cand]
        if any(h.has_edge(where[i], where[j]) != wanted[(i, j)] for i, j in pairs):
            return False
        return not require_forest or is_acyclic(h)

    h, cand = catalog.search(sub, sets, q, size_cap + len(boundary), accept)
    where = [m.bit_length() - 1 for m in cand]
    keep = [v for v in range(g.n) if not piece >> v & 1]
    mapping = {v: i for i, v in enumerate(keep)}
    h_ids = {}
    nxt = len(keep)
    for hv in range(h.n):
        if hv in where:
            h_ids[hv] = mapping[boundary[where.index(hv)]]
        else:
            h_ids[hv] = nxt
            nxt += 1
    edges = [(mapping[u], mapping[v]) for u, v in g.edges() if u in mapping and v in mapping]
    for a, b in h.edges():
        if a in where and b in where:
            continue
        edges.append((h_ids[a], h_ids[b]))
    return Graph(nxt, edges), mapping


def protrusion_replace(
    g: Graph,
    l: Iterable[int],
    q: int,
    size_cap: int = DEFAULT_SIZE_CAP,
    catalog: RepresentativeCatalog | None = None,
    game_limit: int = DEFAULT_GAME_LIMIT,
) -> Graph:
    """Replace ``g[l]`` by a small graph of the same q-type relative to its boundary.

    Boundary vertices enter the type computation as singleton sets; the new
    vertices are appended after the surviving ones.
    """
    piece = to_mask(l)
    if popcount(piece) <= size_cap:
        return g
    if catalog is None:
        catalog = RepresentativeCatalog(limit=game_limit)
    return _replace_piece(g, piece, q, size_cap, catalog)[0]


PIECE_WORK = 200_000
PIECE_MAX = 14


def piece_limit(q: int, work: int = PIECE_WORK) -> int:
    """Largest structure size whose ``q``-type stays within ``work`` steps."""
    n = 1
    while n < PIECE_MAX and game_work(n + 1, q) <= work:
        n += 1
    return n


def _forest_pieces(g: Graph, xmask: int, size_cap: int, limit: int) -> list[int]:
    """Connected pieces of ``g - X`` with at most two boundary vertices that fit the game."""
    rest = g.full_mask & ~xmask
    pieces = set()
    isolated = 0
    for comp in component_masks(g, within=rest):
        if not g.neighborhood_mask(comp) & xmask:
            isolated |= comp
        root = (comp & -comp).bit_length() - 1
        parent = {root: None}
        order = [root]
        for v in order:
            for w in bits(g.adj[v] & rest):
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        sub = {v: 1 << v for v in order}
        for v in reversed(order):
            p = parent[v]
            if p is not None:
                sub[p] |= sub[v]
        for v in order:
            # descendants u of v, cut off below u
            cands = [sub[v]]
            for u in bits(sub[v]):
                if u != v:
                    cands.append(sub[v] & ~sub[u])
            for piece in cands:
                size = popcount(piece)
                if size <= size_cap:
                    continue
                border = popcount(g.neighborhood_mask(piece) & ~piece)
                if border <= 2 and size + border <= limit:
                    pieces.add(piece)
    if isolated and size_cap < popcount(isolated) <= limit:
        pieces.add(isolated)
    return sorted(pieces, key=lambda m: (-popcount(m), m))


def fvs_bd_kernel(
    g: Graph,
    phi: MsoFormula,
    d: int,
    size_cap: int = DEFAULT_SIZE_CAP,
    game_limit: int | None = None,
) -> KernelOutput:
    """Kernel for bounded-degree graphs parameterised by feedback vertex set.

    ``game_limit`` defaults to :func:`piece_limit` of the quantifier rank.
    After a 2-approximate feedback vertex set X is fixed, pieces of the forest
    ``g - X`` with at most two boundary vertices are swapped for smaller
    forests of the same type until no piece within the game limit shrinks.
    """
    if g.max_degree() > d:
        raise ContractViolation(f"maximum degree {g.max_degree()} exceeds the bound {d}")
    if not phi.is_sentence:
        raise ContractViolation("model-checking kernels need a sentence")
    q = phi.quantifier_rank
    if game_limit is None:
        game_limit = piece_limit(q)
    x = sorted(fvs_2approx(g))
    catalog = RepresentativeCatalog(limit=game_limit)
    failed: set = set()
    replacements = 0
    cur = g
    while True:
        xmask = to_mask(x)
        changed = False
        for piece in _forest_pieces(cur, xmask, size_cap, game_limit):
            key = (cur, piece)
            if key in failed:
                continue
            try:
                nxt, mapping = _replace_piece(cur, piece, q, size_cap, catalog, require_forest=True)
            except SearchExhausted:
                failed.add(key)
                continue
            if nxt.n >= cur.n:
                failed.add(key)
                continue
            x = [mapping[v] for v in x]
            cur = nxt
            replacements += 1
            changed = True
            break
        if not changed:
            break
    modulator = WsModulator(tuple(split_module(cur, [v]) for v in x), 0, "forest")
    return KernelOutput(cur, modulator, notes=[f"replacements: {replacements}", f"fvs: {len(x)}"])
