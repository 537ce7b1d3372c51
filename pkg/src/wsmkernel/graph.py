"""Simple undirected graphs on vertices ``0..n-1`` stored as adjacency bit-rows.

Vertex sets cross the public API as ``frozenset`` objects; internally most
algorithms work on Python ints used as bitmasks, where bit ``v`` stands for
vertex ``v``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .exceptions import ContractViolation, GraphParseError

__all__ = [
    "Graph",
    "Gf2Matrix",
    "bits",
    "to_mask",
    "from_mask",
    "popcount",
    "parse_gr",
    "parse_gr_collection",
    "write_gr",
    "induced_subgraph",
    "remove_vertices",
    "connected_components",
    "component_masks",
    "is_acyclic",
    "gf2_rank",
    "disjoint_union",
]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


class Graph:
    """Immutable simple undirected graph.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask. Equality and hashing
    are on the labelled graph (``n`` and the adjacency rows); ``name`` is a
    free-form label and does not take part in comparisons.
    """

    __slots__ = ("n", "adj", "name")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), name: str | None = None):
        if n < 0:
            raise ContractViolation(f"vertex count must be non-negative, got {n}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractViolation(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ContractViolation(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(rows))
        object.__setattr__(self, "name", name)

    @classmethod
    def from_rows(cls, rows: Sequence[int], name: str | None = None) -> "Graph":
        """Build from adjacency bit-rows, checking symmetry and irreflexivity."""
        n = len(rows)
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~full:
                raise ContractViolation(f"row {v} references vertices outside 0..{n - 1}")
            if row >> v & 1:
                raise ContractViolation(f"self-loop at vertex {v}")
            for w in bits(row):
                if not rows[w] >> v & 1:
                    raise ContractViolation(f"adjacency not symmetric at ({v}, {w})")
        g = cls.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(rows))
        object.__setattr__(g, "name", name)
        return g

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"

    def __len__(self):
        return self.n

    @property
    def m(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return from_mask(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def max_degree(self) -> int:
        return max((popcount(r) for r in self.adj), default=0)

    def neighborhood_mask(self, mask: int) -> int:
        """N(A) as a bitmask: neighbours of ``mask`` outside ``mask``."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges()), name=self.name)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges()) + list(extra), name=self.name)


def disjoint_union(*graphs: Graph) -> tuple[Graph, list[int]]:
    """Disjoint union; also returns the offset of each input's vertex 0."""
    offsets, edges, total = [], [], 0
    for g in graphs:
        offsets.append(total)
        edges.extend((u + total, v + total) for u, v in g.edges())
        total += g.n
    return Graph(total, edges), offsets


def _check_members(g: Graph, mask: int) -> None:
    if mask >> g.n:
        raise ContractViolation(f"vertex set has members outside 0..{g.n - 1}")
    if mask < 0:
        raise ContractViolation("negative mask")


def induced_subgraph(g: Graph, a: Iterable[int] | int) -> tuple[Graph, dict[int, int]]:
    """G[A] with vertices renumbered in increasing order; returns (graph, old->new)."""
    mask = to_mask(a)
    _check_members(g, mask)
    order = list(bits(mask))
    index = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for w in bits(g.adj[v] & mask):
            row |= 1 << index[w]
        rows.append(row)
    sub = Graph.__new__(Graph)
    object.__setattr__(sub, "n", len(order))
    object.__setattr__(sub, "adj", tuple(rows))
    object.__setattr__(sub, "name", None)
    return sub, index


def remove_vertices(g: Graph, a: Iterable[int] | int) -> tuple[Graph, dict[int, int]]:
    """G - A, i.e. G[V \\ A]."""
    mask = to_mask(a)
    _check_members(g, mask)
    return induced_subgraph(g, g.full_mask & ~mask)


def component_masks(g: Graph, within: int | None = None) -> list[int]:
    """Components of ``g[within]`` as bitmasks, ordered by minimum vertex."""
    remaining = g.full_mask if within is None else within
    comps = []
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            nxt &= remaining & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        remaining &= ~comp
    return comps


def connected_components(g: Graph) -> list[frozenset[int]]:
    return [from_mask(c) for c in component_masks(g)]


def is_acyclic(g: Graph, within: int | None = None) -> bool:
    """True iff ``g`` (restricted to ``within`` if given) is a forest."""
    mask = g.full_mask if within is None else within
    n = popcount(mask)
    m = sum(popcount(g.adj[v] & mask) for v in bits(mask)) // 2
    return m == n - len(component_masks(g, mask))


class Gf2Matrix:
    """Dense matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[int | Sequence[int]], ncols: int | None = None):
        packed = []
        width = 0
        for row in rows:
            if isinstance(row, int):
                packed.append(row)
                width = max(width, row.bit_length())
            else:
                value = 0
                for j, entry in enumerate(row):
                    if entry & 1:
                        value |= 1 << j
                packed.append(value)
                width = max(width, len(row))
        self.rows = tuple(packed)
        self.ncols = width if ncols is None else ncols
        if any(r >> self.ncols for r in self.rows):
            raise ContractViolation("row longer than declared column count")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def transpose(self) -> "Gf2Matrix":
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            for j in bits(row):
                cols[j] |= 1 << i
        return Gf2Matrix(cols, ncols=len(self.rows))

    def rank(self) -> int:
        return gf2_rank(self.rows)


def gf2_rank(rows: Iterable[int] | Gf2Matrix) -> int:
    """Rank over GF(2) of bit-packed rows (Gaussian elimination on leading bits)."""
    if isinstance(rows, Gf2Matrix):
        rows = rows.rows
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            pivot = pivots.get(top)
            if pivot is None:
                pivots[top] = row
                rank += 1
                break
            row ^= pivot
    return rank


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphParseError(f"input is not valid UTF-8: {exc}") from None
    return data


def parse_gr(data: bytes | str, name: str | None = None) -> Graph:
    """Parse the ``.gr`` format: ``c`` comments, one ``p graph n m`` header, m edge lines.

    Vertices are 1-indexed in the file. Repeated edges collapse; self-loops are
    rejected.
    """
    graphs = _parse_gr_blocks(_decode(data), allow_many=False)
    if not graphs:
        raise GraphParseError("missing 'p graph <n> <m>' header")
    g = graphs[0][1]
    if name is not None:
        object.__setattr__(g, "name", name)
    return g


def parse_gr_collection(data: bytes | str) -> list[Graph]:
    """Parse several concatenated ``.gr`` blocks; ``c name <label>`` names the next graph."""
    return [g for _, g in _parse_gr_blocks(_decode(data), allow_many=True)]


def _parse_gr_blocks(text: str, allow_many: bool) -> list[tuple[int, Graph]]:
    results = []
    n = m = None
    edges: list[tuple[int, int]] = []
    header_line = 0
    pending_name = None
    current_name = None

    def finish(lineno):
        if n is None:
            return
        if len(edges) != m:
            raise GraphParseError(
                f"header on line {header_line} declares {m} edges, found {len(edges)}", lineno
            )
        results.append((header_line, Graph(n, edges, name=current_name)))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "c":
            if len(fields) >= 3 and fields[1] == "name":
                pending_name = " ".join(fields[2:])
            continue
        if fields[0] == "p":
            if n is not None and not allow_many:
                raise GraphParseError("second 'p' header", lineno)
            if len(fields) != 4 or fields[1] != "graph":
                raise GraphParseError(f"malformed header {line!r}", lineno)
            try:
                new_n, new_m = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphParseError(f"non-integer header field in {line!r}", lineno) from None
            if new_n < 0 or new_m < 0:
                raise GraphParseError("negative count in header", lineno)
            finish(lineno)
            n, m, edges, header_line = new_n, new_m, [], lineno
            current_name, pending_name = pending_name, None
            continue
        if n is None:
            raise GraphParseError("edge line before 'p graph' header", lineno)
        if len(fields) != 2:
            raise GraphParseError(f"expected '<u> <v>', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(f"vertex index out of range 1..{n} in {line!r}", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        edges.append((u - 1, v - 1))
    finish(None)
    return results


def write_gr(g: Graph, comments: Iterable[str] = ()) -> str:
    """Serialise to ``.gr`` text (1-indexed, one edge per line, trailing newline)."""
    lines = [f"c {c}" if c else "c" for c in comments]
    edges = g.edges()
    lines.append(f"p graph {g.n} {len(edges)}")
    lines.extend(f"{u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"
