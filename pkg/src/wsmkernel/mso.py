"""MSO1 formulas over graphs: parsing, quantifier rank and model checking.

Grammar (``&`` binds tighter than ``|``, which binds tighter than ``->``;
a quantifier's scope extends as far right as possible)::

    formula := "ex" x "." formula | "all" x "." formula
             | "exS" X "." formula | "allS" X "." formula
             | disj ["->" formula]
    disj    := conj {"|" conj}
    conj    := unary {"&" unary}
    unary   := "~" unary | quantified | "(" formula ")" | atom
    atom    := "E(" x "," y ")" | x "=" y | X "(" x ")"

Lowercase identifiers are point variables, capitalised ones set variables;
``E`` is reserved for adjacency.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exceptions import CapacityError, ContractViolation, FormulaSyntaxError
from .graph import Graph, to_mask

__all__ = [
    "Edge",
    "Eq",
    "Mem",
    "Not",
    "And",
    "Or",
    "Implies",
    "Quant",
    "MsoFormula",
    "Structure",
    "parse_formula",
    "load_formula",
    "quantifier_rank",
    "evaluate",
    "DEFAULT_EVAL_LIMIT",
]

DEFAULT_EVAL_LIMIT = 20


# --------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Mem:
    var: str
    x: str


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Quant:
    """``kind`` is one of "ex", "all", "exS", "allS"."""

    kind: str
    var: str
    body: object

    @property
    def is_set(self) -> bool:
        return self.kind in ("exS", "allS")

    @property
    def is_exists(self) -> bool:
        return self.kind in ("ex", "exS")


def quantifier_rank(node) -> int:
    """Nesting depth of quantifiers; point and set quantifiers both count one."""
    if isinstance(node, MsoFormula):
        node = node.ast
    if isinstance(node, Quant):
        return 1 + quantifier_rank(node.body)
    if isinstance(node, Not):
        return quantifier_rank(node.arg)
    if isinstance(node, (And, Or, Implies)):
        return max(quantifier_rank(node.left), quantifier_rank(node.right))
    return 0


def _free(node, bound_points=frozenset(), bound_sets=frozenset()):
    """(free points, free sets) in order of first occurrence."""
    points: list[str] = []
    sets: list[str] = []

    def add(lst, name):
        if name not in lst:
            lst.append(name)

    def walk(n, bp, bs):
        if isinstance(n, (Edge, Eq)):
            for v in (n.x, n.y):
                if v not in bp:
                    add(points, v)
        elif isinstance(n, Mem):
            if n.var not in bs:
                add(sets, n.var)
            if n.x not in bp:
                add(points, n.x)
        elif isinstance(n, Not):
            walk(n.arg, bp, bs)
        elif isinstance(n, (And, Or, Implies)):
            walk(n.left, bp, bs)
            walk(n.right, bp, bs)
        elif isinstance(n, Quant):
            if n.is_set:
                walk(n.body, bp, bs | {n.var})
            else:
                walk(n.body, bp | {n.var}, bs)

    walk(node, bound_points, bound_sets)
    return points, sets


@dataclass(frozen=True)
class MsoFormula:
    ast: object
    free_set_vars: tuple = ()
    free_point_vars: tuple = ()
    text: str = field(default="", compare=False)

    @property
    def quantifier_rank(self) -> int:
        return quantifier_rank(self.ast)

    @property
    def is_sentence(self) -> bool:
        return not self.free_set_vars and not self.free_point_vars

    def __str__(self):
        return self.text or format_formula(self.ast)


def format_formula(node) -> str:
    if isinstance(node, Edge):
        return f"E({node.x},{node.y})"
    if isinstance(node, Eq):
        return f"{node.x}={node.y}"
    if isinstance(node, Mem):
        return f"{node.var}({node.x})"
    if isinstance(node, Not):
        return f"~{format_formula(node.arg)}"
    if isinstance(node, And):
        return f"({format_formula(node.left)} & {format_formula(node.right)})"
    if isinstance(node, Or):
        return f"({format_formula(node.left)} | {format_formula(node.right)})"
    if isinstance(node, Implies):
        return f"({format_formula(node.left)} -> {format_formula(node.right)})"
    if isinstance(node, Quant):
        return f"({node.kind} {node.var}. {format_formula(node.body)})"
    raise TypeError(node)


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(->)|([~&|().,=])|([A-Za-z_][A-Za-z0-9_']*))")
_QUANTIFIERS = {"ex", "all", "exS", "allS"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
            tok = m.group(1) or m.group(2) or m.group(3)
            self.tokens.append((tok, m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected=None, what=None):
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError(f"unexpected end of formula, expected {what or expected or 'more input'}", self.pos())
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, got {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self, kind):
        at = self.pos()
        tok = self.take(what=f"{kind} variable")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) or tok in _QUANTIFIERS:
            raise FormulaSyntaxError(f"expected {kind} variable, got {tok!r}", at)
        is_set = tok[0].isupper()
        if kind == "point" and is_set:
            raise FormulaSyntaxError(f"point variables are lowercase, got {tok!r}", at)
        if kind == "set" and (not is_set or tok == "E"):
            raise FormulaSyntaxError(f"set variables are capitalised (not E), got {tok!r}", at)
        return tok

    def formula(self):
        if self.peek() in _QUANTIFIERS:
            return self.quantified()
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def quantified(self):
        kind = self.take()
        var = self.ident("set" if kind.endswith("S") else "point")
        self.take(".")
        return Quant(kind, var, self.formula())

    def disj(self):
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in _QUANTIFIERS:
            return self.quantified()
        if tok == "(":
            self.take()
            node = self.formula()
            self.take(")")
            return node
        return self.atom()

    def atom(self):
        at = self.pos()
        tok = self.take(what="atom")
        if tok == "E" and self.peek() == "(":
            self.take("(")
            x = self.ident("point")
            self.take(",")
            y = self.ident("point")
            self.take(")")
            return Edge(x, y)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise FormulaSyntaxError(f"unexpected {tok!r}", at)
        if tok[0].isupper():
            self.take("(")
            x = self.ident("point")
            self.take(")")
            return Mem(tok, x)
        if self.peek() == "=":
            self.take()
            return Eq(tok, self.ident("point"))
        raise FormulaSyntaxError(f"expected atom after {tok!r}", at)


def parse_formula(
    text: str,
    free_sets: Sequence[str] | None = None,
    free_points: Sequence[str] = (),
) -> MsoFormula:
    """Parse formula text.

    Free set variables default to those occurring unbound, in order of first
    occurrence; an unbound point variable must be listed in ``free_points``.
    """
    parser = _Parser(text)
    if parser.peek() is None:
        raise FormulaSyntaxError("empty formula", 0)
    ast = parser.formula()
    if parser.peek() is not None:
        raise FormulaSyntaxError(f"trailing input {parser.peek()!r}", parser.pos())
    points, sets = _free(ast)
    undeclared = [p for p in points if p not in free_points]
    if undeclared:
        raise FormulaSyntaxError(f"unbound point variable {undeclared[0]!r} is not declared free")
    if free_sets is None:
        free_sets = sets
    else:
        missing = [s for s in sets if s not in free_sets]
        if missing:
            raise FormulaSyntaxError(f"unbound set variable {missing[0]!r} is not declared free")
    return MsoFormula(ast, tuple(free_sets), tuple(free_points), text=text.strip())


def load_formula(path, **kwargs) -> MsoFormula:
    """Read a formula file; ``#`` starts a comment running to end of line."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    text = "\n".join(line.split("#", 1)[0] for line in raw.splitlines())
    return parse_formula(text, **kwargs)


# --------------------------------------------------------------------------
# model checking


@dataclass(frozen=True)
class Structure:
    """A graph with interpretations for free set variables and free point variables."""

    graph: Graph
    set_interp: tuple = ()
    point_interp: tuple = ()

    def __init__(self, graph: Graph, set_interp: Iterable = (), point_interp: Iterable[int] = ()):
        sets = tuple(frozenset(s) for s in set_interp)
        points = tuple(point_interp)
        for s in sets:
            if any(not 0 <= v < graph.n for v in s):
                raise ContractViolation("set interpretation outside V(graph)")
        if any(not 0 <= v < graph.n for v in points):
            raise ContractViolation("point interpretation outside V(graph)")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "set_interp", sets)
        object.__setattr__(self, "point_interp", points)


class _Evaluator:
    """Three-valued evaluation plus backtracking over existential set blocks.

    A set variable is held as ``(known, value)`` bitmasks so that a partially
    chosen set can already refute (or confirm) the body, which prunes the
    search without changing the semantics of full enumeration.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.adj = g.adj
        self.n = g.n
        self.full = g.full_mask
        self.order = _search_order(g)
        self._free_sets: dict[int, list[str]] = {}

    def free_sets(self, node) -> list[str]:
        key = id(node)
        hit = self._free_sets.get(key)
        if hit is None:
            hit = _free(node)[1]
            self._free_sets[key] = hit
        return hit

    def ev(self, node, pts: dict, sets: dict):
        t = type(node)
        if t is Mem:
            known, val = sets[node.var]
            v = pts[node.x]
            if known >> v & 1:
                return bool(val >> v & 1)
            return None
        if t is Edge:
            return bool(self.adj[pts[node.x]] >> pts[node.y] & 1)
        if t is Eq:
            return pts[node.x] == pts[node.y]
        if t is Not:
            r = self.ev(node.arg, pts, sets)
            return None if r is None else not r
        if t is And:
            a = self.ev(node.left, pts, sets)
            if a is False:
                return False
            b = self.ev(node.right, pts, sets)
            if b is False:
                return False
            return True if a and b else None
        if t is Or:
            a = self.ev(node.left, pts, sets)
            if a is True:
                return True
            b = self.ev(node.right, pts, sets)
            if b is True:
                return True
            return False if a is False and b is False else None
        if t is Implies:
            a = self.ev(node.left, pts, sets)
            if a is False:
                return True
            b = self.ev(node.right, pts, sets)
            if b is True:
                return True
            return False if a is True and b is False else None
        if t is Quant:
            if node.is_set:
                return self.set_block(node, pts, sets)
            return self.point_quant(node, pts, sets)
        raise TypeError(f"unknown formula node {node!r}")

    def point_quant(self, node: Quant, pts, sets):
        want = node.is_exists
        unknown = False
        saved = pts.get(node.var, _MISSING)
        try:
            for v in range(self.n):
                pts[node.var] = v
                r = self.ev(node.body, pts, sets)
                if r is want:
                    return want
                if r is None:
                    unknown = True
        finally:
            if saved is _MISSING:
                pts.pop(node.var, None)
            else:
                pts[node.var] = saved
        return None if unknown else not want

    def set_block(self, node: Quant, pts, sets):
        # an inner set quantifier over a partially known outer set stays undecided
        for name in self.free_sets(node):
            if sets[name][0] != self.full:
                return None
        names = [node.var]
        body = node.body
        while isinstance(body, Quant) and body.kind == node.kind and body.var not in names:
            names.append(body.var)
            body = body.body
        want = node.is_exists
        saved = {name: sets.get(name, _MISSING) for name in names}
        try:
            for name in names:
                sets[name] = (0, 0)
            return self._search(body, names, 0, pts, sets, want)
        finally:
            for name, old in saved.items():
                if old is _MISSING:
                    sets.pop(name, None)
                else:
                    sets[name] = old

    def _search(self, body, names, depth, pts, sets, want):
        """True iff some completion makes ``body`` equal ``want`` (then returns want)."""
        r = self.ev(body, pts, sets)
        if r is want:
            return want
        if r is (not want):
            return not want
        total = self.n * len(names)
        if depth == total:
            raise AssertionError("fully assigned body evaluated to unknown")
        i, k = divmod(depth, len(names))
        name = names[k]
        known, val = sets[name]
        bit = 1 << self.order[i]
        for choice in (0, bit):
            sets[name] = (known | bit, val | choice)
            if self._search(body, names, depth + 1, pts, sets, want) is want:
                sets[name] = (known, val)
                return want
        sets[name] = (known, val)
        return not want


_MISSING = object()


def _search_order(g: Graph) -> list[int]:
    """Breadth-first order so that constraints between neighbours fire early."""
    order: list[int] = []
    seen = 0
    for start in sorted(range(g.n), key=lambda v: -g.degree(v)):
        if seen >> start & 1:
            continue
        seen |= 1 << start
        queue = [start]
        for v in queue:
            order.append(v)
            for w in sorted(g.neighbors(v), key=lambda u: -g.degree(u)):
                if not seen >> w & 1:
                    seen |= 1 << w
                    queue.append(w)
    return order


def evaluate(s: Structure, phi: MsoFormula, limit: int = DEFAULT_EVAL_LIMIT) -> bool:
    """Decide ``s |= phi`` under standard MSO1 semantics."""
    if not isinstance(phi, MsoFormula):
        raise ContractViolation("evaluate expects an MsoFormula")
    if len(s.set_interp) != len(phi.free_set_vars):
        raise ContractViolation(
            f"formula has {len(phi.free_set_vars)} free set variables, structure interprets {len(s.set_interp)}"
        )
    if len(s.point_interp) != len(phi.free_point_vars):
        raise ContractViolation(
            f"formula has {len(phi.free_point_vars)} free point variables, structure interprets {len(s.point_interp)}"
        )
    if s.graph.n > limit:
        raise CapacityError(f"model checking limited to {limit} vertices, graph has {s.graph.n}")
    ev = _Evaluator(s.graph)
    full = s.graph.full_mask
    sets = {name: (full, to_mask(val)) for name, val in zip(phi.free_set_vars, s.set_interp)}
    pts = dict(zip(phi.free_point_vars, s.point_interp))
    result = ev.ev(phi.ast, pts, sets)
    if result is None:
        raise AssertionError("closed evaluation returned unknown")
    return result
