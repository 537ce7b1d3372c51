"""Command-line entry point.

Every subcommand prints ``key: value`` lines and ends its success path with
``verify: ok`` (or ``verify: FAILED``) after re-checking its own output.
Exit status: 0/1 yes/no for decision commands (0 otherwise), 2 usage or
malformed input, 3 capacity, 4 contract violation, 5 failed self-check.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field

from .corpus import corpus_formula, corpus_names
from .exceptions import (
    BelowThresholdError,
    CapacityError,
    ContractViolation,
    FormulaSyntaxError,
    GraphParseError,
    InvariantViolation,
    SearchExhausted,
)
from .games import DEFAULT_GAME_LIMIT
from .generators import cycles_with_pendant_trees, gen_planted, gen_vc_gap_family
from .graph import Graph, Gf2Matrix, induced_subgraph, parse_gr, write_gr
from .kernels import (
    DEFAULT_SIZE_CAP,
    KernelOutput,
    _solve_plain,
    mc_kernel,
    opt_winwin,
    q_similarity_failures,
    write_annotation,
)
from .modulators import class_contains, find_wsm, parse_class, verify_wsm
from .mso import MsoFormula, Structure, evaluate, load_formula
from .rankwidth import DEFAULT_EXACT_LIMIT, ExceedsCap, cut_rank, rank_width_exact
from .splits import is_split_module, rank_width, sim_c_classes, split_decomposition

__all__ = ["RunConfig", "main", "run_command"]

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_CAPACITY, EXIT_CONTRACT, EXIT_SELFCHECK = 0, 1, 2, 3, 4, 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 0
    exact_rw_limit: int = DEFAULT_EXACT_LIMIT
    game_limit: int = DEFAULT_GAME_LIMIT
    size_cap: int = DEFAULT_SIZE_CAP
    options: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("exact_rw_limit", "game_limit", "size_cap"):
            if getattr(self, name) < 1:
                raise ContractViolation(f"{name} must be positive")


class _Report:
    def __init__(self):
        self.lines: list[str] = []

    def __call__(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _vs(vertices) -> str:
    """1-indexed, space separated."""
    return " ".join(str(v + 1) for v in sorted(vertices)) or "-"


def _read_graph(path: str) -> Graph:
    with open(path, "rb") as fh:
        return parse_gr(fh.read(), name=os.path.basename(path))


def _formula(arg: str | None) -> MsoFormula:
    if arg is None:
        raise ContractViolation("--formula is required")
    if os.path.isfile(arg):
        return load_formula(arg)
    if arg in corpus_names():
        return corpus_formula(arg)
    raise ContractViolation(f"no formula file or shipped formula named {arg!r}")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# subcommands; each returns (exit status, verified)


def _cmd_rankwidth(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    out("vertices", g.n)
    if g.n <= cfg.exact_rw_limit:
        width, dec = rank_width_exact(g, limit=cfg.exact_rw_limit)
        out("rankwidth", width)
        out("method", "exact")
        for a, b in dec.tree_edges():
            out("tree-edge", f"{a} {b}")
        for v in range(g.n):
            out("leaf", f"{v + 1} {dec.leaf_of[v]}")
        try:
            dec.check(g)
            ok = True
        except ContractViolation:
            ok = False
        return EXIT_YES, ok
    # too large for the whole-graph DP: only prime bags need it
    width = rank_width(g)
    out("rankwidth", width)
    out("method", "split")
    ok = all(_recomposes(g, t) for t in split_decomposition(g))
    return EXIT_YES, ok


def _recomposes(g: Graph, tree) -> bool:
    rebuilt = tree.recompose(g.n)
    mask = 0
    for v in tree.vertices:
        mask |= 1 << v
    return all(rebuilt.adj[v] == g.adj[v] & mask for v in tree.vertices)


def _cmd_cutrank(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    a = set()
    for tok in cfg.options["vertices"]:
        v = int(tok) - 1
        if not 0 <= v < g.n:
            raise ContractViolation(f"vertex {tok} is not in the graph")
        a.add(v)
    value = cut_rank(g, a)
    out("set", _vs(a))
    out("cutrank", value)
    rest = [v for v in range(g.n) if v not in a]
    rows = [[1 if g.has_edge(u, v) else 0 for v in rest] for u in sorted(a)]
    # rank of the transposed matrix as an independent recomputation
    again = Gf2Matrix(rows, ncols=len(rest)).transpose().rank() if rows and rest else 0
    return EXIT_YES, again == value


def _cmd_splits(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    trees = split_decomposition(g)
    out("components", len(trees))
    for t, tree in enumerate(trees):
        for b, bag in enumerate(tree.bags):
            labels = " ".join(
                str(lab + 1) if isinstance(lab, int) else f"m{lab.id}" for lab in bag.labels
            )
            out("bag", f"{t}.{b} {bag.kind} {labels}")
    return EXIT_YES, all(_recomposes(g, t) for t in trees)


def _cmd_classes(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    c = cfg.options["c"]
    part = sim_c_classes(g, c)
    out("c", c)
    out("whole-graph", "yes" if part.whole_graph else "no")
    out("classes", len(part))
    for cls in part:
        out("class", _vs(cls))
    ok = True
    for mask in part.masks:
        ok &= is_split_module(g, mask)
        if bin(mask).count("1") > 1:
            sub, _ = induced_subgraph(g, mask)
            ok &= not isinstance(rank_width(sub, cap=c), ExceedsCap)
    covered = 0
    for mask in part.masks:
        ok &= not covered & mask
        covered |= mask
    ok &= covered == g.full_mask
    return EXIT_YES, ok


def _cmd_wsm(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    target = parse_class(cfg.options["target"])
    x = find_wsm(g, cfg.options["c"], target)
    out("class", cfg.options["target"])
    out("c", x.c)
    out("k", x.k)
    for m in x.modules:
        out("module", f"{_vs(m.vertices)} | frontier {_vs(m.frontier)}")
    if cfg.options.get("output"):
        _write(cfg.options["output"], "".join(f"{_vs(m.vertices)}\n" for m in x.modules))
    reason: list = []
    ok = verify_wsm(g, x, reason)
    if reason:
        out("reason", reason[0])
    return EXIT_YES, ok


def _provenance_comments(k: KernelOutput, extra=()) -> list[str]:
    lines = list(extra)
    for note in k.notes:
        lines.append(f"note {note}")
    for idx, (orig, ids) in sorted(k.provenance.items()):
        lines.append(f"module {idx}: {_vs(orig)} -> {_vs(ids)}")
    return lines


def _cmd_kernel(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    phi = _formula(cfg.options["formula"])
    target = parse_class(cfg.options["target"])
    k = mc_kernel(g, phi, target, cfg.options["c"], cfg.size_cap, cfg.game_limit)
    out("vertices-in", g.n)
    out("vertices-out", k.graph.n)
    out("modules", k.modulator.k)
    out("quantifier-rank", phi.quantifier_rank)
    if k.is_trivial:
        out("answer", "yes" if k.verdict else "no")
    for note in k.notes:
        out("note", note)
    if cfg.options.get("output"):
        _write(cfg.options["output"], write_gr(k.graph, _provenance_comments(k, ["kernel"])))
    if k.is_trivial:
        ok = evaluate(Structure(k.graph), phi) == k.verdict
    elif k.source is None:
        ok = class_contains(k.graph, k.graph.full_mask, target)
    else:
        ok = verify_wsm(k.graph, k.modulator) and not q_similarity_failures(
            g, k.source, k, phi.quantifier_rank, cfg.game_limit
        )
    return EXIT_YES, ok


def _cmd_opt(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    phi = _formula(cfg.options["formula"])
    if phi.is_sentence or len(phi.free_set_vars) != 1:
        raise ContractViolation("opt needs a formula with exactly one free set variable")
    r = cfg.options["budget"]
    if r is None:
        raise ContractViolation("--budget is required")
    k = opt_winwin(g, phi, r, cfg.options["c"], cfg.size_cap, cfg.game_limit)
    out("vertices-in", g.n)
    out("vertices-out", k.graph.n)
    out("modules", k.modulator.k)
    out("budget-in", r)
    out("budget-out", k.budget)
    if k.is_trivial:
        out("answer", "yes" if k.verdict else "no")
    else:
        out("answer", "kernel")
        out("annotation-triples", len(k.annotation.triples))
    for note in k.notes:
        out("note", note)
    path = cfg.options.get("output")
    if path:
        _write(path, write_gr(k.graph, _provenance_comments(k, ["annotated kernel", f"budget {k.budget}"])))
        _write(path + ".ann", write_annotation(k.annotation))
    if k.is_trivial:
        ok = _solve_plain(k.graph, phi, k.budget) == k.verdict
        status = EXIT_YES if k.verdict else EXIT_NO
    else:
        ok = verify_wsm(k.graph, k.modulator)
        status = EXIT_YES
    return status, ok


def _cmd_check(cfg: RunConfig, out: _Report):
    g = _read_graph(cfg.options["graph"])
    if cfg.options["formula"] is not None:
        phi = _formula(cfg.options["formula"])
        if not phi.is_sentence:
            raise ContractViolation("check needs a sentence")
        holds = evaluate(Structure(g), phi)
        out("holds", "yes" if holds else "no")
        # isomorphism invariance on a reversed labelling as a self-check
        again = evaluate(Structure(g.relabel(list(range(g.n - 1, -1, -1)))), phi)
        return (EXIT_YES if holds else EXIT_NO), again == holds
    target = parse_class(cfg.options["target"])
    member = class_contains(g, g.full_mask, target)
    out("in-class", "yes" if member else "no")
    if member:
        ok = verify_wsm(g, find_wsm(g, 1, target)) if target != "empty" or g.n == 0 else True
    else:
        ok = True
    return (EXIT_YES if member else EXIT_NO), ok


def _cmd_gen(cfg: RunConfig, out: _Report):
    o = cfg.options
    family = o["family"]
    plant = None
    if family == "planted":
        inst = gen_planted(
            cfg.seed,
            o["k"],
            o["c"],
            o["module_size"],
            o["target"],
            core=o["core"],
            max_vertices=o["max_vertices"],
        )
        g, plant = inst.graph, inst.modulator
    elif family == "vcgap":
        g = gen_vc_gap_family(o["k"])
    else:
        g = cycles_with_pendant_trees(cfg.seed, cycles=o["k"], tree_size=o["module_size"], max_degree=4)
    out("family", family)
    out("seed", cfg.seed)
    out("vertices", g.n)
    out("edges", g.m)
    comments = [f"generated {family} seed {cfg.seed}"]
    if plant is not None:
        out("planted-k", plant.k)
        for m in plant.modules:
            out("module", _vs(m.vertices))
            comments.append(f"module {_vs(m.vertices)}")
    if o.get("output"):
        _write(o["output"], write_gr(g, comments))
    else:
        out("graph", "(pass -o to write the .gr file)")
    if plant is not None:
        return EXIT_YES, verify_wsm(g, plant)
    if family == "vcgap":
        return EXIT_YES, g.n == 2 * o["k"] + 1 and g.m == g.n - 1
    return EXIT_YES, g.max_degree() <= 4


COMMANDS = {
    "rankwidth": _cmd_rankwidth,
    "cutrank": _cmd_cutrank,
    "splits": _cmd_splits,
    "classes": _cmd_classes,
    "wsm": _cmd_wsm,
    "kernel": _cmd_kernel,
    "opt": _cmd_opt,
    "check": _cmd_check,
    "gen": _cmd_gen,
}


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-c", type=int, default=1, help="rank-width bound of the modules (default 1)")
    common.add_argument("--class", dest="target", default="forest", help="forest, edgeless, empty or obstructions:<path>")
    common.add_argument("--formula", help="formula file or shipped formula name")
    common.add_argument("--budget", type=int, help="solution size bound for opt")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-rw", type=int, default=DEFAULT_EXACT_LIMIT, help="largest n for the exact rank-width DP")
    common.add_argument("--cap-game", type=int, default=DEFAULT_GAME_LIMIT, help="largest structure in a game comparison")
    common.add_argument("--cap-size", type=int, default=DEFAULT_SIZE_CAP, help="largest representative")
    common.add_argument("-o", dest="output", help="output path")

    parser = _Parser(prog="wsmkernel", description="Rank-width, well-structured modulators and MSO kernels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("rankwidth", "splits", "classes", "wsm", "kernel", "opt", "check"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("graph", help=".gr file")
    p = sub.add_parser("cutrank", parents=[common])
    p.add_argument("graph")
    p.add_argument("vertices", nargs="*", help="1-indexed vertices of one side")
    p = sub.add_parser("gen", parents=[common])
    p.add_argument("family", choices=("planted", "vcgap", "pendant"))
    p.add_argument("-k", type=int, default=2, help="modules (planted), i (vcgap) or cycles (pendant)")
    p.add_argument("--module-size", type=int, default=3, help="largest module (planted) or tree size (pendant)")
    p.add_argument("--core", default="random", help="random or petersen")
    p.add_argument("--max-vertices", type=int)
    return parser


# commands without a file artifact; -o saves a copy of the report
_REPORT_ONLY = {"rankwidth", "cutrank", "splits", "classes", "check"}


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_YES if exc.code in (0, None) else EXIT_USAGE
    options = dict(vars(args))
    options.pop("command")
    report = _Report()
    try:
        cfg = RunConfig(
            args.command,
            seed=args.seed,
            exact_rw_limit=args.cap_rw,
            game_limit=args.cap_game,
            size_cap=args.cap_size,
            options=options,
        )
        random.seed(cfg.seed)
        status, ok = COMMANDS[args.command](cfg, report)
    except (GraphParseError, FormulaSyntaxError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (CapacityError, SearchExhausted) as exc:
        print(f"capacity: {exc}", file=stderr)
        return EXIT_CAPACITY
    except (ContractViolation, BelowThresholdError) as exc:
        print(f"contract: {exc}", file=stderr)
        return EXIT_CONTRACT
    except InvariantViolation as exc:
        print(f"internal: {exc}", file=stderr)
        return EXIT_SELFCHECK
    report("verify", "ok" if ok else "FAILED")
    stdout.write(report.text())
    if args.output and args.command in _REPORT_ONLY:
        try:
            _write(args.output, report.text())
        except OSError as exc:
            print(f"error: {exc}", file=stderr)
            return EXIT_USAGE
    return status if ok else EXIT_SELFCHECK


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
