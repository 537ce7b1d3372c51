"""Formulas shipped with the package (``data/formulas/*.mso``)."""

from __future__ import annotations

from importlib import resources

from .mso import MsoFormula, parse_formula

__all__ = ["corpus_names", "corpus_formula", "corpus"]


def _dir():
    return resources.files("wsmkernel").joinpath("data", "formulas")


def corpus_names() -> list[str]:
    return sorted(p.name[:-4] for p in _dir().iterdir() if p.name.endswith(".mso"))


def corpus_formula(name: str) -> MsoFormula:
    path = _dir().joinpath(f"{name}.mso")
    if not path.is_file():
        raise KeyError(name)
    raw = path.read_text(encoding="utf-8")
    return parse_formula("\n".join(line.split("#", 1)[0] for line in raw.splitlines()))


def corpus(max_rank: int | None = None, sentences_only: bool = False) -> dict[str, MsoFormula]:
    out = {}
    for name in corpus_names():
        phi = corpus_formula(name)
        if max_rank is not None and phi.quantifier_rank > max_rank:
            continue
        if sentences_only and not phi.is_sentence:
            continue
        out[name] = phi
    return out
