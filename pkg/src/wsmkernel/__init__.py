"""Rank-width tools, well-structured modulators and MSO kernelization."""

from .corpus import corpus, corpus_formula, corpus_names
from .estimators import FvsKernelizer, MsoKernelizer, OptKernelizer, RankWidthEstimator, SplitClassifier, WsmFinder
from .exceptions import (
    BelowThresholdError,
    CapacityError,
    ContractViolation,
    FormulaSyntaxError,
    GraphParseError,
    InvariantViolation,
    SearchExhausted,
    WsmError,
)
from .games import RepresentativeCatalog, find_representative, game_equivalent, type_of
from .generators import cycles_with_pendant_trees, gen_planted, gen_vc_gap_family
from .graph import Graph, parse_gr, parse_gr_collection, write_gr
from .kernels import (
    Annotation,
    KernelOutput,
    annotation_value,
    fvs_bd_kernel,
    mc_kernel,
    opt_annotated_kernel,
    opt_winwin,
    protrusion_replace,
    read_annotation,
    replace_modules,
    write_annotation,
)
from .modulators import WsModulator, find_wsm, fvs_2approx, verify_wsm, wsm_forest_3approx, wsm_obstruction_approx
from .mso import MsoFormula, Structure, evaluate, load_formula, parse_formula
from .rankwidth import ExceedsCap, RankDecomposition, cut_rank, rank_width_exact
from .splits import rank_width, sim_c_classes, split_decomposition

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "BelowThresholdError",
    "CapacityError",
    "ContractViolation",
    "ExceedsCap",
    "FormulaSyntaxError",
    "FvsKernelizer",
    "Graph",
    "GraphParseError",
    "InvariantViolation",
    "KernelOutput",
    "MsoFormula",
    "MsoKernelizer",
    "OptKernelizer",
    "RankDecomposition",
    "RankWidthEstimator",
    "RepresentativeCatalog",
    "SearchExhausted",
    "SplitClassifier",
    "Structure",
    "WsModulator",
    "WsmError",
    "WsmFinder",
    "annotation_value",
    "corpus",
    "corpus_formula",
    "corpus_names",
    "cut_rank",
    "cycles_with_pendant_trees",
    "evaluate",
    "find_representative",
    "find_wsm",
    "fvs_2approx",
    "fvs_bd_kernel",
    "game_equivalent",
    "gen_planted",
    "gen_vc_gap_family",
    "load_formula",
    "mc_kernel",
    "opt_annotated_kernel",
    "opt_winwin",
    "parse_formula",
    "parse_gr",
    "parse_gr_collection",
    "protrusion_replace",
    "rank_width",
    "rank_width_exact",
    "read_annotation",
    "replace_modules",
    "sim_c_classes",
    "split_decomposition",
    "type_of",
    "verify_wsm",
    "write_annotation",
    "write_gr",
    "wsm_forest_3approx",
    "wsm_obstruction_approx",
]
